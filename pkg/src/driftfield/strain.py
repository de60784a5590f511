"""Displacement field from KDE gradients and its strain tensor.

The displacement is ``v(x) = grad p_new(x) - grad p_old(x)`` (analytic mixture
gradients, proportionality constant 1). The strain ``eps = grad v`` is taken by
Richardson-extrapolated central differences with per-axis step
``h_k * step_scale`` so it never relies on the density internals.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import DriftConfig, as_cloud, check_dims, validate_cloud
from .density import DensityModel
from .errors import EmptyEvaluationSet

Field = Callable[[np.ndarray], np.ndarray]


def _as_queries(x, d: int) -> tuple[np.ndarray, bool]:
    q = np.asarray(x, dtype=np.float64)
    single = q.ndim <= 1 and q.size == d
    q = q.reshape(1, d) if single else np.atleast_2d(q)
    check_dims(d, q.shape[1])
    return q, single


def displacement_at(old: DensityModel, new: DensityModel, x) -> np.ndarray:
    """Displacement ``grad p_new(x) - grad p_old(x)`` at one query or each row of many."""
    check_dims(old.dim, new.dim)
    q, single = _as_queries(x, old.dim)
    v = new.gradient(q) - old.gradient(q)
    return v[0] if single else v


def kde_field(old: DensityModel, new: DensityModel) -> Field:
    return lambda q: new.gradient(q) - old.gradient(q)


def _central(field: Field, q: np.ndarray, steps: np.ndarray) -> np.ndarray:
    n, d = q.shape
    jac = np.empty((n, d, d))
    for k in range(d):
        e = np.zeros(d)
        e[k] = steps[k]
        jac[:, :, k] = (field(q + e) - field(q - e)) / (2.0 * steps[k])
    return jac


def jacobian_fd(field: Field, q: np.ndarray, steps: np.ndarray, richardson: bool = True) -> np.ndarray:
    """Jacobian ``J[n, j, k] = d field_j / d x_k`` at each query row.

    Central differences with step ``steps[k]``; with ``richardson`` the
    step and half-step estimates are combined as ``(4 D(s/2) - D(s)) / 3``,
    cancelling the leading O(s^2) error term.
    """
    steps = np.asarray(steps, dtype=np.float64)
    coarse = _central(field, q, steps)
    if not richardson:
        return coarse
    fine = _central(field, q, steps / 2.0)
    return (4.0 * fine - coarse) / 3.0


@dataclass(frozen=True, eq=False)
class StrainSample:
    location: np.ndarray
    displacement: np.ndarray
    tensor: np.ndarray

    @property
    def normal(self) -> np.ndarray:
        return np.diag(self.tensor).copy()

    @property
    def shear(self) -> np.ndarray:
        s = 0.5 * (self.tensor + self.tensor.T)
        np.fill_diagonal(s, 0.0)
        return s

    @property
    def volumetric(self) -> float:
        return float(np.sum(self.normal))


def _steps(old: DensityModel, step_scale: float, steps=None) -> np.ndarray:
    if steps is not None:
        return np.broadcast_to(np.asarray(steps, dtype=np.float64), (old.dim,)).copy()
    return old.bandwidths * step_scale


def strain_at(
    old: DensityModel,
    new: DensityModel,
    x,
    step_scale: float = 0.1,
    *,
    field: Optional[Field] = None,
    steps=None,
) -> StrainSample:
    """Strain tensor at ``x``.

    ``field`` replaces the KDE displacement (any callable taking ``(n, d)``
    queries to ``(n, d)`` vectors); ``steps`` replaces the per-axis FD steps.
    """
    check_dims(old.dim, new.dim)
    q, _ = _as_queries(x, old.dim)
    q = q[:1]
    f = field or kde_field(old, new)
    jac = jacobian_fd(f, q, _steps(old, step_scale, steps))
    return StrainSample(q[0].copy(), f(q)[0], jac[0])


@dataclass(frozen=True, eq=False)
class StrainSummary:
    """Per-point strain plus the aggregates used in drift reports.

    ``mean_abs_normal`` tracks per-axis stretch (data-drift signal),
    ``mean_abs_shear`` ``(i, j, value)`` triples track relationship change.
    """

    locations: np.ndarray
    displacements: np.ndarray
    tensors: np.ndarray
    mean_abs_normal: np.ndarray
    mean_abs_shear: list
    mean_volumetric: float

    @property
    def samples(self) -> list:
        return [StrainSample(l, v, t) for l, v, t in zip(self.locations, self.displacements, self.tensors)]

    def shear_value(self, i: int, j: int) -> float:
        i, j = min(i, j), max(i, j)
        for a, b, val in self.mean_abs_shear:
            if (a, b) == (i, j):
                return val
        raise KeyError((i, j))


def default_eval_points(old: DensityModel) -> np.ndarray:
    return np.vstack([old.points, old.points.mean(axis=0)])


def strain_summary(
    old: DensityModel,
    new: DensityModel,
    eval_points=None,
    cfg: Optional[DriftConfig] = None,
    *,
    field: Optional[Field] = None,
) -> StrainSummary:
    """Evaluate strain over ``eval_points`` (default: old model's points plus their mean)."""
    cfg = cfg or DriftConfig()
    check_dims(old.dim, new.dim)
    if eval_points is None:
        q = default_eval_points(old)
    else:
        pts = as_cloud(eval_points)
        if pts.n == 0:
            raise EmptyEvaluationSet("EmptyEvaluationSet: no evaluation points")
        q = validate_cloud(pts).points
        check_dims(old.dim, q.shape[1])
    f = field or kde_field(old, new)
    jac = jacobian_fd(f, q, _steps(old, cfg.step_scale))
    d = old.dim
    normal = np.abs(np.diagonal(jac, axis1=1, axis2=2)).mean(axis=0)
    sym = 0.5 * (jac + np.transpose(jac, (0, 2, 1)))
    shear = [(i, j, float(np.abs(sym[:, i, j]).mean())) for i in range(d) for j in range(i + 1, d)]
    volumetric = float(np.trace(jac, axis1=1, axis2=2).mean())
    return StrainSummary(q, f(q), jac, normal, shear, volumetric)
