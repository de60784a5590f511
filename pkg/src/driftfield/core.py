"""Domain types and the baseline fit shared by every analysis.

A :class:`PointCloud` is the universal input: ``n`` points in ``d`` features.
:func:`fit_baseline` turns one into a frozen :class:`BaselineSummary`
(mean, unbiased covariance, sorted eigenpairs, KDE bandwidths).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, DriftFieldError, EmptyCloud, NonFinite, ShapeMismatch, TooFewPoints

#: relative clamp for negative eigenvalue noise
EIG_CLAMP_REL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Ordered set of ``n`` points in ``d`` dimensions.

    A 1-D ``points`` array is read as ``n`` scalar observations (``d = 1``).
    Construction only coerces; use :func:`validate_cloud` to check invariants.
    """

    points: np.ndarray
    ids: Optional[tuple] = None
    feature_names: Optional[tuple] = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        elif pts.ndim != 2:
            raise ShapeMismatch(f"ShapeMismatch: points must be 2-D, got {pts.ndim}-D")
        object.__setattr__(self, "points", _frozen(pts))
        if self.ids is not None:
            object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        if self.feature_names is not None:
            object.__setattr__(self, "feature_names", tuple(str(f) for f in self.feature_names))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n


def as_cloud(x) -> PointCloud:
    return x if isinstance(x, PointCloud) else PointCloud(x)


def validate_cloud(cloud: PointCloud) -> PointCloud:
    """Return ``cloud`` unchanged if it satisfies the PointCloud invariants."""
    pts = cloud.points
    if pts.shape[0] == 0 or pts.shape[1] == 0:
        raise EmptyCloud()
    bad = np.argwhere(~np.isfinite(pts))
    if len(bad):
        raise NonFinite(int(bad[0, 0]), int(bad[0, 1]))
    if cloud.ids is not None and len(cloud.ids) != cloud.n:
        raise ShapeMismatch(f"ShapeMismatch: {len(cloud.ids)} ids for {cloud.n} points")
    if cloud.feature_names is not None and len(cloud.feature_names) != cloud.d:
        raise ShapeMismatch(
            f"ShapeMismatch: {len(cloud.feature_names)} feature names for {cloud.d} columns"
        )
    return cloud


@dataclass(frozen=True)
class DriftConfig:
    """Tunables for every metric.

    ``threshold`` defaults to ``inf``, meaning report-only (never drifted).
    """

    fade_k: float = 1.0
    alpha: float = 1.0
    beta: float = 1.0
    threshold: float = math.inf
    bandwidth_override: Optional[tuple] = None
    reduce_dims: int = 2
    kl_floor: float = 1e-12
    eig_tol: float = 1.05
    seed: int = 42
    step_scale: float = 0.1

    def __post_init__(self):
        for name in ("fade_k", "alpha", "beta", "threshold"):
            v = float(getattr(self, name))
            if math.isnan(v) or v < 0:
                raise DriftFieldError(f"{name} must be nonnegative, got {v}")
        if self.alpha + self.beta <= 0:
            raise DriftFieldError("alpha + beta must be positive")
        if self.bandwidth_override is not None:
            bw = tuple(float(h) for h in self.bandwidth_override)
            if not bw or any(not (h > 0 and math.isfinite(h)) for h in bw):
                raise DriftFieldError("bandwidth_override entries must be positive and finite")
            object.__setattr__(self, "bandwidth_override", bw)
        if int(self.reduce_dims) != self.reduce_dims or self.reduce_dims < 2:
            raise DriftFieldError("reduce_dims must be an integer >= 2")
        if not self.kl_floor > 0:
            raise DriftFieldError("kl_floor must be positive")
        if not self.eig_tol >= 1.0:
            raise DriftFieldError("eig_tol must be >= 1")
        if not self.step_scale > 0:
            raise DriftFieldError("step_scale must be positive")
        if not (-(2**63) <= int(self.seed) < 2**64):
            raise DriftFieldError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["bandwidth_override"] is not None:
            out["bandwidth_override"] = list(out["bandwidth_override"])
        return out


@dataclass(frozen=True, eq=False)
class BaselineSummary:
    """Fitted statistics of a baseline cloud. Build with :func:`fit_baseline`."""

    mean: np.ndarray
    covariance: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    stds: np.ndarray
    bandwidths: np.ndarray
    count: int
    retained_points: PointCloud = field(repr=False)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def sorted_eigh(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a symmetric PSD matrix, descending, with a fixed sign convention.

    Each eigenvector column is flipped so its largest-magnitude entry is positive.
    Negative eigenvalues within ``EIG_CLAMP_REL * max(lambda)`` are clamped to 0.
    """
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals, kind="stable")[::-1]
    vals = vals[order].copy()
    vecs = vecs[:, order].copy()
    tol = EIG_CLAMP_REL * float(np.abs(vals).max(initial=0.0))
    if vals.size and vals[-1] < -tol:
        raise RuntimeError(f"covariance is not positive semidefinite: min eigenvalue {vals[-1]}")
    vals[vals < 0] = 0.0
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vals, vecs * signs


def scott_bandwidths(stds: np.ndarray, m: int) -> np.ndarray:
    """Per-feature Scott bandwidths ``std_j * m**(-1/(d+4))``.

    Zero-variance features get ``max(1e-6, 1e-3 * mean(stds))`` so the KDE stays defined.
    """
    d = stds.shape[0]
    h = stds * float(m) ** (-1.0 / (d + 4))
    fallback = max(1e-6, 1e-3 * float(np.mean(stds)))
    return np.where(stds > 0, h, fallback)


def fit_baseline(cloud, cfg: Optional[DriftConfig] = None) -> BaselineSummary:
    """Fit mean, unbiased covariance, eigenpairs and KDE bandwidths.

    Parameters
    ----------
    cloud : PointCloud or array_like
        At least two points.
    cfg : DriftConfig, optional
        Only ``bandwidth_override`` is consulted.

    Examples
    --------
    >>> s = fit_baseline(np.array([[0., 0.], [2., 0.], [0., 2.], [2., 2.]]))
    >>> s.mean
    array([1., 1.])
    """
    cfg = cfg or DriftConfig()
    cloud = validate_cloud(as_cloud(cloud))
    x = cloud.points
    n, d = x.shape
    if n < 2:
        raise TooFewPoints(f"TooFewPoints: baseline needs at least 2 points, got {n}")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    cov = 0.5 * (cov + cov.T)
    vals, vecs = sorted_eigh(cov)
    stds = np.sqrt(np.diag(cov))
    if cfg.bandwidth_override is not None:
        bw = np.asarray(cfg.bandwidth_override, dtype=np.float64)
        if bw.shape != (d,):
            raise ShapeMismatch(f"ShapeMismatch: bandwidth_override has {bw.shape[0]} entries for {d} features")
    else:
        bw = scott_bandwidths(stds, n)
    return BaselineSummary(
        mean=_frozen(mean),
        covariance=_frozen(cov),
        eigenvalues=_frozen(vals),
        eigenvectors=_frozen(vecs),
        stds=_frozen(stds),
        bandwidths=_frozen(np.array(bw, dtype=np.float64)),
        count=n,
        retained_points=cloud,
    )


def check_dims(expected: int, got: int, what: str = "dimension") -> None:
    if expected != got:
        raise DimensionMismatch(expected, got, what)


__all__: Sequence[str] = [
    "PointCloud",
    "BaselineSummary",
    "DriftConfig",
    "as_cloud",
    "validate_cloud",
    "fit_baseline",
    "sorted_eigh",
    "scott_bandwidths",
]
