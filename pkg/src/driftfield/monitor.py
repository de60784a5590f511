"""Incremental statistics and per-batch drift evaluation.

Baselines stay frozen while batches are scored; :class:`RunningStats` only
exists to rebuild a baseline cheaply (chunked or streamed) when an operator
asks for it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import BaselineSummary, DriftConfig, as_cloud, check_dims, fit_baseline, validate_cloud
from .density import DensityModel, kl_divergence, model_from_cloud, wasserstein_per_feature
from .displacement import ForceField, average_displacement, force_field
from .geometry import fit_projection
from .report import SCHEMA_VERSION, jsonable
from .shape import compare_shapes, mean_shift
from .strain import strain_summary

# strain runs in the PCA plane above this many features
MAX_STRAIN_DIMS = 20


@dataclass(frozen=True, eq=False)
class RunningStats:
    """Count, mean and accumulated centred outer products (``cov = m2 / (count - 1)``)."""

    count: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def empty(cls, dim: int) -> "RunningStats":
        return cls(0, np.zeros(dim), np.zeros((dim, dim)))

    @classmethod
    def from_points(cls, points) -> "RunningStats":
        x = np.atleast_2d(np.asarray(points, dtype=np.float64))
        n = x.shape[0]
        if n == 0:
            return cls.empty(x.shape[1])
        mean = x.mean(axis=0)
        c = x - mean
        return cls(n, mean, c.T @ c)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def covariance(self) -> np.ndarray:
        if self.count < 2:
            raise ValueError("covariance needs at least 2 observations")
        return self.m2 / (self.count - 1)


def update(stats: RunningStats, x) -> RunningStats:
    """Welford single-point update."""
    x = np.asarray(x, dtype=np.float64).ravel()
    check_dims(stats.dim, x.size)
    n = stats.count + 1
    delta = x - stats.mean
    mean = stats.mean + delta / n
    m2 = stats.m2 + np.outer(delta, x - mean)
    return RunningStats(n, mean, 0.5 * (m2 + m2.T))


def merge(a: RunningStats, b: RunningStats) -> RunningStats:
    """Chan et al. pairwise combination of two partial summaries."""
    check_dims(a.dim, b.dim)
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    n = a.count + b.count
    delta = b.mean - a.mean
    mean = (a.count * a.mean + b.count * b.mean) / n
    m2 = a.m2 + b.m2 + np.outer(delta, delta) * (a.count * b.count / n)
    return RunningStats(n, mean, m2)


@dataclass(eq=False)
class DeformationReport:
    """All metrics for one batch against a frozen baseline.

    Covariance-based fields are ``None`` when ``partial`` is set (batch of
    fewer than two points); they are then omitted from :meth:`to_dict`.
    """

    average_displacement: float
    d_mu: float
    wasserstein_per_feature: np.ndarray
    partial: bool
    config_echo: dict
    eigen_ratios: Optional[np.ndarray] = None
    rotation_angles_rad: Optional[np.ndarray] = None
    degenerate_flags: Optional[np.ndarray] = None
    d_sigma: Optional[float] = None
    d_total: Optional[float] = None
    drifted: bool = False
    kl_estimate: Optional[float] = None
    strain: Optional[dict] = None
    batch_size: int = 0
    forces: Optional[ForceField] = field(default=None, repr=False)

    @property
    def wasserstein_mean(self) -> float:
        return float(np.mean(self.wasserstein_per_feature))

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "average_displacement": self.average_displacement,
        }
        if not self.partial:
            out.update(
                eigen_ratios=self.eigen_ratios,
                rotation_angles_rad=self.rotation_angles_rad,
                degenerate_flags=self.degenerate_flags,
            )
        out["d_mu"] = self.d_mu
        if not self.partial:
            out.update(d_sigma=self.d_sigma, d_total=self.d_total)
        out["drifted"] = self.drifted
        if not self.partial:
            out["kl_estimate"] = self.kl_estimate
        out["wasserstein_per_feature"] = self.wasserstein_per_feature
        out["wasserstein_mean"] = self.wasserstein_mean
        if not self.partial:
            out["strain"] = self.strain
        out["partial"] = self.partial
        out["batch_size"] = self.batch_size
        out["config_echo"] = self.config_echo
        return jsonable(out)


def _strain_models(baseline: BaselineSummary, batch, cfg: DriftConfig) -> tuple[DensityModel, DensityModel]:
    if baseline.dim <= MAX_STRAIN_DIMS:
        return DensityModel.from_baseline(baseline), model_from_cloud(batch, cfg=cfg)
    proj = fit_projection(baseline, cfg.reduce_dims, cfg.eig_tol)
    ob = proj.project(baseline.retained_points.points)
    nb = proj.project(batch.points)
    return model_from_cloud(ob), model_from_cloud(nb)


def evaluate_batch(baseline: BaselineSummary, batch, cfg: Optional[DriftConfig] = None) -> DeformationReport:
    """Score ``batch`` against ``baseline``; deterministic given inputs and config."""
    cfg = cfg or DriftConfig()
    batch = validate_cloud(as_cloud(batch))
    check_dims(baseline.dim, batch.d)
    forces = force_field(baseline, batch, cfg)
    d_avg = average_displacement(forces)
    batch_mean = batch.points.mean(axis=0)
    wass = wasserstein_per_feature(baseline.retained_points.points, batch.points)
    echo = cfg.to_dict()
    if batch.n < 2:
        return DeformationReport(
            average_displacement=d_avg,
            d_mu=mean_shift(baseline.mean, batch_mean),
            wasserstein_per_feature=wass,
            partial=True,
            config_echo=echo,
            batch_size=batch.n,
            forces=forces,
        )
    new_summary = fit_baseline(batch, cfg)
    shape = compare_shapes(baseline, new_summary, cfg)
    old_m = DensityModel.from_baseline(baseline)
    new_m = DensityModel(batch.points, new_summary.bandwidths)
    kl = kl_divergence(old_m, new_m, cfg)
    s_old, s_new = _strain_models(baseline, batch, cfg)
    st = strain_summary(s_old, s_new, cfg=cfg)
    strain = {
        "mean_abs_normal": st.mean_abs_normal,
        "mean_abs_shear": [[i, j, v] for i, j, v in st.mean_abs_shear],
        "mean_volumetric": st.mean_volumetric,
    }
    return DeformationReport(
        average_displacement=d_avg,
        d_mu=shape.d_mu,
        wasserstein_per_feature=wass,
        partial=False,
        config_echo=echo,
        eigen_ratios=shape.stretch_ratios,
        rotation_angles_rad=shape.rotation_angles_rad,
        degenerate_flags=shape.degenerate_flags,
        d_sigma=shape.d_sigma,
        d_total=shape.d_total,
        drifted=shape.drifted,
        kl_estimate=kl,
        strain=strain,
        batch_size=batch.n,
        forces=forces,
    )
