"""Product-Gaussian KDE and the distribution comparison metrics.

Covers the local density difference, a sample-based KL estimate (with the
exact discrete KL as its companion), empirical 1-D Wasserstein distance and
the text-level cosine / frequency metrics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    BaselineSummary,
    DriftConfig,
    PointCloud,
    as_cloud,
    check_dims,
    fit_baseline,
    scott_bandwidths,
    validate_cloud,
)
from .errors import EmptySample, EmptyText, NotADistribution, ZeroVector, DriftFieldError
from .ingest import TokenizedText

_LOG_2PI = math.log(2.0 * math.pi)
# queries * kernels * dims per evaluation chunk
_CHUNK = 2_000_000


@dataclass(frozen=True, eq=False)
class DensityModel:
    """Equal-weight mixture of axis-aligned Gaussians, one per source point."""

    points: np.ndarray
    bandwidths: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.shape[0] == 0:
            raise EmptySample("EmptySample: density model needs at least one point")
        h = np.asarray(self.bandwidths, dtype=np.float64).reshape(-1)
        if h.shape[0] != pts.shape[1]:
            check_dims(pts.shape[1], h.shape[0], "bandwidth count")
        if not np.all(h > 0):
            raise DriftFieldError("bandwidths must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "bandwidths", h)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def kind(self) -> str:
        return "product-gaussian"

    @classmethod
    def from_baseline(cls, summary: BaselineSummary) -> "DensityModel":
        return cls(summary.retained_points.points, summary.bandwidths)

    def _queries(self, x) -> np.ndarray:
        q = np.asarray(x, dtype=np.float64)
        if q.ndim == 1:
            q = q.reshape(1, -1) if self.dim > 1 or q.size == 1 else q.reshape(-1, 1)
        check_dims(self.dim, q.shape[1])
        return q

    def _kernel_terms(self, q: np.ndarray):
        """Yield (slice, z, weights) with kernel weights already normalised."""
        m, d = self.points.shape
        per = max(1, _CHUNK // max(1, m * d))
        log_norm = -0.5 * d * _LOG_2PI - float(np.sum(np.log(self.bandwidths))) - math.log(m)
        for start in range(0, q.shape[0], per):
            sl = slice(start, start + per)
            z = (q[sl, None, :] - self.points[None, :, :]) / self.bandwidths
            w = np.exp(log_norm - 0.5 * np.einsum("qmd,qmd->qm", z, z))
            yield sl, z, w

    def evaluate(self, x) -> np.ndarray:
        """Density at each query row of ``x``."""
        q = self._queries(x)
        out = np.empty(q.shape[0])
        for sl, _, w in self._kernel_terms(q):
            out[sl] = w.sum(axis=1)
        return out

    def gradient(self, x) -> np.ndarray:
        """Closed-form density gradient at each query row, shape ``(q, d)``."""
        q = self._queries(x)
        out = np.empty_like(q)
        for sl, z, w in self._kernel_terms(q):
            out[sl] = -np.einsum("qm,qmd->qd", w, z) / self.bandwidths
        return out


def model_from_cloud(cloud, bandwidths=None, cfg: Optional[DriftConfig] = None) -> DensityModel:
    """KDE of ``cloud`` with Scott bandwidths unless given explicitly."""
    cloud = validate_cloud(as_cloud(cloud))
    if bandwidths is None:
        if cfg is not None and cfg.bandwidth_override is not None:
            bandwidths = cfg.bandwidth_override
        elif cloud.n > 1:
            # same arithmetic as fit_baseline so identical clouds give identical models
            bandwidths = fit_baseline(cloud).bandwidths
        else:
            bandwidths = scott_bandwidths(np.zeros(cloud.d), 1)
    return DensityModel(cloud.points, bandwidths)


def kde_density(model: DensityModel, x) -> float:
    return float(model.evaluate(np.asarray(x, dtype=np.float64).reshape(1, -1))[0])


def density_difference(old: DensityModel, new: DensityModel, x):
    """``rho_new(x) - rho_old(x)``; scalar for one query, array for many."""
    check_dims(old.dim, new.dim)
    q = np.asarray(x, dtype=np.float64)
    single = q.ndim <= 1 and (q.size == old.dim)
    q = q.reshape(1, -1) if single else q
    diff = new.evaluate(q) - old.evaluate(q)
    return float(diff[0]) if single else diff


def kl_divergence(old: DensityModel, new: DensityModel, cfg: Optional[DriftConfig] = None) -> float:
    """Sample estimate of ``KL(old || new)`` over the old model's own points, in nats.

    Densities are floored at ``cfg.kl_floor``. Being an estimator it can be negative.
    """
    cfg = cfg or DriftConfig()
    check_dims(old.dim, new.dim)
    p = np.maximum(old.evaluate(old.points), cfg.kl_floor)
    q = np.maximum(new.evaluate(old.points), cfg.kl_floor)
    return float(np.mean(np.log(p / q)))


def kl_discrete(p, q) -> float:
    """Exact ``sum p_i ln(p_i / q_i)``; ``inf`` when ``q_i = 0 < p_i``."""
    p = np.asarray(p, dtype=np.float64).ravel()
    q = np.asarray(q, dtype=np.float64).ravel()
    check_dims(p.size, q.size)
    for name, v in (("p", p), ("q", q)):
        if v.size == 0 or np.any(v < 0) or not np.all(np.isfinite(v)) or abs(v.sum() - 1.0) > 1e-9:
            raise NotADistribution(f"NotADistribution: {name} must be nonnegative and sum to 1")
    support = p > 0
    if np.any(q[support] == 0):
        return math.inf
    return float(np.sum(p[support] * np.log(p[support] / q[support])))


def wasserstein_1d(a, b) -> float:
    """W1 between two empirical distributions on the line.

    Integrates ``|F_a - F_b|`` over the merged support, which equals the
    L1 distance between quantile functions.
    """
    a = np.sort(np.asarray(a, dtype=np.float64).ravel())
    b = np.sort(np.asarray(b, dtype=np.float64).ravel())
    if a.size == 0 or b.size == 0:
        raise EmptySample("EmptySample: both samples must be non-empty")
    if a.size == b.size:
        return float(np.mean(np.abs(a - b)))
    grid = np.sort(np.concatenate([a, b]))
    widths = np.diff(grid)
    fa = np.searchsorted(a, grid[:-1], side="right") / a.size
    fb = np.searchsorted(b, grid[:-1], side="right") / b.size
    return float(np.sum(np.abs(fa - fb) * widths))


def wasserstein_per_feature(old_points, new_points) -> np.ndarray:
    old_points = np.atleast_2d(old_points)
    new_points = np.atleast_2d(new_points)
    check_dims(old_points.shape[1], new_points.shape[1])
    return np.array([wasserstein_1d(old_points[:, j], new_points[:, j]) for j in range(old_points.shape[1])])


def cosine_deformation(u, v) -> float:
    """Cosine distance ``1 - cos(u, v)``, in ``[0, 2]``."""
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    check_dims(u.size, v.size)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ZeroVector("ZeroVector: cosine distance undefined for a zero vector")
    # 1 - cos = |u/|u| - v/|v||^2 / 2, exact zero for parallel inputs
    diff = u / nu - v / nv
    return float(min(2.0, 0.5 * float(diff @ diff)))


def _relative_frequencies(old: TokenizedText, new: TokenizedText) -> tuple[np.ndarray, np.ndarray]:
    if old.total == 0 or new.total == 0:
        raise EmptyText("EmptyText: both texts need at least one token")
    vocab = list(dict.fromkeys([*old.counts, *new.counts]))
    p = np.array([old.counts.get(w, 0) for w in vocab], dtype=np.float64) / old.total
    q = np.array([new.counts.get(w, 0) for w in vocab], dtype=np.float64) / new.total
    return p, q


def frequency_l2(old: TokenizedText, new: TokenizedText) -> float:
    """L2 distance between relative-frequency vectors over the union vocabulary."""
    p, q = _relative_frequencies(old, new)
    return float(np.linalg.norm(p - q))


def frequency_wasserstein(old: TokenizedText, new: TokenizedText) -> float:
    """W1 between the multisets of per-token relative frequencies (union vocabulary)."""
    p, q = _relative_frequencies(old, new)
    return wasserstein_1d(p, q)


def weighted_centroid(cloud: PointCloud, weights) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    return (w[:, None] * cloud.points).sum(axis=0) / w.sum()
