"""Global shape deformation from covariance eigen-structure.

Eigenpairs are matched by descending rank. Angles come with degeneracy
flags because eigenvectors of (nearly) repeated eigenvalues are arbitrary.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import EIG_CLAMP_REL, BaselineSummary, DriftConfig, check_dims


def _zero_tol(old: BaselineSummary, new: BaselineSummary) -> float:
    scale = max(float(old.eigenvalues.max(initial=0.0)), float(new.eigenvalues.max(initial=0.0)))
    return EIG_CLAMP_REL * scale


def eigen_ratios(old: BaselineSummary, new: BaselineSummary) -> tuple[np.ndarray, np.ndarray]:
    """``lambda_new,i / lambda_old,i`` per rank, plus flags for zero-variance axes.

    Both eigenvalues ~0 gives ratio 1 (flagged); only the old one ~0 gives ``inf`` (flagged).
    """
    check_dims(old.dim, new.dim)
    tol = _zero_tol(old, new)
    lo, ln = old.eigenvalues, new.eigenvalues
    old_zero = lo <= tol
    new_zero = ln <= tol
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = ln / lo
    ratios = np.where(old_zero & new_zero, 1.0, np.where(old_zero, np.inf, ratios))
    return ratios, old_zero.copy()


def degenerate_axes(eigenvalues: np.ndarray, eig_tol: float) -> np.ndarray:
    """Flag ranks whose eigenvalue is within a factor ``eig_tol`` of a neighbour.

    Both members of a near-tied pair are flagged.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    d = lam.shape[0]
    flags = np.zeros(d, dtype=bool)
    if d < 2:
        return flags
    tiny = EIG_CLAMP_REL * float(lam.max(initial=0.0))
    upper, lower = lam[:-1], lam[1:]
    tied = (upper < eig_tol * lower) | ((upper <= tiny) & (lower <= tiny))
    flags[:-1] |= tied
    flags[1:] |= tied
    return flags


def _unsigned_angle(u: np.ndarray, v: np.ndarray) -> float:
    # 2*atan2(|u-v|, |u+v|) equals arccos(u.v) for unit vectors and is exact near 0
    if float(u @ v) < 0:
        v = -v
    return float(2.0 * np.arctan2(np.linalg.norm(u - v), np.linalg.norm(u + v)))


def rotation_angles(
    old: BaselineSummary, new: BaselineSummary, eig_tol: float = 1.05
) -> tuple[np.ndarray, np.ndarray]:
    """``arccos |u_old,i . u_new,i|`` per rank, in ``[0, pi/2]``, with degeneracy flags."""
    check_dims(old.dim, new.dim)
    uo, un = old.eigenvectors, new.eigenvectors
    angles = np.array([_unsigned_angle(uo[:, i], un[:, i]) for i in range(old.dim)])
    angles = np.clip(angles, 0.0, np.pi / 2)
    flags = degenerate_axes(old.eigenvalues, eig_tol) | degenerate_axes(new.eigenvalues, eig_tol)
    return angles, flags


def mean_shift(old_mean, new_mean) -> float:
    a, b = np.asarray(old_mean, dtype=np.float64), np.asarray(new_mean, dtype=np.float64)
    check_dims(a.size, b.size)
    return float(np.linalg.norm(b.ravel() - a.ravel()))


def covariance_shift(old_cov, new_cov) -> float:
    """Frobenius norm (with the square root) of ``new_cov - old_cov``."""
    a, b = np.atleast_2d(old_cov), np.atleast_2d(new_cov)
    check_dims(a.shape[0], a.shape[1], "square size")
    check_dims(a.shape[0], b.shape[0])
    check_dims(b.shape[0], b.shape[1], "square size")
    return float(np.linalg.norm(b - a, ord="fro"))


def composite_index(d_mu: float, d_sigma: float, cfg: Optional[DriftConfig] = None) -> tuple[float, bool]:
    """``alpha * d_mu + beta * d_sigma`` and whether it strictly exceeds the threshold."""
    cfg = cfg or DriftConfig()
    d_total = cfg.alpha * d_mu + cfg.beta * d_sigma
    return d_total, bool(d_total > cfg.threshold)


@dataclass(frozen=True, eq=False)
class ShapeDeformation:
    stretch_ratios: np.ndarray
    rotation_angles_rad: np.ndarray
    degenerate_flags: np.ndarray
    zero_variance_flags: np.ndarray
    d_mu: float
    d_sigma: float
    d_total: float
    drifted: bool


def compare_shapes(old: BaselineSummary, new: BaselineSummary, cfg: Optional[DriftConfig] = None) -> ShapeDeformation:
    cfg = cfg or DriftConfig()
    ratios, zero_flags = eigen_ratios(old, new)
    angles, deg_flags = rotation_angles(old, new, cfg.eig_tol)
    d_mu = mean_shift(old.mean, new.mean)
    d_sigma = covariance_shift(old.covariance, new.covariance)
    d_total, drifted = composite_index(d_mu, d_sigma, cfg)
    return ShapeDeformation(ratios, angles, deg_flags | zero_flags, zero_flags, d_mu, d_sigma, d_total, drifted)
