"""PCA projection, 2-D convex hulls and deformation snapshots."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import BaselineSummary, DriftConfig, as_cloud, fit_baseline, validate_cloud
from .density import DensityModel, model_from_cloud
from .errors import BadRank, DriftFieldError, EmptyCloud

DEFAULT_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass(frozen=True, eq=False)
class Projection:
    """Orthonormal map onto the top-``r`` baseline principal axes.

    ``degenerate`` is set when the r-th and (r+1)-th eigenvalues are within
    a factor ``eig_tol``, i.e. the retained subspace is not well defined.
    """

    basis: np.ndarray
    origin: np.ndarray
    r: int
    degenerate: bool = False

    def project(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return (x - self.origin) @ self.basis


def fit_projection(baseline: BaselineSummary, r: int, eig_tol: float = 1.05) -> Projection:
    d = baseline.dim
    if not 1 <= r <= d:
        raise BadRank(f"BadRank: target rank {r} outside [1, {d}]")
    lam = baseline.eigenvalues
    degenerate = bool(r < d and lam[r - 1] < eig_tol * lam[r])
    return Projection(baseline.eigenvectors[:, :r].copy(), baseline.mean.copy(), r, degenerate)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points) -> np.ndarray:
    """Counter-clockwise hull vertices by Andrew's monotone chain.

    Collinear boundary points and duplicates are dropped; one distinct point
    gives one vertex, two give a segment.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DriftFieldError("convex_hull_2d expects an (n, 2) array")
    if pts.shape[0] == 0:
        raise EmptyCloud()
    uniq = sorted(set(map(tuple, pts.tolist())))
    if len(uniq) <= 2:
        return np.array(uniq, dtype=np.float64)

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(uniq)
    upper = chain(reversed(uniq))
    return np.array(lower[:-1] + upper[:-1], dtype=np.float64)


def hull_area(hull) -> float:
    h = np.asarray(hull, dtype=np.float64)
    if h.shape[0] < 3:
        return 0.0
    x, y = h[:, 0], h[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def in_hull(hull, p, tol: float = 1e-9) -> bool:
    """Whether ``p`` lies inside or on a counter-clockwise hull, within ``tol``."""
    h = np.asarray(hull, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    scale = max(1.0, float(np.abs(h).max(initial=0.0)))
    if h.shape[0] == 1:
        return bool(np.linalg.norm(p - h[0]) <= tol * scale)
    if h.shape[0] == 2:
        a, b = h
        ab = b - a
        t = np.clip(np.dot(p - a, ab) / np.dot(ab, ab), 0.0, 1.0)
        return bool(np.linalg.norm(p - (a + t * ab)) <= tol * scale)
    for i in range(h.shape[0]):
        a, b = h[i], h[(i + 1) % h.shape[0]]
        edge = np.linalg.norm(b - a)
        if _cross(a, b, p) < -tol * scale * edge:
            return False
    return True


@dataclass(frozen=True, eq=False)
class SnapshotFrame:
    t: float
    points: np.ndarray
    hull_baseline: np.ndarray
    hull_new: np.ndarray
    arrows: np.ndarray

    def to_dict(self) -> dict:
        return {
            "t": float(self.t),
            "points": self.points.tolist(),
            "hull_baseline": self.hull_baseline.tolist(),
            "hull_new": self.hull_new.tolist(),
            "arrows": self.arrows.tolist(),
        }


@dataclass(frozen=True, eq=False)
class SnapshotSeries:
    """Baseline positions moved by ``t * w(x)`` for each fraction ``t``.

    ``w = scale * v`` with ``v`` the KDE displacement field in projected space.
    Arrows are ``[x, y, dx, dy]`` anchored at the undeformed positions with
    ``(dx, dy) = t * w``.
    """

    fractions: tuple
    frames: tuple
    scale: float
    projection: Projection
    field: np.ndarray

    def __len__(self) -> int:
        return len(self.frames)


def _to_plane(proj: Projection, x: np.ndarray) -> np.ndarray:
    y = proj.project(x)
    if y.shape[1] == 1:
        y = np.hstack([y, np.zeros_like(y)])
    return y


def display_scale(field: np.ndarray, target_shift: np.ndarray) -> float:
    """Scalar ``c >= 0`` so that the mean of ``c * field`` best matches ``target_shift``.

    Zero when the field is identically zero or points away from the shift.
    """
    vbar = field.mean(axis=0)
    denom = float(vbar @ vbar)
    if not np.any(field) or denom == 0.0:
        return 0.0
    return max(0.0, float(vbar @ target_shift) / denom)


def snapshot_series(
    baseline,
    new_cloud,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    cfg: Optional[DriftConfig] = None,
    *,
    old_model: Optional[DensityModel] = None,
    new_model: Optional[DensityModel] = None,
) -> SnapshotSeries:
    """Deformation frames in the 2-D principal plane of the baseline.

    Models, when given, must already live in the projected plane; by default
    they are KDEs of the projected clouds.
    """
    cfg = cfg or DriftConfig()
    base = as_cloud(baseline)
    new = as_cloud(new_cloud)
    if base.n == 0 or new.n == 0:
        raise EmptyCloud()
    base, new = validate_cloud(base), validate_cloud(new)
    fr = tuple(float(t) for t in fractions)
    if list(fr) != sorted(fr) or not fr or fr[0] != 0.0 or fr[-1] != 1.0 or any(t < 0 or t > 1 for t in fr):
        raise DriftFieldError("fractions must be sorted within [0, 1] and include 0 and 1")

    summary = fit_baseline(base, cfg)
    proj = fit_projection(summary, min(2, summary.dim), cfg.eig_tol)
    pb = _to_plane(proj, base.points)
    pn = _to_plane(proj, new.points)
    old_m = old_model or model_from_cloud(pb)
    new_m = new_model or model_from_cloud(pn)
    v = new_m.gradient(pb) - old_m.gradient(pb)
    c = display_scale(v, pn.mean(axis=0) - pb.mean(axis=0))
    w = c * v
    hull_new = convex_hull_2d(pn)
    frames = []
    for t in fr:
        pos = pb + t * w
        frames.append(SnapshotFrame(t, pos, convex_hull_2d(pos), hull_new, np.hstack([pb, t * w])))
    return SnapshotSeries(fr, tuple(frames), c, proj, v)
