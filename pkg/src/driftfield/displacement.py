"""Force vectors exerted by new points on the baseline center."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BaselineSummary, DriftConfig, as_cloud, check_dims, validate_cloud
from .errors import EmptyField


@dataclass(frozen=True, eq=False)
class ForceField:
    """Per-point forces ``F_i = x_i - mu`` and their magnitude variants.

    ``faded`` is ``|F| * exp(-k |F|)``; ``relative`` is ``|F| / pooled_std``
    and becomes ``inf`` for a constant baseline.
    """

    vectors: np.ndarray
    raw: np.ndarray
    faded: np.ndarray
    relative: np.ndarray
    center: np.ndarray
    ids: Optional[tuple] = None

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def forces(self):
        ids = self.ids or tuple(str(i) for i in range(len(self)))
        return list(zip(ids, self.vectors, self.raw, self.faded, self.relative))


def pooled_std(baseline: BaselineSummary) -> float:
    return float(np.mean(baseline.stds))


def force_field(baseline: BaselineSummary, new_cloud, cfg: Optional[DriftConfig] = None) -> ForceField:
    cfg = cfg or DriftConfig()
    new_cloud = validate_cloud(as_cloud(new_cloud))
    check_dims(baseline.dim, new_cloud.d)
    vectors = new_cloud.points - baseline.mean
    raw = np.linalg.norm(vectors, axis=1)
    faded = raw * np.exp(-cfg.fade_k * raw)
    spread = pooled_std(baseline)
    if spread > 0:
        relative = raw / spread
    else:
        relative = np.full_like(raw, np.inf)
    return ForceField(vectors, raw, faded, relative, baseline.mean.copy(), new_cloud.ids)


def average_displacement(field: ForceField) -> float:
    """Mean raw force magnitude ``D``; faded and relative variants never enter it."""
    if len(field) == 0:
        raise EmptyField("EmptyField: no forces to average")
    return float(np.mean(field.raw))
