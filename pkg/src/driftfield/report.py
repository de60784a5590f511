"""JSON serialization for reports, baseline files and snapshot frames.

Floats are written with Python's shortest round-trip ``repr``; infinities
become the string sentinel ``"inf"`` (or ``"-inf"``).
"""
from __future__ import annotations

import json
import math

import numpy as np

from .core import BaselineSummary, PointCloud

SCHEMA_VERSION = 1


def jsonable(obj):
    """Recursively convert numpy values and infinities into JSON-ready Python."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            raise ValueError("NaN is not serializable in driftfield reports")
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(obj, *, indent=None) -> str:
    return json.dumps(jsonable(obj), indent=indent, allow_nan=False, ensure_ascii=False)


def unsentinel(v):
    """Inverse of the ``"inf"`` sentinel for scalars and nested lists."""
    if isinstance(v, list):
        return [unsentinel(x) for x in v]
    if v == "inf":
        return math.inf
    if v == "-inf":
        return -math.inf
    return v


def baseline_to_dict(summary: BaselineSummary, config_echo: dict | None = None) -> dict:
    cloud = summary.retained_points
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "driftfield-baseline",
        "count": summary.count,
        "dim": summary.dim,
        "mean": summary.mean,
        "covariance": summary.covariance,
        "eigenvalues": summary.eigenvalues,
        "eigenvectors": summary.eigenvectors,
        "stds": summary.stds,
        "bandwidths": summary.bandwidths,
        "feature_names": list(cloud.feature_names) if cloud.feature_names else None,
        "retained_points": cloud.points,
        "config_echo": config_echo or {},
    }


def baseline_from_dict(data: dict) -> BaselineSummary:
    if data.get("kind") != "driftfield-baseline":
        raise ValueError("not a driftfield baseline file")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported baseline schema_version {data.get('schema_version')}")
    d = int(data["dim"])

    def arr(key, shape):
        a = np.array(data[key], dtype=np.float64).reshape(shape)
        a.setflags(write=False)
        return a

    points = np.array(data["retained_points"], dtype=np.float64).reshape(-1, d)
    cloud = PointCloud(points, feature_names=data.get("feature_names"))
    return BaselineSummary(
        mean=arr("mean", (d,)),
        covariance=arr("covariance", (d, d)),
        eigenvalues=arr("eigenvalues", (d,)),
        eigenvectors=arr("eigenvectors", (d, d)),
        stds=arr("stds", (d,)),
        bandwidths=arr("bandwidths", (d,)),
        count=int(data["count"]),
        retained_points=cloud,
    )
