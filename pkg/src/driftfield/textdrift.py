"""Whole-text drift metrics: lengths, cosine deformation, frequency L2, Wasserstein."""
from __future__ import annotations

from typing import Optional

from .density import cosine_deformation, frequency_l2, frequency_wasserstein, weighted_centroid
from .errors import EmptyText
from .ingest import EmbeddingTable, embed_text, tokenize

TEXT_FIELDS = (
    "original_length_chars",
    "drifted_length_chars",
    "length_change_pct",
    "deformation_cosine",
    "shape_change_l2",
    "wasserstein",
)


def length_change_pct(original_chars: int, drifted_chars: int) -> float:
    """Percentage reduction ``100 * (1 - drifted / original)``, one decimal."""
    if original_chars == 0:
        raise EmptyText("EmptyText: original text is empty")
    return round(100.0 * (1.0 - drifted_chars / original_chars), 1)


def text_drift(
    original: str,
    drifted: str,
    table: Optional[EmbeddingTable] = None,
    *,
    seed: int = 42,
    dim: int = 64,
) -> dict:
    """The six text-drift metrics, keyed by :data:`TEXT_FIELDS`.

    Cosine deformation compares count-weighted centroid embeddings;
    L2 and Wasserstein work on union-vocabulary relative frequencies.
    """
    a, b = tokenize(original), tokenize(drifted)
    if a.total == 0 or b.total == 0:
        raise EmptyText("EmptyText: both texts need at least one token")
    ea = embed_text(a, table, seed=seed, dim=dim)
    eb = embed_text(b, table, seed=seed, dim=dim)
    cos = cosine_deformation(weighted_centroid(ea.cloud, ea.weights), weighted_centroid(eb.cloud, eb.weights))
    return {
        "original_length_chars": len(original),
        "drifted_length_chars": len(drifted),
        "length_change_pct": length_change_pct(len(original), len(drifted)),
        "deformation_cosine": cos,
        "shape_change_l2": frequency_l2(a, b),
        "wasserstein": frequency_wasserstein(a, b),
    }
