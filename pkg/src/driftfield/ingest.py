"""Loaders: numeric CSV, embedding tables, and text to point clouds."""
from __future__ import annotations

import hashlib
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .core import PointCloud, validate_cloud
from .errors import EmptyVocabulary, IoError, ParseError, RaggedRows, DriftFieldError

# letters and digits only; underscore is a separator
_TOKEN = re.compile(r"[^\W_]+")


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"Io: cannot read {path}: {exc}") from exc


def _parse_float(cell: str, row: int, col: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(row, col, cell) from None


def parse_csv_rows(lines, has_header: bool = False) -> PointCloud:
    """Parse comma-separated numeric lines (no quoting) into a validated cloud.

    Blank lines are ignored. ``Parse`` row indices count data rows from 0.
    """
    header = None
    rows: list[list[float]] = []
    width = None
    for line in lines:
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        cells = line.split(",")
        if has_header and header is None:
            header = [c.strip() for c in cells]
            width = len(header)
            continue
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise RaggedRows(f"RaggedRows: row {len(rows)} has {len(cells)} fields, expected {width}")
        r = len(rows)
        rows.append([_parse_float(c, r, j) for j, c in enumerate(cells)])
    pts = np.array(rows, dtype=np.float64).reshape(len(rows), width or 0)
    return validate_cloud(PointCloud(pts, feature_names=header))


def load_csv(path, has_header: bool = False) -> PointCloud:
    return parse_csv_rows(_read_text(path).splitlines(), has_header=has_header)


def write_csv(path, cloud: PointCloud) -> None:
    """Write ``cloud`` as CSV using shortest round-trip float formatting."""
    lines = []
    if cloud.feature_names is not None:
        lines.append(",".join(cloud.feature_names))
    lines.extend(",".join(repr(float(v)) for v in row) for row in cloud.points)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class EmbeddingTable:
    dim: int
    entries: dict

    def __post_init__(self):
        if self.dim < 1:
            raise DriftFieldError("embedding dim must be positive")
        clean = {}
        for tok, vec in self.entries.items():
            v = np.asarray(vec, dtype=np.float64)
            if v.shape != (self.dim,):
                raise DriftFieldError(f"embedding for {tok!r} has length {v.size}, expected {self.dim}")
            if not np.all(np.isfinite(v)):
                raise DriftFieldError(f"embedding for {tok!r} is not finite")
            v.setflags(write=False)
            clean[tok] = v
        object.__setattr__(self, "entries", clean)

    def __contains__(self, token) -> bool:
        return token in self.entries

    def __getitem__(self, token) -> np.ndarray:
        return self.entries[token]


def load_embedding_table(path) -> EmbeddingTable:
    """Read ``token<TAB>v1,v2,...`` lines. Tokens are lowercased to match :func:`tokenize`."""
    entries = {}
    dim = None
    for i, line in enumerate(_read_text(path).splitlines()):
        if not line.strip():
            continue
        try:
            tok, values = line.split("\t", 1)
        except ValueError:
            raise ParseError(i, 0, line) from None
        vec = [_parse_float(c, i, j + 1) for j, c in enumerate(values.split(","))]
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise RaggedRows(f"RaggedRows: embedding line {i} has {len(vec)} values, expected {dim}")
        entries[tok.lower()] = vec
    if dim is None:
        raise EmptyVocabulary(f"EmptyVocabulary: no entries in {path}")
    return EmbeddingTable(dim, entries)


@dataclass(frozen=True)
class TokenizedText:
    tokens: tuple
    counts: dict
    total: int


def tokenize(text: str) -> TokenizedText:
    """Lowercase ``text`` and split it into maximal alphanumeric runs.

    >>> tokenize("The cat, the CAT!").counts
    {'the': 2, 'cat': 2}
    """
    tokens = tuple(_TOKEN.findall(text.lower()))
    return TokenizedText(tokens, dict(Counter(tokens)), len(tokens))


def fallback_vector(token: str, seed: int, dim: int) -> np.ndarray:
    """Deterministic unit vector for ``token``: each entry hashes (seed, token, index) to [-1, 1]."""
    out = np.empty(dim, dtype=np.float64)
    prefix = f"{int(seed)}\x1f{token}\x1f".encode("utf-8")
    for j in range(dim):
        h = hashlib.blake2b(prefix + str(j).encode("ascii"), digest_size=8).digest()
        out[j] = int.from_bytes(h, "little") / (2**64 - 1) * 2.0 - 1.0
    norm = np.linalg.norm(out)
    if norm == 0.0:
        out[0], norm = 1.0, 1.0
    return out / norm


class EmbeddedText(NamedTuple):
    cloud: PointCloud
    weights: np.ndarray
    skipped: tuple


def embed_text(
    text: TokenizedText,
    table: Optional[EmbeddingTable] = None,
    *,
    seed: int = 42,
    dim: int = 64,
) -> EmbeddedText:
    """One point per distinct token, in first-occurrence order.

    With no ``table`` every token gets its :func:`fallback_vector`. Tokens absent
    from a supplied table are listed in ``skipped``. ``weights`` are the token counts.
    """
    if table is None and dim < 1:
        raise DriftFieldError("embedding dim must be >= 1")
    rows, ids, weights, skipped = [], [], [], []
    for tok, count in text.counts.items():
        if table is None:
            rows.append(fallback_vector(tok, seed, dim))
        elif tok in table:
            rows.append(table[tok])
        else:
            skipped.append(tok)
            continue
        ids.append(tok)
        weights.append(count)
    if not rows:
        raise EmptyVocabulary("EmptyVocabulary: no token could be embedded")
    cloud = PointCloud(np.vstack(rows), ids=ids)
    return EmbeddedText(cloud, np.asarray(weights, dtype=np.float64), tuple(skipped))
