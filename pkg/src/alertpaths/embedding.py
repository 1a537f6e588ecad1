"""Deterministic msg vectorization and cosine similarity.

Signed feature hashing over lowercase word tokens plus character trigrams.
No training step: equal msgs always produce bitwise-equal vectors, across
runs, processes, and machines (token hashing uses blake2b, not the
process-randomized builtin hash).  Any object with a ``dim`` attribute and
an ``embed(msg) -> MsgVector`` method can stand in for HashingEmbedder
downstream, e.g. to plug in a learned embedding.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np


class DimensionMismatch(ValueError):
    """Vectors from embedders of different dimensions were mixed."""


_WORD_RE = re.compile(r"[a-z0-9]+")


def tokenize(msg: str) -> list[str]:
    """Lowercase alphanumeric word tokens plus character trigrams of the
    whole lowercased msg.  Msgs shorter than 3 characters yield no trigrams."""
    lowered = msg.lower()
    tokens = _WORD_RE.findall(lowered)
    tokens.extend(lowered[i : i + 3] for i in range(len(lowered) - 2))
    return tokens


@dataclass(frozen=True, eq=False)
class MsgVector:
    """Fixed-length real vector with its Euclidean norm cached."""

    values: np.ndarray
    norm: float

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def _token_hash(token: str) -> int:
    return int.from_bytes(hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest(), "big")


class HashingEmbedder:
    """Hashes token counts into a fixed-dimension signed vector."""

    def __init__(self, dim: int = 256):
        if dim <= 0:
            raise ValueError(f"dimension must be positive, got {dim}")
        self.dim = dim

    def embed(self, msg: str) -> MsgVector:
        values = np.zeros(self.dim, dtype=np.float64)
        for token in tokenize(msg):
            h = _token_hash(token)
            # low bit picks the sign, the rest picks the slot
            sign = 1.0 if h & 1 else -1.0
            values[(h >> 1) % self.dim] += sign
        return MsgVector(values, float(np.linalg.norm(values)))


def similarity(a: MsgVector, b: MsgVector) -> float:
    """Cosine of the angle between two vectors, in [-1, 1].

    Symmetric; 1.0 for identical non-zero vectors.  Zero vectors (possible
    only for empty token sets) compare as 0.0 to everything.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    return float(np.dot(a.values, b.values) / (a.norm * b.norm))
