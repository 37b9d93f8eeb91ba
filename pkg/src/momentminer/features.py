"""Sentence featurization: precomputed embeddings or hashed token n-grams.

The hashed featurizer needs no vocabulary and no external model: each
lemma n-gram is folded into a fixed-dimension vector with a signed
64-bit FNV-1a hash, so any two processes (or languages) produce
bit-identical rows for the same input and seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable

import numpy as np

if TYPE_CHECKING:
    from .corpus import Corpus


class FeaturizerKind(str, Enum):
    PRECOMPUTED_EMBEDDING = "precomputed_embedding"
    HASHED_NGRAM = "hashed_ngram"


DEFAULT_HASHED_DIM = 4096

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF
# Salt XOR-folded into the seed for the independent sign hash.
_SIGN_SALT = 0x9E3779B97F4A7C15
# n-gram members are joined with the ASCII unit separator.
_NGRAM_JOIN = b"\x1f"


@dataclass(frozen=True)
class FeaturizerConfig:
    kind: FeaturizerKind
    dim: int
    ngram_min: int = 1
    ngram_max: int = 2
    hash_seed: int = 0
    l2_normalize: bool = True

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        if self.kind is FeaturizerKind.HASHED_NGRAM:
            if self.ngram_min < 1 or self.ngram_max < self.ngram_min:
                raise ValueError("need 1 <= ngram_min <= ngram_max")

    @classmethod
    def precomputed(cls, dim: int, l2_normalize: bool = True) -> "FeaturizerConfig":
        return cls(kind=FeaturizerKind.PRECOMPUTED_EMBEDDING, dim=dim,
                   l2_normalize=l2_normalize)

    @classmethod
    def hashed(cls, dim: int = DEFAULT_HASHED_DIM, ngram_min: int = 1,
               ngram_max: int = 2, hash_seed: int = 0,
               l2_normalize: bool = True) -> "FeaturizerConfig":
        return cls(kind=FeaturizerKind.HASHED_NGRAM, dim=dim, ngram_min=ngram_min,
                   ngram_max=ngram_max, hash_seed=hash_seed,
                   l2_normalize=l2_normalize)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "dim": self.dim,
            "ngram_min": self.ngram_min,
            "ngram_max": self.ngram_max,
            "hash_seed": self.hash_seed,
            "l2_normalize": self.l2_normalize,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "FeaturizerConfig":
        return cls(
            kind=FeaturizerKind(obj["kind"]),
            dim=int(obj["dim"]),
            ngram_min=int(obj["ngram_min"]),
            ngram_max=int(obj["ngram_max"]),
            hash_seed=int(obj["hash_seed"]),
            l2_normalize=bool(obj["l2_normalize"]),
        )


@dataclass
class FeatureMatrix:
    values: np.ndarray
    config: FeaturizerConfig
    record_ids: list[str]


def fnv1a64(data: bytes, seed: int = 0) -> int:
    """64-bit FNV-1a with the seed XOR-folded into the offset basis."""
    h = (_FNV_OFFSET ^ (seed & _MASK64)) & _MASK64
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def hashed_ngram_row(lemmas: list[str], config: FeaturizerConfig) -> np.ndarray:
    """Accumulate signed n-gram counts into a dense row (no normalization)."""
    row = np.zeros(config.dim, dtype=np.float64)
    n_lemmas = len(lemmas)
    encoded = [lemma.lower().encode("utf-8") for lemma in lemmas]
    for n in range(config.ngram_min, config.ngram_max + 1):
        for start in range(n_lemmas - n + 1):
            key = _NGRAM_JOIN.join(encoded[start:start + n])
            bucket = fnv1a64(key, config.hash_seed) % config.dim
            sign_bit = fnv1a64(key, config.hash_seed ^ _SIGN_SALT) & 1
            row[bucket] += 1.0 if sign_bit == 0 else -1.0
    return row


def l2_normalize(v: np.ndarray) -> np.ndarray:
    """Scale to unit Euclidean norm; the zero vector passes through unchanged."""
    v = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValueError("cannot normalize a vector with non-finite entries")
    peak = np.max(np.abs(v)) if v.size else 0.0
    if peak == 0.0:
        return v.copy()
    # dividing by the peak first keeps the squared sum out of the
    # under/overflow range, so normalizing twice is a no-op
    scaled = v / peak
    return scaled / np.linalg.norm(scaled)


def featurize(corpus: "Corpus", config: FeaturizerConfig) -> FeatureMatrix:
    """Build the feature matrix for a corpus; row i maps to record i."""
    n = len(corpus.records)
    values = np.zeros((n, config.dim), dtype=np.float64)
    if config.kind is FeaturizerKind.PRECOMPUTED_EMBEDDING:
        for i, record in enumerate(corpus.records):
            if record.embedding is None:
                raise ValueError(f"record {record.id!r} has no embedding")
            if record.embedding.size != config.dim:
                raise ValueError(
                    f"record {record.id!r} embedding dimension "
                    f"{record.embedding.size} != featurizer dim {config.dim}"
                )
            values[i] = record.embedding
    else:
        for i, record in enumerate(corpus.records):
            values[i] = hashed_ngram_row([t.lemma for t in record.tokens], config)
    if not np.all(np.isfinite(values)):
        raise ValueError("feature matrix contains non-finite entries")
    if config.l2_normalize:
        peaks = np.max(np.abs(values), axis=1)
        nonzero = peaks > 0
        values[nonzero] /= peaks[nonzero, np.newaxis]
        norms = np.linalg.norm(values[nonzero], axis=1)
        values[nonzero] /= norms[:, np.newaxis]
    return FeatureMatrix(
        values=values,
        config=config,
        record_ids=[r.id for r in corpus.records],
    )
