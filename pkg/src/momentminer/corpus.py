"""Corpus ingestion, sentence splitting, and PU training-set assembly.

Corpora are line-delimited JSON files, one sentence record per line.
Records carry their provenance (labeled positive vs unlabeled), an
optional clinical subgroup, token annotations, and an optional
precomputed embedding vector.
"""

from __future__ import annotations

import hashlib
import json
import re
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Optional

import numpy as np

if TYPE_CHECKING:
    from .features import FeaturizerConfig


class CorpusFormatError(ValueError):
    """Raised when a corpus file violates the wire format."""


class Pos(str, Enum):
    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    OTHER = "OTHER"


class PuSource(str, Enum):
    LABELED_POSITIVE = "labeled_positive"
    UNLABELED = "unlabeled"


class Subgroup(str, Enum):
    DEPRESSION = "depression"
    CONTROL = "control"
    NONE = "none"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: Pos


@dataclass
class SentenceRecord:
    id: str
    user_id: str
    pu_source: PuSource
    subgroup: Subgroup
    text: str
    tokens: list[Token] = field(default_factory=list)
    embedding: Optional[np.ndarray] = None


@dataclass
class CorpusManifest:
    path: str
    record_count: int
    content_hash: str


@dataclass
class Corpus:
    records: list[SentenceRecord]
    embedding_dim: Optional[int] = None
    manifest: Optional[CorpusManifest] = None

    def __len__(self) -> int:
        return len(self.records)

    def by_id(self) -> dict[str, SentenceRecord]:
        return {r.id: r for r in self.records}


@dataclass
class PUDataset:
    """Feature matrix plus per-row labeled-positive flags (1) / unlabeled (0)."""

    features: np.ndarray
    s_labels: np.ndarray
    record_ids: list[str]
    seed: int
    featurizer: Optional["FeaturizerConfig"] = None


# Trailing tokens that end in a period but do not end a sentence.
PROTECTED_ABBREVIATIONS = frozenset(
    {"mr.", "mrs.", "dr.", "st.", "e.g.", "i.e.", "etc.", "vs."}
)

_TERMINATOR_RUN = re.compile(r"[.!?]+")
_LAST_TOKEN = re.compile(r"(\S+)$")


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on ``.!?`` + whitespace + capital letter.

    A terminator run also ends a sentence at end of text.  Splits are
    suppressed after the protected abbreviations (Mr., e.g., ...).  Output
    sentences are stripped; empty segments are dropped.
    """
    sentences = []
    start = 0
    for match in _TERMINATOR_RUN.finditer(text):
        end = match.end()
        if end < len(text):
            if not text[end].isspace():
                continue
            follow = end
            while follow < len(text) and text[follow].isspace():
                follow += 1
            if follow < len(text) and not text[follow].isupper():
                continue
            if match.group().endswith("."):
                tail = _LAST_TOKEN.search(text[start:end])
                if tail and tail.group(1).lower() in PROTECTED_ABBREVIATIONS:
                    continue
        chunk = text[start:end].strip()
        if chunk:
            sentences.append(chunk)
        start = end
    rest = text[start:].strip()
    if rest:
        sentences.append(rest)
    return sentences


_REQUIRED_FIELDS = ("id", "user_id", "pu_source", "subgroup", "text", "tokens", "embedding")
_TOKEN_FIELDS = ("surface", "lemma", "pos")


def _parse_record(obj: dict, lineno: int) -> SentenceRecord:
    for name in _REQUIRED_FIELDS:
        if name not in obj:
            raise CorpusFormatError(f"line {lineno}: missing field {name}")
    try:
        pu_source = PuSource(obj["pu_source"])
    except ValueError:
        raise CorpusFormatError(
            f"line {lineno}: invalid pu_source {obj['pu_source']!r}"
        ) from None
    raw_subgroup = obj["subgroup"]
    if raw_subgroup is None:
        subgroup = Subgroup.NONE
    else:
        try:
            subgroup = Subgroup(raw_subgroup)
        except ValueError:
            raise CorpusFormatError(
                f"line {lineno}: invalid subgroup {raw_subgroup!r}"
            ) from None
    if pu_source is PuSource.LABELED_POSITIVE and subgroup is not Subgroup.NONE:
        raise CorpusFormatError(
            f"line {lineno}: labeled_positive records must not carry a subgroup"
        )
    tokens = []
    if not isinstance(obj["tokens"], list):
        raise CorpusFormatError(f"line {lineno}: tokens must be an array")
    for tok in obj["tokens"]:
        for name in _TOKEN_FIELDS:
            if not isinstance(tok, dict) or name not in tok:
                raise CorpusFormatError(f"line {lineno}: token missing field {name}")
        try:
            pos = Pos(tok["pos"])
        except ValueError:
            raise CorpusFormatError(
                f"line {lineno}: invalid pos tag {tok['pos']!r}"
            ) from None
        tokens.append(Token(surface=str(tok["surface"]), lemma=str(tok["lemma"]), pos=pos))
    embedding = None
    if obj["embedding"] is not None:
        embedding = np.asarray(obj["embedding"], dtype=np.float64)
        if embedding.ndim != 1 or embedding.size == 0:
            raise CorpusFormatError(f"line {lineno}: embedding must be a flat non-empty array")
    return SentenceRecord(
        id=str(obj["id"]),
        user_id=str(obj["user_id"]),
        pu_source=pu_source,
        subgroup=subgroup,
        text=str(obj["text"]),
        tokens=tokens,
        embedding=embedding,
    )


def load_corpus(path: str | Path) -> Corpus:
    """Load a line-delimited corpus file, validating every record.

    Lines starting with ``#`` are comments and skipped; blank lines are
    ignored.  Raises :class:`CorpusFormatError` naming the offending line
    on malformed records, duplicate ids, or inconsistent embedding
    dimensions.
    """
    path = Path(path)
    raw = path.read_bytes()
    records: list[SentenceRecord] = []
    seen_ids: set[str] = set()
    embedding_dim: Optional[int] = None
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise CorpusFormatError(f"line {lineno}: expected a JSON object")
        record = _parse_record(obj, lineno)
        if record.id in seen_ids:
            raise CorpusFormatError(f"line {lineno}: duplicate id {record.id!r}")
        seen_ids.add(record.id)
        if record.embedding is not None:
            if embedding_dim is None:
                embedding_dim = record.embedding.size
            elif record.embedding.size != embedding_dim:
                raise CorpusFormatError(
                    f"line {lineno}: embedding dimension {record.embedding.size} "
                    f"!= {embedding_dim}"
                )
        records.append(record)
    manifest = CorpusManifest(
        path=str(path),
        record_count=len(records),
        content_hash=hashlib.sha256(raw).hexdigest(),
    )
    return Corpus(records=records, embedding_dim=embedding_dim, manifest=manifest)


def record_to_json(record: SentenceRecord) -> str:
    obj = {
        "id": record.id,
        "user_id": record.user_id,
        "pu_source": record.pu_source.value,
        "subgroup": None if record.subgroup is Subgroup.NONE else record.subgroup.value,
        "text": record.text,
        "tokens": [
            {"surface": t.surface, "lemma": t.lemma, "pos": t.pos.value}
            for t in record.tokens
        ],
        "embedding": None if record.embedding is None else record.embedding.tolist(),
    }
    return json.dumps(obj, ensure_ascii=False)


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write records in the wire format; round-trips through load_corpus."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for record in corpus.records:
            fh.write(record_to_json(record) + "\n")


def select_subjects(corpus: Corpus, per_class: int) -> Corpus:
    """Keep only records of the first ``per_class`` user_ids (ascending) per subgroup.

    ``per_class`` <= 0 keeps the whole corpus.
    """
    if per_class <= 0:
        return corpus
    keep: set[tuple[Subgroup, str]] = set()
    for subgroup in Subgroup:
        users = sorted({r.user_id for r in corpus.records if r.subgroup is subgroup})
        keep.update((subgroup, u) for u in users[:per_class])
    records = [r for r in corpus.records if (r.subgroup, r.user_id) in keep]
    return Corpus(records=records, embedding_dim=corpus.embedding_dim, manifest=corpus.manifest)


def _pu_trainable(record: SentenceRecord) -> bool:
    # Single-token sentences are excluded from PU training (they stay in the
    # corpus for lexicon statistics); untokenized records pass through.
    if not record.text.strip():
        return False
    return len(record.tokens) != 1


def _sample(records: list[SentenceRecord], cap: int, rng: np.random.Generator,
            label: str) -> list[SentenceRecord]:
    if cap > len(records):
        warnings.warn(
            f"requested {cap} {label} sentences but only {len(records)} are "
            f"available; sampling capped at corpus size",
            stacklevel=3,
        )
        cap = len(records)
    order = rng.permutation(len(records))[:cap]
    return [records[i] for i in order]


def assemble_pu_dataset(
    positives: Corpus,
    unlabeled: Corpus,
    cap_pos: int,
    cap_unl: int,
    seed: int,
    config: Optional["FeaturizerConfig"] = None,
) -> PUDataset:
    """Sample both corpora without replacement and featurize into a PU dataset.

    Sampling is driven entirely by ``seed``: identical inputs and seed give
    an identical dataset.  When ``config`` is None the records' precomputed
    embeddings are used (both corpora must share one embedding dimension).
    """
    from .features import FeaturizerConfig, featurize

    if cap_pos <= 0 or cap_unl <= 0:
        raise ValueError("sampling caps must be positive")
    pos_pool = [r for r in positives.records if _pu_trainable(r)]
    unl_pool = [r for r in unlabeled.records if _pu_trainable(r)]
    if not pos_pool:
        raise ValueError("positive corpus has no trainable sentences")
    if not unl_pool:
        raise ValueError("unlabeled corpus has no trainable sentences")

    if config is None:
        if positives.embedding_dim is None or unlabeled.embedding_dim is None:
            raise ValueError("corpora carry no embeddings; pass a featurizer config")
        if positives.embedding_dim != unlabeled.embedding_dim:
            raise ValueError(
                f"embedding dimension mismatch: {positives.embedding_dim} "
                f"!= {unlabeled.embedding_dim}"
            )
        config = FeaturizerConfig.precomputed(dim=positives.embedding_dim)

    rng = np.random.default_rng(seed)
    sample_pos = _sample(pos_pool, cap_pos, rng, "positive")
    sample_unl = _sample(unl_pool, cap_unl, rng, "unlabeled")
    sampled = Corpus(
        records=sample_pos + sample_unl,
        embedding_dim=positives.embedding_dim or unlabeled.embedding_dim,
    )
    matrix = featurize(sampled, config)
    s_labels = np.zeros(len(sampled.records), dtype=np.int8)
    s_labels[: len(sample_pos)] = 1
    return PUDataset(
        features=matrix.values,
        s_labels=s_labels,
        record_ids=list(matrix.record_ids),
        seed=seed,
        featurizer=config,
    )
