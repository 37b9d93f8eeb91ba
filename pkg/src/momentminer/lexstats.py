"""Lexicon coverage, dominance ratios, and log-likelihood keyness.

Coverage of a word class is the fraction of corpus tokens matching the
class; the dominance of a foreground corpus over a background corpus is
the ratio of their coverages.  Keyness ranks individual lemmas by
Dunning's log-likelihood ratio over the 2x2 frequency contingency table.

Coverage and dominance count surface forms (the lexicon convention);
keyness counts lemmas, optionally restricted to one POS tag.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .corpus import Corpus, Pos, SentenceRecord, Subgroup, Token
from .pulearn import ExtractionResult


class LexiconFormatError(ValueError):
    """Raised when a lexicon file violates the expected layout."""


@dataclass(frozen=True)
class LexiconCategory:
    """A named word class; patterns are literal words or ``prefix*`` globs."""

    name: str
    patterns: tuple[str, ...]

    def __post_init__(self):
        if not self.patterns:
            raise LexiconFormatError(f"category {self.name} has no patterns")
        for pat in self.patterns:
            if "*" in pat[:-1]:
                raise LexiconFormatError(
                    f"category {self.name}: '*' is only allowed in final "
                    f"position, got {pat!r}"
                )
        literals = frozenset(p for p in self.patterns if not p.endswith("*"))
        prefixes = tuple(sorted(p[:-1] for p in self.patterns if p.endswith("*")))
        object.__setattr__(self, "_literals", literals)
        object.__setattr__(self, "_prefixes", prefixes)

    def matches(self, word: str) -> bool:
        word = word.lower()
        if word in self._literals:
            return True
        return any(word.startswith(prefix) for prefix in self._prefixes)


@dataclass
class Lexicon:
    categories: dict[str, LexiconCategory]

    def __iter__(self):
        return iter(self.categories.values())

    def match_word(self, word: str) -> set[str]:
        word = word.lower()
        return {c.name for c in self.categories.values() if c.matches(word)}


def match_token(lexicon: Lexicon, token: Token) -> set[str]:
    """Category names whose patterns match the token's surface form."""
    return lexicon.match_word(token.surface)


def parse_lexicon(text: str, source: str = "<string>") -> Lexicon:
    categories: dict[str, LexiconCategory] = {}
    name: Optional[str] = None
    patterns: list[str] = []

    def close_section():
        if name is None:
            return
        if name in categories:
            raise LexiconFormatError(f"{source}: duplicate category {name}")
        categories[name] = LexiconCategory(name=name, patterns=tuple(patterns))

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            close_section()
            name = line[1:-1].strip()
            if not name:
                raise LexiconFormatError(f"{source}:{lineno}: empty category name")
            patterns = []
        elif name is None:
            raise LexiconFormatError(
                f"{source}:{lineno}: pattern before any [CATEGORY] header"
            )
        else:
            patterns.append(line.lower())
    close_section()
    if not categories:
        raise LexiconFormatError(f"{source}: no categories defined")
    return Lexicon(categories=categories)


def load_lexicon(path: str | Path) -> Lexicon:
    path = Path(path)
    return parse_lexicon(path.read_text(encoding="utf-8"), source=str(path))


def load_demo_lexicon() -> Lexicon:
    """The small lexicon bundled with the package (12 everyday categories)."""
    from importlib.resources import files

    text = files("momentminer").joinpath("data/demo_lexicon.txt").read_text("utf-8")
    return parse_lexicon(text, source="demo_lexicon.txt")


# ----------------------------------------------------------------------
# Corpus statistics.
# ----------------------------------------------------------------------

@dataclass
class CorpusStats:
    """Token totals and per-word frequencies for one (sub)corpus."""

    token_count: int = 0
    word_frequencies: Counter = field(default_factory=Counter)
    pos_frequencies: Counter = field(default_factory=Counter)

    def add_tokens(self, tokens: Iterable[Token]) -> None:
        for token in tokens:
            self.token_count += 1
            self.word_frequencies[token.surface.lower()] += 1
            self.pos_frequencies[(token.lemma.lower(), token.pos)] += 1


def stats_from_records(records: Iterable[SentenceRecord]) -> CorpusStats:
    stats = CorpusStats()
    for record in records:
        stats.add_tokens(record.tokens)
    return stats


def build_stats(result: ExtractionResult, corpus: Corpus,
                subgroup: Subgroup) -> CorpusStats:
    """Token statistics over the extracted records of one subgroup."""
    index = corpus.by_id()
    stats = CorpusStats()
    for row in result.rows:
        if row.record_id not in index:
            raise ValueError(
                f"extraction row references unknown record id {row.record_id!r}"
            )
        if row.subgroup != subgroup.value:
            continue
        stats.add_tokens(index[row.record_id].tokens)
    return stats


# ----------------------------------------------------------------------
# Coverage and dominance.
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DominanceRow:
    category: str
    coverage_f: float
    coverage_b: float
    dominance: Optional[float]  # None when the background coverage is zero


def coverage(stats: CorpusStats, category: LexiconCategory) -> float:
    """Fraction of corpus tokens whose surface form matches the category."""
    if stats.token_count <= 0:
        raise ValueError("coverage is undefined on an empty corpus")
    matched = sum(
        count for word, count in stats.word_frequencies.items()
        if category.matches(word)
    )
    return matched / stats.token_count


def dominance(foreground: CorpusStats, background: CorpusStats,
              category: LexiconCategory) -> DominanceRow:
    cov_f = coverage(foreground, category)
    cov_b = coverage(background, category)
    score = cov_f / cov_b if cov_b > 0 else None
    return DominanceRow(category=category.name, coverage_f=cov_f,
                        coverage_b=cov_b, dominance=score)


def dominance_table(foreground: CorpusStats, background: CorpusStats,
                    lexicon: Lexicon) -> list[DominanceRow]:
    """Dominance rows for every category, sorted descending by score.

    Ties sort alphabetically; rows with undefined dominance come last so
    that nothing is silently dropped.
    """
    rows = [dominance(foreground, background, cat) for cat in lexicon]
    rows.sort(key=lambda r: (r.dominance is None,
                             -(r.dominance or 0.0), r.category))
    return rows


# ----------------------------------------------------------------------
# Keyness via Dunning's log-likelihood ratio.
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class KeynessRow:
    word: str
    pos: Pos
    freq_target: int
    freq_reference: int
    g2: float
    direction: str  # "target" or "reference"


def g2_statistic(a: int, b: int, c: int, d: int) -> float:
    """Log-likelihood ratio for frequencies a of c (target), b of d (reference).

    Uses the convention 0*ln(0) = 0, so zero cells are legal.
    """
    if c <= 0 or d <= 0:
        raise ValueError("corpus sizes must be positive")
    total = c + d
    expected_t = c * (a + b) / total
    expected_r = d * (a + b) / total
    g2 = 0.0
    if a > 0:
        g2 += a * math.log(a / expected_t)
    if b > 0:
        g2 += b * math.log(b / expected_r)
    return max(2.0 * g2, 0.0)


def keyness_g2(target: CorpusStats, reference: CorpusStats,
               pos_filter: Optional[Pos] = None,
               min_freq: int = 5) -> list[KeynessRow]:
    """Ranked keyness rows over lemmas, highest G2 first.

    Lemmas with combined frequency below ``min_freq`` are skipped; ties
    break by lemma (then POS) ascending so the ordering is total.
    """
    c = target.token_count
    d = reference.token_count
    if c <= 0 or d <= 0:
        raise ValueError("keyness needs two non-empty corpora")
    keys = set(target.pos_frequencies) | set(reference.pos_frequencies)
    rows = []
    for lemma, pos in keys:
        if pos_filter is not None and pos is not pos_filter:
            continue
        a = target.pos_frequencies.get((lemma, pos), 0)
        b = reference.pos_frequencies.get((lemma, pos), 0)
        if a + b < min_freq:
            continue
        rows.append(KeynessRow(
            word=lemma,
            pos=pos,
            freq_target=a,
            freq_reference=b,
            g2=g2_statistic(a, b, c, d),
            direction="target" if a * d >= b * c else "reference",
        ))
    rows.sort(key=lambda r: (-r.g2, r.word, r.pos.value))
    return rows


# ----------------------------------------------------------------------
# Delimited report output.
# ----------------------------------------------------------------------

def write_dominance_csv(rows: Iterable[DominanceRow], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "coverage_f", "coverage_b", "dominance"])
        for row in rows:
            writer.writerow([
                row.category,
                repr(row.coverage_f),
                repr(row.coverage_b),
                "" if row.dominance is None else repr(row.dominance),
            ])


def write_keyness_csv(rows: Iterable[KeynessRow], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lemma", "pos", "freq_target", "freq_reference",
                         "g2", "direction"])
        for row in rows:
            writer.writerow([row.word, row.pos.value, row.freq_target,
                             row.freq_reference, repr(row.g2), row.direction])
