"""Deterministic synthetic mini-corpora for demos and end-to-end tests.

Two corpora are generated: a "happy" corpus of positive-only sentences
(crowdsourced-diary style) and a mixed social-media corpus of ten users
split into a depression and a control group.  Roughly a third of each
user's sentences are happy moments; group vocabularies are skewed
(family/friends/music vs tv/money/sports) so the downstream contrast
reports have visible structure.  Everything is driven by fixed seeds.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from .corpus import Corpus, Pos, PuSource, SentenceRecord, Subgroup, Token, write_corpus

HAPPY_SEED = 11
POSTS_SEED = 12

_N = Pos.NOUN
_V = Pos.VERB
_A = Pos.ADJ
_D = Pos.ADV
_P = Pos.PRON
_O = Pos.OTHER


def _w(surface, lemma, pos):
    return Token(surface=surface, lemma=lemma, pos=pos)


# Topic noun banks.  The depression-flavored topics overlap the FRIENDS /
# FAMILY / MUSIC / SLEEP lexicon categories, the control-flavored ones the
# TV / MONEY / SPORTS / BODY categories.
_DEPRESSION_NOUNS = [
    _w("family", "family", _N), _w("dad", "dad", _N), _w("mom", "mom", _N),
    _w("son", "son", _N), _w("sister", "sister", _N),
    _w("friend", "friend", _N), _w("friends", "friend", _N),
    _w("boyfriend", "boyfriend", _N), _w("girlfriend", "girlfriend", _N),
    _w("neighbor", "neighbor", _N),
    _w("song", "song", _N), _w("songs", "song", _N), _w("band", "band", _N),
    _w("music", "music", _N), _w("playlist", "playlist", _N),
    _w("nap", "nap", _N), _w("dream", "dream", _N), _w("bed", "bed", _N),
    _w("blanket", "blanket", _N),
]

_CONTROL_NOUNS = [
    _w("show", "show", _N), _w("movie", "movie", _N), _w("tv", "tv", _N),
    _w("video", "video", _N), _w("series", "series", _N),
    _w("trailer", "trailer", _N),
    _w("paycheck", "paycheck", _N), _w("rent", "rent", _N),
    _w("refund", "refund", _N), _w("bonus", "bonus", _N),
    _w("discount", "discount", _N), _w("investment", "investment", _N),
    _w("game", "game", _N), _w("team", "team", _N), _w("match", "match", _N),
    _w("race", "race", _N), _w("workout", "workout", _N),
    _w("skin", "skin", _N), _w("breath", "breath", _N), _w("eyes", "eye", _N),
]

_DEPRESSION_VERBS = [
    _w("felt", "feel", _V), _w("cried", "cry", _V), _w("cuddled", "cuddle", _V),
    _w("hugged", "hug", _V), _w("listened", "listen", _V),
    _w("called", "call", _V), _w("slept", "sleep", _V),
]

_CONTROL_VERBS = [
    _w("built", "build", _V), _w("ran", "run", _V), _w("played", "play", _V),
    _w("bought", "buy", _V), _w("scored", "score", _V),
    _w("watched", "watch", _V), _w("saved", "save", _V),
]

_SHARED_VERBS = [
    _w("enjoyed", "enjoy", _V), _w("loved", "love", _V),
    _w("laughed", "laugh", _V), _w("smiled", "smile", _V),
]

_HAPPY_ADJECTIVES = [
    _w("happy", "happy", _A), _w("glad", "glad", _A),
    _w("amazing", "amazing", _A), _w("wonderful", "wonderful", _A),
    _w("proud", "proud", _A),
]

_FILLER_VERBS = [
    _w("waited", "wait", _V), _w("cleaned", "clean", _V),
    _w("forgot", "forget", _V), _w("emailed", "email", _V),
    _w("printed", "print", _V), _w("parked", "park", _V),
    _w("rebooted", "reboot", _V), _w("queued", "queue", _V),
]

_FILLER_NOUNS = [
    _w("bus", "bus", _N), _w("traffic", "traffic", _N),
    _w("printer", "printer", _N), _w("laundry", "laundry", _N),
    _w("meeting", "meeting", _N), _w("spreadsheet", "spreadsheet", _N),
    _w("umbrella", "umbrella", _N), _w("receipt", "receipt", _N),
    _w("password", "password", _N), _w("deadline", "deadline", _N),
]

_I = _w("I", "i", _P)
_WE = _w("we", "we", _P)
_MY = _w("my", "my", _P)
_THE = _w("the", "the", _O)
_AND = _w("and", "and", _O)
_WITH = _w("with", "with", _O)
_WAS = _w("was", "be", _O)
_ABOUT = _w("about", "about", _O)
_SO = _w("so", "so", _D)
_REALLY = _w("really", "really", _D)
_FINALLY = _w("finally", "finally", _D)
_TOGETHER = _w("together", "together", _D)
_AGAIN = _w("again", "again", _D)
_ALL = _w("all", "all", _O)
_MORNING = _w("morning", "morning", _N)
_DAY = _w("day", "day", _N)


def _pick(rng: np.random.Generator, bank):
    return bank[int(rng.integers(len(bank)))]


def _happy_tokens(rng: np.random.Generator, nouns, verbs) -> list[Token]:
    verb = _pick(rng, verbs + _SHARED_VERBS)
    noun = _pick(rng, nouns)
    shape = int(rng.integers(4))
    if shape == 0:
        return [_I, verb, _THE, noun, _WITH, _MY,
                _pick(rng, nouns), _pick(rng, (_TOGETHER, _FINALLY))]
    if shape == 1:
        return [_MY, noun, _AND, _I, verb, _THE, _pick(rng, nouns), _TOGETHER]
    if shape == 2:
        return [_I, _WAS, _SO, _pick(rng, _HAPPY_ADJECTIVES), _ABOUT,
                _THE, noun, _pick(rng, (_TOGETHER, _AGAIN, _FINALLY))]
    return [_WE, _REALLY, verb, _THE, _pick(rng, _HAPPY_ADJECTIVES), noun,
            _ALL, _pick(rng, (_MORNING, _DAY))]


def _filler_tokens(rng: np.random.Generator) -> list[Token]:
    verb = _pick(rng, _FILLER_VERBS)
    noun = _pick(rng, _FILLER_NOUNS)
    shape = int(rng.integers(3))
    if shape == 0:
        return [_I, verb, _THE, noun, _AGAIN]
    if shape == 1:
        return [_THE, noun, _WAS, _w("late", "late", _A), _AGAIN]
    return [_I, verb, _THE, noun, _AND, _THE, _pick(rng, _FILLER_NOUNS)]


def _render(tokens: list[Token]) -> str:
    text = " ".join(t.surface for t in tokens) + "."
    return text[0].upper() + text[1:]


def build_happy_corpus(n: int = 200, seed: int = HAPPY_SEED) -> Corpus:
    """Positive-only corpus: happy sentences of both topic flavors."""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        if int(rng.integers(2)) == 0:
            tokens = _happy_tokens(rng, _DEPRESSION_NOUNS, _DEPRESSION_VERBS)
        else:
            tokens = _happy_tokens(rng, _CONTROL_NOUNS, _CONTROL_VERBS)
        records.append(SentenceRecord(
            id=f"hm_{i:05d}",
            user_id=f"w_{int(rng.integers(40)):03d}",
            pu_source=PuSource.LABELED_POSITIVE,
            subgroup=Subgroup.NONE,
            text=_render(tokens),
            tokens=tokens,
        ))
    return Corpus(records=records)


def build_posts_corpus(n: int = 2000, users_per_group: int = 5,
                       happy_rate: float = 0.3, flavor_rate: float = 0.75,
                       seed: int = POSTS_SEED) -> Corpus:
    """Mixed social-media corpus: two user groups, mostly filler sentences.

    Each group's happy moments lean toward its own topic bank at
    ``flavor_rate`` but borrow from the other bank otherwise, so both
    groups cover most word classes at different rates (finite dominance
    scores instead of empty one-sided tables).
    """
    rng = np.random.default_rng(seed)
    banks = {
        Subgroup.DEPRESSION: (_DEPRESSION_NOUNS, _DEPRESSION_VERBS),
        Subgroup.CONTROL: (_CONTROL_NOUNS, _CONTROL_VERBS),
    }
    groups = ((Subgroup.DEPRESSION, "dep"), (Subgroup.CONTROL, "ctl"))
    records = []
    for i in range(n):
        subgroup, prefix = groups[i % 2]
        user = f"{prefix}_{int(rng.integers(users_per_group)):02d}"
        if rng.random() < happy_rate:
            flavor = subgroup
            if rng.random() >= flavor_rate:
                flavor = (Subgroup.CONTROL if subgroup is Subgroup.DEPRESSION
                          else Subgroup.DEPRESSION)
            tokens = _happy_tokens(rng, *banks[flavor])
        else:
            tokens = _filler_tokens(rng)
        records.append(SentenceRecord(
            id=f"er_{i:05d}",
            user_id=user,
            pu_source=PuSource.UNLABELED,
            subgroup=subgroup,
            text=_render(tokens),
            tokens=tokens,
        ))
    return Corpus(records=records)


def write_demo_corpora(out_dir: str | Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    happy_path = out_dir / "happy.jsonl"
    posts_path = out_dir / "posts.jsonl"
    write_corpus(build_happy_corpus(), happy_path)
    write_corpus(build_posts_corpus(), posts_path)
    return happy_path, posts_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Regenerate the bundled synthetic demo corpora."
    )
    parser.add_argument("out_dir", nargs="?", default="data",
                        help="directory for happy.jsonl and posts.jsonl")
    args = parser.parse_args(argv)
    happy_path, posts_path = write_demo_corpora(args.out_dir)
    print(f"wrote {happy_path} and {posts_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
