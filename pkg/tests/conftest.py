"""Shared builders for synthetic corpora and PU datasets."""

import numpy as np
import pytest

from momentminer.corpus import (
    Corpus,
    Pos,
    PuSource,
    PUDataset,
    SentenceRecord,
    Subgroup,
    Token,
)
from momentminer.features import FeaturizerConfig


def make_token(surface, lemma=None, pos=Pos.NOUN):
    return Token(surface=surface, lemma=lemma or surface.lower(), pos=pos)


def make_record(rid, text="hello world", tokens=None, pu_source=PuSource.UNLABELED,
                subgroup=Subgroup.NONE, user="u1", embedding=None):
    if tokens is None:
        tokens = [make_token(w) for w in text.split()]
    if embedding is not None:
        embedding = np.asarray(embedding, dtype=np.float64)
    return SentenceRecord(id=rid, user_id=user, pu_source=pu_source,
                          subgroup=subgroup, text=text, tokens=tokens,
                          embedding=embedding)


def make_corpus(records, embedding_dim=None):
    return Corpus(records=records, embedding_dim=embedding_dim)


def gaussian_pu_dataset(seed, n=5000, label_freq=0.4, sep=1.5):
    """Two 2-D Gaussians at +-(sep, 0); a seeded fraction of the positives
    carries the labeled flag.  Returns (dataset, true_labels)."""
    rng = np.random.default_rng(seed)
    pos = rng.normal(loc=(sep, 0.0), size=(n, 2))
    neg = rng.normal(loc=(-sep, 0.0), size=(n, 2))
    X = np.vstack([pos, neg])
    y = np.concatenate([np.ones(n), -np.ones(n)])
    s = np.zeros(2 * n, dtype=np.int8)
    s[rng.permutation(n)[: int(label_freq * n)]] = 1
    data = PUDataset(
        features=X,
        s_labels=s,
        record_ids=[f"r{i:06d}" for i in range(2 * n)],
        seed=seed,
        featurizer=FeaturizerConfig.precomputed(dim=2, l2_normalize=False),
    )
    return data, y


@pytest.fixture
def embedded_corpus():
    rng = np.random.default_rng(42)
    records = [
        make_record(f"e{i:03d}", text=f"sentence number {i}",
                    embedding=rng.normal(size=4))
        for i in range(20)
    ]
    return make_corpus(records, embedding_dim=4)
