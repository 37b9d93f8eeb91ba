import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentminer.features import (
    FeaturizerConfig,
    FeaturizerKind,
    featurize,
    fnv1a64,
    hashed_ngram_row,
    l2_normalize,
)

from conftest import make_corpus, make_record, make_token


def _fnv_reference(data: bytes, seed: int = 0) -> int:
    # Independently restated FNV-1a, folding the hash step differently.
    h = 0xCBF29CE484222325 ^ (seed % 2**64)
    for byte in data:
        h = ((h ^ byte) * 0x100000001B3) % 2**64
    return h


def test_fnv1a64_known_vectors():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_fnv1a64_matches_reference_with_seeds():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(0, 30))
        data = bytes(rng.integers(0, 256, size=n, dtype=np.uint8))
        seed = int(rng.integers(0, 2**63))
        assert fnv1a64(data, seed) == _fnv_reference(data, seed)


# ----------------------------------------------------------------------
# l2_normalize
# ----------------------------------------------------------------------

def test_l2_normalize_hand_case():
    np.testing.assert_allclose(l2_normalize(np.array([3.0, 4.0])), [0.6, 0.8])


def test_l2_normalize_zero_vector_passthrough():
    assert np.array_equal(l2_normalize(np.zeros(5)), np.zeros(5))


def test_l2_normalize_unit_vector_fixed_point():
    v = np.array([0.6, 0.8])
    np.testing.assert_allclose(l2_normalize(v), v, atol=1e-15)


def test_l2_normalize_rejects_non_finite():
    with pytest.raises(ValueError):
        l2_normalize(np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        l2_normalize(np.array([np.nan]))


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=8))
@settings(max_examples=200, deadline=None)
def test_l2_normalize_idempotent(values):
    v = np.asarray(values)
    once = l2_normalize(v)
    np.testing.assert_allclose(l2_normalize(once), once, atol=1e-12)


# ----------------------------------------------------------------------
# featurize
# ----------------------------------------------------------------------

def _lemma_record(rid, lemmas):
    return make_record(rid, text=" ".join(lemmas),
                       tokens=[make_token(l) for l in lemmas])


def test_featurize_deterministic():
    corpus = make_corpus([_lemma_record("a", ["x", "y", "z"]),
                          _lemma_record("b", ["y", "z"])])
    config = FeaturizerConfig.hashed(dim=128)
    m1 = featurize(corpus, config)
    m2 = featurize(corpus, config)
    assert np.array_equal(m1.values, m2.values)
    assert m1.record_ids == ["a", "b"]


def test_featurize_empty_tokens_gives_zero_row():
    corpus = make_corpus([make_record("empty", text="anything", tokens=[])])
    m = featurize(corpus, FeaturizerConfig.hashed(dim=64))
    assert np.array_equal(m.values[0], np.zeros(64))


def test_featurize_same_lemmas_same_rows():
    corpus = make_corpus([
        make_record("a", text="The Cats", tokens=[make_token("The", "the"),
                                                  make_token("Cats", "cat")]),
        make_record("b", text="THE CAT", tokens=[make_token("THE", "THE"),
                                                 make_token("CAT", "Cat")]),
    ])
    m = featurize(corpus, FeaturizerConfig.hashed(dim=64))
    assert np.array_equal(m.values[0], m.values[1])  # lemmas lowercased


def test_featurize_permutation_permutes_rows():
    records = [_lemma_record(f"r{i}", [f"w{i}", f"w{i+1}"]) for i in range(6)]
    config = FeaturizerConfig.hashed(dim=256)
    fwd = featurize(make_corpus(records), config)
    rev = featurize(make_corpus(records[::-1]), config)
    assert np.array_equal(fwd.values[::-1], rev.values)


def test_featurize_l2_normalized_rows():
    corpus = make_corpus([_lemma_record("a", ["x", "y", "z", "w"])])
    m = featurize(corpus, FeaturizerConfig.hashed(dim=64, l2_normalize=True))
    assert abs(np.linalg.norm(m.values[0]) - 1.0) < 1e-6


def test_featurize_precomputed_passthrough(embedded_corpus):
    config = FeaturizerConfig.precomputed(dim=4, l2_normalize=False)
    m = featurize(embedded_corpus, config)
    assert np.array_equal(m.values[0], embedded_corpus.records[0].embedding)


def test_featurize_precomputed_missing_embedding_names_record(embedded_corpus):
    embedded_corpus.records[3].embedding = None
    config = FeaturizerConfig.precomputed(dim=4)
    with pytest.raises(ValueError, match="e003"):
        featurize(embedded_corpus, config)


def test_featurize_ngram_counts_signed():
    # one lemma, bigram range limited to unigrams: exactly one bucket hit
    row = hashed_ngram_row(["solo"], FeaturizerConfig.hashed(dim=32, ngram_max=1))
    assert np.sum(np.abs(row)) == 1.0


def test_hash_seed_changes_buckets_not_norms():
    rng = np.random.default_rng(7)
    vocab = [f"w{i}" for i in range(200)]
    sentences = [
        [vocab[int(k)] for k in rng.integers(0, 200, size=int(rng.integers(5, 16)))]
        for _ in range(1000)
    ]
    c_a = FeaturizerConfig.hashed(dim=512, hash_seed=0, l2_normalize=False)
    c_b = FeaturizerConfig.hashed(dim=512, hash_seed=12345, l2_normalize=False)
    sq_a = np.array([np.sum(hashed_ngram_row(s, c_a) ** 2) for s in sentences])
    sq_b = np.array([np.sum(hashed_ngram_row(s, c_b) ** 2) for s in sentences])
    assert not np.array_equal(sq_a, sq_b) or not np.array_equal(
        hashed_ngram_row(sentences[0], c_a), hashed_ngram_row(sentences[0], c_b))
    ratio = sq_a.mean() / sq_b.mean()
    assert 0.9 < ratio < 1.1


def test_config_validation():
    with pytest.raises(ValueError):
        FeaturizerConfig.hashed(dim=0)
    with pytest.raises(ValueError):
        FeaturizerConfig.hashed(ngram_min=2, ngram_max=1)
    round_trip = FeaturizerConfig.from_dict(FeaturizerConfig.hashed().to_dict())
    assert round_trip == FeaturizerConfig.hashed()
    assert round_trip.kind is FeaturizerKind.HASHED_NGRAM
