import warnings

import numpy as np
import pytest

from momentminer.pulearn import SvmHyperparams, train_linear_svm


def _separable(seed=0, n=200, sep=3.0):
    rng = np.random.default_rng(seed)
    pos = rng.normal(loc=(sep, 0.0), size=(n // 2, 2))
    neg = rng.normal(loc=(-sep, 0.0), size=(n // 2, 2))
    X = np.vstack([pos, neg])
    y = np.concatenate([np.ones(n // 2), -np.ones(n // 2)])
    return X, y


def test_two_point_hard_margin_analytic():
    X = np.array([[-1.0, 0.0], [1.0, 0.0]])
    y = np.array([-1.0, 1.0])
    fit = train_linear_svm(X, y, SvmHyperparams(C=1000.0, tol=1e-8, max_iter=10000))
    assert abs(fit.weights[0] - 1.0) < 1e-3
    assert abs(fit.weights[1]) < 1e-3
    assert abs(fit.bias) < 1e-3


def test_all_zero_features_degenerates_to_constant():
    X = np.zeros((10, 3))
    y = np.array([1.0, -1.0] * 5)
    hp = SvmHyperparams(C=0.5)
    fit = train_linear_svm(X, y, hp)
    assert np.array_equal(fit.weights, np.zeros(3))
    assert abs(fit.bias) <= hp.C * 10


def test_separable_data_training_accuracy_one():
    X, y = _separable()
    fit = train_linear_svm(X, y, SvmHyperparams())
    pred = np.sign(X @ fit.weights + fit.bias)
    assert np.all(pred == y)


def test_dual_objective_monotone():
    X, y = _separable(seed=3, n=400, sep=1.0)
    fit = train_linear_svm(X, y, SvmHyperparams(C=1.0, tol=1e-6, max_iter=5000))
    diffs = np.diff(fit.dual_objectives)
    assert np.all(diffs >= -1e-9 * np.maximum(1.0, np.abs(fit.dual_objectives[:-1])))
    assert fit.converged


def test_duplication_half_c_identity():
    X, y = _separable(seed=1, n=100, sep=1.0)
    hp_full = SvmHyperparams(C=0.5, tol=1e-10, max_iter=200000)
    hp_half = SvmHyperparams(C=0.25, tol=1e-10, max_iter=200000)
    fit_a = train_linear_svm(X, y, hp_full)
    fit_b = train_linear_svm(np.vstack([X, X]), np.concatenate([y, y]), hp_half)
    np.testing.assert_allclose(fit_a.weights, fit_b.weights, atol=1e-6)
    assert abs(fit_a.bias - fit_b.bias) < 1e-6


def test_single_class_rejected():
    X = np.ones((4, 2))
    with pytest.raises(ValueError, match="single-class"):
        train_linear_svm(X, np.ones(4), SvmHyperparams())


def test_bad_inputs_rejected():
    hp = SvmHyperparams()
    with pytest.raises(ValueError, match="non-finite"):
        train_linear_svm(np.array([[np.nan, 0.0], [1.0, 0.0]]),
                         np.array([1.0, -1.0]), hp)
    with pytest.raises(ValueError, match="\\+1 or -1"):
        train_linear_svm(np.eye(2), np.array([0.0, 1.0]), hp)
    with pytest.raises(ValueError, match="row count"):
        train_linear_svm(np.eye(3), np.array([1.0, -1.0]), hp)
    with pytest.raises(ValueError, match="two training rows"):
        train_linear_svm(np.ones((1, 2)), np.array([1.0]), hp)


def test_max_iter_reached_flags_and_warns():
    X, y = _separable(seed=2, n=400, sep=0.2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fit = train_linear_svm(X, y, SvmHyperparams(C=10.0, tol=1e-12, max_iter=2))
    assert not fit.converged
    assert fit.n_epochs == 2
    assert any("did not converge" in str(w.message) for w in caught)


def test_balanced_weights_resist_imbalance_collapse():
    # 100 positives vs 2000 negatives drawn apart: the unweighted optimum can
    # sacrifice the minority class, balanced weights must not.
    rng = np.random.default_rng(4)
    X = np.vstack([rng.normal(loc=(2.0, 0.0), size=(100, 2)),
                   rng.normal(loc=(-2.0, 0.0), size=(2000, 2))])
    y = np.concatenate([np.ones(100), -np.ones(2000)])
    fit = train_linear_svm(X, y, SvmHyperparams(C=0.01, max_iter=4000),
                           class_weight="balanced")
    pred = np.sign(X @ fit.weights + fit.bias)
    assert np.mean(pred[:100] == 1.0) > 0.9


def test_hyperparam_validation():
    with pytest.raises(ValueError):
        SvmHyperparams(C=0.0)
    with pytest.raises(ValueError):
        SvmHyperparams(tol=-1.0)
    with pytest.raises(ValueError):
        SvmHyperparams(max_iter=0)
