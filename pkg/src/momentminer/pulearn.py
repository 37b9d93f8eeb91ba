"""Positive-unlabeled training of a calibrated linear classifier.

The pipeline is: (1) fit a linear SVM to separate labeled positives from
unlabeled rows, (2) map SVM scores to probabilities with a Platt sigmoid,
(3) estimate the labeling frequency c as the mean calibrated score over
held-out labeled positives, and (4) adjust probabilities by 1/c at
prediction time.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .corpus import Corpus, PUDataset
from .features import FeatureMatrix, FeaturizerConfig, featurize

MODEL_FORMAT = "momentminer-model"
MODEL_VERSION = "1"


class ConvergenceError(RuntimeError):
    """Raised when an iterative fit cannot make progress."""


@dataclass(frozen=True)
class SvmHyperparams:
    C: float = 0.1
    tol: float = 1e-4
    max_iter: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0 or self.tol <= 0 or self.max_iter < 1:
            raise ValueError("need C > 0, tol > 0, max_iter >= 1")

    def to_dict(self) -> dict:
        return {"C": self.C, "tol": self.tol, "max_iter": self.max_iter,
                "seed": self.seed}

    @classmethod
    def from_dict(cls, obj: dict) -> "SvmHyperparams":
        return cls(C=float(obj["C"]), tol=float(obj["tol"]),
                   max_iter=int(obj["max_iter"]), seed=int(obj["seed"]))


@dataclass
class SvmFit:
    """Raw solver output: separating hyperplane plus convergence diagnostics."""

    weights: np.ndarray
    bias: float
    converged: bool
    n_epochs: int
    dual_objectives: np.ndarray


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    platt_a: float
    platt_b: float
    hyperparams: SvmHyperparams
    featurizer: FeaturizerConfig
    converged: bool = True

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.weights.size:
            raise ValueError(
                f"feature dimension {X.shape[1]} != model dimension {self.weights.size}"
            )
        return X @ self.weights + self.bias

    def calibrated(self, X: np.ndarray) -> np.ndarray:
        """Platt-calibrated probability that a row is a labeled positive."""
        return _sigmoid_platt(self.platt_a, self.platt_b, self.decision_scores(X))


@dataclass
class PUModel:
    base: LinearModel
    c: float
    holdout_frac: float
    version: str = MODEL_VERSION
    data_hash: str = ""


@dataclass(frozen=True)
class ExtractedMoment:
    record_id: str
    subgroup: str
    text: str
    probability: float


@dataclass
class ExtractionResult:
    rows: list[ExtractedMoment]
    threshold: float


# ----------------------------------------------------------------------
# Linear SVM via dual coordinate descent (hinge loss, box-constrained dual).
# The bias is folded in as a constant appended feature, so w has d+1 entries
# and the dual is max sum(alpha) - 0.5*||w||^2 with 0 <= alpha_i <= C.
# ----------------------------------------------------------------------

def _epoch_pass_loops(X, y, alpha, w, qii, order, box):
    n, d = X.shape
    max_pg = 0.0
    for k in range(order.shape[0]):
        i = order[k]
        ci = box[i]
        s = w[d]
        for j in range(d):
            s += X[i, j] * w[j]
        g = y[i] * s - 1.0
        a = alpha[i]
        if a <= 0.0:
            pg = g if g < 0.0 else 0.0
        elif a >= ci:
            pg = g if g > 0.0 else 0.0
        else:
            pg = g
        apg = -pg if pg < 0.0 else pg
        if apg > max_pg:
            max_pg = apg
        if apg > 1e-12:
            new_a = a - g / qii[i]
            if new_a < 0.0:
                new_a = 0.0
            elif new_a > ci:
                new_a = ci
            delta = new_a - a
            if delta != 0.0:
                alpha[i] = new_a
                dy = delta * y[i]
                for j in range(d):
                    w[j] += dy * X[i, j]
                w[d] += dy
    return max_pg


def _epoch_pass_numpy(X, y, alpha, w, qii, order, box):
    # Fallback when numba is unavailable; same updates, row-wise numpy.
    d = X.shape[1]
    max_pg = 0.0
    for i in order:
        ci = box[i]
        g = y[i] * (X[i] @ w[:d] + w[d]) - 1.0
        a = alpha[i]
        if a <= 0.0:
            pg = min(g, 0.0)
        elif a >= ci:
            pg = max(g, 0.0)
        else:
            pg = g
        apg = abs(pg)
        max_pg = max(max_pg, apg)
        if apg > 1e-12:
            new_a = min(max(a - g / qii[i], 0.0), ci)
            delta = new_a - a
            if delta != 0.0:
                alpha[i] = new_a
                w[:d] += (delta * y[i]) * X[i]
                w[d] += delta * y[i]
    return max_pg


try:
    from numba import njit

    _epoch_pass = njit(cache=True)(_epoch_pass_loops)
except ImportError:  # pragma: no cover
    _epoch_pass = _epoch_pass_numpy


def train_linear_svm(features, labels, hp: SvmHyperparams,
                     class_weight=None) -> SvmFit:
    """Solve the L2-regularized hinge-loss SVM by dual coordinate descent.

    ``features`` is a FeatureMatrix or a plain (n, d) array; ``labels`` must
    hold both +1 and -1.  Coordinates are visited in a per-epoch shuffled
    order drawn from ``hp.seed``; iteration stops when the largest projected
    gradient violation drops below ``hp.tol`` or after ``hp.max_iter``
    epochs (the returned fit is then flagged unconverged).

    ``class_weight`` may be None (plain hinge: every dual variable is boxed
    by C), "balanced" (each class's box scales inversely with its share of
    the rows), or a {+1: w, -1: w} dict.
    """
    X = features.values if isinstance(features, FeatureMatrix) else features
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    y = np.asarray(labels, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("features and labels disagree on row count")
    if X.shape[0] < 2:
        raise ValueError("need at least two training rows")
    if not np.all(np.isfinite(X)):
        raise ValueError("features contain non-finite entries")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be +1 or -1")
    if np.all(y == y[0]):
        raise ValueError("single-class input: both labels must be present")

    n, d = X.shape
    if class_weight is None:
        box = np.full(n, float(hp.C))
    else:
        if class_weight == "balanced":
            n_pos = float(np.sum(y > 0))
            weights = {1.0: n / (2.0 * n_pos), -1.0: n / (2.0 * (n - n_pos))}
        else:
            weights = {float(k): float(v) for k, v in class_weight.items()}
        box = hp.C * np.array([weights[label] for label in y])
    w = np.zeros(d + 1, dtype=np.float64)
    alpha = np.zeros(n, dtype=np.float64)
    qii = np.einsum("ij,ij->i", X, X) + 1.0  # +1 for the bias feature
    rng = np.random.default_rng(hp.seed)
    duals = []
    converged = False
    epoch = 0
    for epoch in range(1, hp.max_iter + 1):
        order = rng.permutation(n)
        max_pg = _epoch_pass(X, y, alpha, w, qii, order, box)
        dual = alpha.sum() - 0.5 * (w @ w)
        if __debug__ and duals:
            assert dual >= duals[-1] - 1e-9 * max(1.0, abs(duals[-1])), (
                f"dual objective decreased at epoch {epoch}"
            )
        duals.append(dual)
        if max_pg < hp.tol:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"SVM did not converge within {hp.max_iter} epochs "
            f"(tol={hp.tol}); returning the last iterate",
            stacklevel=2,
        )
    return SvmFit(
        weights=w[:d].copy(),
        bias=float(w[d]),
        converged=converged,
        n_epochs=epoch,
        dual_objectives=np.asarray(duals),
    )


# ----------------------------------------------------------------------
# Platt scaling: p = 1 / (1 + exp(A*score + B)), fit by Newton's method on
# the smoothed-target negative log-likelihood.  A comes out negative when
# larger scores mean more positive.
# ----------------------------------------------------------------------

def _sigmoid_platt(a: float, b: float, scores: np.ndarray) -> np.ndarray:
    z = a * np.asarray(scores, dtype=np.float64) + b
    out = np.empty_like(z)
    pos = z >= 0
    ez = np.exp(-z[pos])
    out[pos] = ez / (1.0 + ez)
    ez = np.exp(z[~pos])
    out[~pos] = 1.0 / (1.0 + ez)
    return out


def platt_targets(labels: np.ndarray) -> np.ndarray:
    """Platt's smoothed regression targets t+ = (N+ + 1)/(N+ + 2), t- = 1/(N- + 2)."""
    y = np.asarray(labels, dtype=np.float64).ravel()
    n_pos = int(np.sum(y > 0))
    n_neg = y.size - n_pos
    t = np.where(y > 0, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))
    return t


def platt_nll_grad(a: float, b: float, scores: np.ndarray, targets: np.ndarray,
                   sample_weight=None) -> tuple[float, np.ndarray]:
    """Negative log-likelihood and its analytic gradient in (A, B)."""
    s = np.asarray(scores, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    w = 1.0 if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
    z = a * s + b
    # nll = sum(log(1 + e^z) - (1 - t) * z), computed overflow-free
    nll = float(np.sum(w * (np.logaddexp(0.0, z) - (1.0 - t) * z)))
    p = _sigmoid_platt(a, b, s)
    resid = w * (t - p)
    return nll, np.array([np.dot(resid, s), np.sum(resid)])


def platt_fit(scores, labels, max_steps: int = 100,
              sample_weight=None) -> tuple[float, float]:
    """Fit the sigmoid parameters (A, B) by damped Newton iteration."""
    s = np.asarray(scores, dtype=np.float64).ravel()
    y = np.asarray(labels, dtype=np.float64).ravel()
    if s.size != y.size:
        raise ValueError("scores and labels disagree on length")
    if s.size < 4:
        raise ValueError("need at least 4 points to fit a sigmoid")
    n_pos = int(np.sum(y > 0))
    if n_pos == 0 or n_pos == y.size:
        raise ValueError("both classes must be present")
    t = platt_targets(y)
    w = None if sample_weight is None else np.asarray(sample_weight, np.float64).ravel()

    a = 0.0
    b = float(np.log((y.size - n_pos + 1.0) / (n_pos + 1.0)))
    nll, grad = platt_nll_grad(a, b, s, t, w)
    for _ in range(max_steps):
        if max(abs(grad[0]), abs(grad[1])) < 1e-9:
            return a, b
        p = _sigmoid_platt(a, b, s)
        pq = p * (1.0 - p) if w is None else w * p * (1.0 - p)
        h_aa = float(np.dot(pq, s * s)) + 1e-12
        h_ab = float(np.dot(pq, s))
        h_bb = float(np.sum(pq)) + 1e-12
        det = h_aa * h_bb - h_ab * h_ab
        if det <= 0:
            raise ConvergenceError("singular Hessian in sigmoid fit")
        step_a = -(h_bb * grad[0] - h_ab * grad[1]) / det
        step_b = -(h_aa * grad[1] - h_ab * grad[0]) / det
        scale = 1.0
        for _ in range(60):
            cand_a = a + scale * step_a
            cand_b = b + scale * step_b
            cand_nll, cand_grad = platt_nll_grad(cand_a, cand_b, s, t, w)
            if cand_nll <= nll:
                break
            scale *= 0.5
        else:
            raise ConvergenceError("sigmoid fit failed to decrease the NLL")
        a, b, nll, grad = cand_a, cand_b, cand_nll, cand_grad
    if max(abs(grad[0]), abs(grad[1])) < 1e-6:
        return a, b
    raise ConvergenceError(f"sigmoid fit did not converge in {max_steps} Newton steps")


# ----------------------------------------------------------------------
# Labeling-frequency estimation and PU prediction.
# ----------------------------------------------------------------------

C_FLOOR = 1e-6


def elkanoto_fit(data: PUDataset, hp: SvmHyperparams,
                 holdout_frac: float = 0.2, seed: int = 0,
                 class_weight="balanced") -> PUModel:
    """Fit the PU model: base classifier on s-labels, c on held-out positives.

    A seeded ``holdout_frac`` of the rows, stratified by the labeled flag,
    is held out of the base fit; the labeling frequency c is the mean
    calibrated score of the held-out labeled positives, clamped into
    [1e-6, 1].  Stratifying (rather than holding out positives only) keeps
    the training-time labeled fraction equal to the population's, which
    would otherwise deflate every p(s=1 | x) estimate by 1 - holdout_frac
    in odds and bias c low.

    Two further choices keep the calibrated score an honest p(s=1 | x)
    estimate on this intrinsically imbalanced problem:

    * the base SVM is class-weighted ("balanced" by default): with plain
      hinge loss the constant negative classifier is optimal whenever
      unlabeled positives outnumber labeled ones, which would destroy the
      score signal calibration depends on;
    * the sigmoid is fit with the same balanced weights and its intercept
      is then shifted back by log(weight ratio).  The sigmoid-of-linear-
      score family cannot represent a conditional that plateaus below 1
      (which p(s=1 | x) always does when some positives are unlabeled), and
      the unweighted maximum-likelihood compromise systematically
      underestimates it exactly where c is read off; weighting the fit
      toward the labeled class and correcting the prior shift removes
      that bias without distorting predictions elsewhere.
    """
    if not 0.0 < holdout_frac < 1.0:
        raise ValueError("holdout_frac must lie in (0, 1)")
    if data.featurizer is None:
        raise ValueError("PU dataset carries no featurizer config")
    s = np.asarray(data.s_labels).ravel()
    pos_idx = np.flatnonzero(s == 1)
    unl_idx = np.flatnonzero(s == 0)
    if pos_idx.size < 10:
        raise ValueError(f"need at least 10 labeled positives, got {pos_idx.size}")
    n_hold_pos = int(pos_idx.size * holdout_frac)
    if n_hold_pos < 2:
        raise ValueError(
            f"holdout of {n_hold_pos} labeled positives is too small to estimate c"
        )
    rng = np.random.default_rng(seed)
    hold_pos = rng.permutation(pos_idx)[:n_hold_pos]
    hold_unl = rng.permutation(unl_idx)[: int(unl_idx.size * holdout_frac)]
    keep = np.ones(s.size, dtype=bool)
    keep[hold_pos] = False
    keep[hold_unl] = False

    X_fit = data.features[keep]
    y_fit = np.where(s[keep] == 1, 1.0, -1.0)
    fit = train_linear_svm(X_fit, y_fit, hp, class_weight=class_weight)
    scores_fit = X_fit @ fit.weights + fit.bias
    n_fit_pos = float(np.sum(y_fit > 0))
    ratio = (y_fit.size - n_fit_pos) / n_fit_pos
    weights = np.where(y_fit > 0, ratio, 1.0)
    platt_a, platt_b = platt_fit(scores_fit, y_fit, sample_weight=weights)
    platt_b += float(np.log(ratio))  # undo the prior shift the weights introduce
    base = LinearModel(
        weights=fit.weights,
        bias=fit.bias,
        platt_a=platt_a,
        platt_b=platt_b,
        hyperparams=hp,
        featurizer=data.featurizer,
        converged=fit.converged,
    )
    c = float(np.mean(base.calibrated(data.features[hold_pos])))
    c = min(max(c, C_FLOOR), 1.0)
    return PUModel(base=base, c=c, holdout_frac=holdout_frac)


def pu_predict_proba(model: PUModel, x: np.ndarray) -> float:
    """Adjusted positive-class probability min(1, g(x)/c) for one vector."""
    x = np.asarray(x, dtype=np.float64).ravel()
    return float(pu_predict_proba_batch(model, x[np.newaxis, :])[0])


def pu_predict_proba_batch(model: PUModel, X: np.ndarray) -> np.ndarray:
    g = model.base.calibrated(X)
    return np.minimum(1.0, g / model.c)


def extract_moments(model: PUModel, corpus: Corpus,
                    threshold: float = 0.5) -> ExtractionResult:
    """Pick all corpus records with adjusted probability >= threshold.

    Rows come back sorted by descending probability, ties broken by
    ascending record id.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    config = model.base.featurizer
    from .features import FeaturizerKind

    if (config.kind is FeaturizerKind.PRECOMPUTED_EMBEDDING
            and corpus.embedding_dim is not None
            and corpus.embedding_dim != config.dim):
        raise ValueError(
            f"corpus embedding dimension {corpus.embedding_dim} != model "
            f"featurizer dimension {config.dim}"
        )
    matrix = featurize(corpus, config)
    probs = pu_predict_proba_batch(model, matrix.values)
    rows = [
        ExtractedMoment(
            record_id=record.id,
            subgroup=record.subgroup.value,
            text=record.text,
            probability=float(p),
        )
        for record, p in zip(corpus.records, probs)
        if p >= threshold
    ]
    rows.sort(key=lambda r: (-r.probability, r.record_id))
    return ExtractionResult(rows=rows, threshold=threshold)


# ----------------------------------------------------------------------
# Model file round-trip.  Floats are serialized with Python's shortest
# round-trip repr, so save -> load -> predict is bit-identical.
# ----------------------------------------------------------------------

def save_model(model: PUModel, path: str | Path) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "version": model.version,
        "featurizer": model.base.featurizer.to_dict(),
        "weights": model.base.weights.tolist(),
        "bias": model.base.bias,
        "platt_a": model.base.platt_a,
        "platt_b": model.base.platt_b,
        "c": model.c,
        "holdout_frac": model.holdout_frac,
        "hyperparams": model.base.hyperparams.to_dict(),
        "converged": model.base.converged,
        "data_hash": model.data_hash,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> PUModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a {MODEL_FORMAT} file")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"{path}: unsupported model version {doc.get('version')!r}")
    base = LinearModel(
        weights=np.asarray(doc["weights"], dtype=np.float64),
        bias=float(doc["bias"]),
        platt_a=float(doc["platt_a"]),
        platt_b=float(doc["platt_b"]),
        hyperparams=SvmHyperparams.from_dict(doc["hyperparams"]),
        featurizer=FeaturizerConfig.from_dict(doc["featurizer"]),
        converged=bool(doc["converged"]),
    )
    return PUModel(
        base=base,
        c=float(doc["c"]),
        holdout_frac=float(doc["holdout_frac"]),
        version=doc["version"],
        data_hash=doc.get("data_hash", ""),
    )
