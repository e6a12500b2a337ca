"""Base learners: ridge regression, boosted regression trees, and a
gradient-descent logistic model for treatment propensities.

All three are deterministic given their inputs; no randomness is consumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import EstimationError

REGRESSOR_KINDS = ("ridge", "boosted-trees")

_MIN_SPLIT_GAIN = 1e-12


def _as_matrix(features: object) -> np.ndarray:
    x = np.asarray(features, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise EstimationError(f"feature matrix must be 2-dimensional, got shape {x.shape}")
    return x


def _as_vector(targets: object, n_rows: int, label: str) -> np.ndarray:
    y = np.asarray(targets, dtype=float).reshape(-1)
    if y.shape[0] != n_rows:
        raise EstimationError(
            f"{label} length {y.shape[0]} does not match {n_rows} feature rows"
        )
    return y


def _standardize_fit(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Column means and scales for z-scoring; constant columns get scale 1
    so they standardize to exactly zero."""
    mean = x.mean(axis=0) if x.shape[1] else np.zeros(0)
    std = x.std(axis=0) if x.shape[1] else np.zeros(0)
    scale = np.where(std > 0.0, std, 1.0)
    return (x - mean) / scale, mean, scale


@dataclass
class RidgeRegressor:
    """Closed-form L2-penalized linear regression on standardized features.

    The intercept is the unpenalized target mean, which makes predictions
    exactly equivariant to constant shifts of the targets.
    """

    lam: float = 1.0
    _mean: np.ndarray = field(init=False, repr=False, default=None)
    _scale: np.ndarray = field(init=False, repr=False, default=None)
    _coef: np.ndarray = field(init=False, repr=False, default=None)
    _intercept: float = field(init=False, repr=False, default=0.0)

    def fit(self, features: object, targets: object) -> "RidgeRegressor":
        x = _as_matrix(features)
        y = _as_vector(targets, x.shape[0], "targets")
        if x.shape[0] < 2:
            raise EstimationError("regressor fitting requires at least 2 rows")
        if self.lam < 0.0:
            raise EstimationError("ridge penalty must be non-negative")
        z, self._mean, self._scale = _standardize_fit(x)
        self._intercept = float(y.mean())
        centered = y - self._intercept
        p = z.shape[1]
        if p == 0:
            self._coef = np.zeros(0)
            return self
        gram = z.T @ z + self.lam * np.eye(p)
        moment = z.T @ centered
        try:
            self._coef = np.linalg.solve(gram, moment)
        except np.linalg.LinAlgError:
            self._coef = np.linalg.lstsq(gram, moment, rcond=None)[0]
        return self

    def predict(self, features: object) -> np.ndarray:
        if self._coef is None:
            raise EstimationError("predict called before fit")
        x = _as_matrix(features)
        if x.shape[1] != self._mean.shape[0]:
            raise EstimationError(
                f"predict features have {x.shape[1]} columns, model expects "
                f"{self._mean.shape[0]}"
            )
        z = (x - self._mean) / self._scale
        return self._intercept + z @ self._coef


@dataclass(frozen=True)
class _TreeNode:
    value: float
    feature: Optional[int] = None
    threshold: float = 0.0
    left: Optional["_TreeNode"] = None
    right: Optional["_TreeNode"] = None


def _best_split(
    x: np.ndarray,
    residuals: np.ndarray,
    min_leaf: int,
) -> Optional[tuple[float, int, float]]:
    """Exact greedy search for the split maximizing the sum-of-squares gain.

    Ties resolve to the lowest feature index, then the lowest threshold, so
    fitting is deterministic.
    """
    n = x.shape[0]
    total = residuals.sum()
    base = total * total / n
    best: Optional[tuple[float, int, float]] = None
    for feature in range(x.shape[1]):
        order = np.argsort(x[:, feature], kind="stable")
        sorted_values = x[order, feature]
        left_sums = np.cumsum(residuals[order])[:-1]
        counts = np.arange(1, n)
        gains = (
            left_sums * left_sums / counts
            + (total - left_sums) * (total - left_sums) / (n - counts)
            - base
        )
        usable = (
            (counts >= min_leaf)
            & (counts <= n - min_leaf)
            & (sorted_values[1:] > sorted_values[:-1])
        )
        if not usable.any():
            continue
        gains = np.where(usable, gains, -np.inf)
        pick = int(np.argmax(gains))
        gain = float(gains[pick])
        if gain <= _MIN_SPLIT_GAIN:
            continue
        if best is None or gain > best[0]:
            threshold = float((sorted_values[pick] + sorted_values[pick + 1]) / 2.0)
            best = (gain, feature, threshold)
    return best


def _fit_tree(
    x: np.ndarray,
    residuals: np.ndarray,
    depth: int,
    max_depth: int,
    min_leaf: int,
) -> _TreeNode:
    value = float(residuals.mean())
    if depth >= max_depth or x.shape[0] < 2 * min_leaf:
        return _TreeNode(value=value)
    split = _best_split(x, residuals, min_leaf)
    if split is None:
        return _TreeNode(value=value)
    _, feature, threshold = split
    mask = x[:, feature] <= threshold
    left = _fit_tree(x[mask], residuals[mask], depth + 1, max_depth, min_leaf)
    right = _fit_tree(x[~mask], residuals[~mask], depth + 1, max_depth, min_leaf)
    return _TreeNode(value=value, feature=feature, threshold=threshold, left=left, right=right)


def _predict_tree(node: _TreeNode, x: np.ndarray, out: np.ndarray, idx: np.ndarray) -> None:
    if node.feature is None:
        out[idx] = node.value
        return
    mask = x[idx, node.feature] <= node.threshold
    _predict_tree(node.left, x, out, idx[mask])
    _predict_tree(node.right, x, out, idx[~mask])


@dataclass
class BoostedTreesRegressor:
    """Gradient boosting with exact greedy depth-limited regression trees."""

    rounds: int = 200
    max_depth: int = 3
    shrinkage: float = 0.1
    min_leaf: int = 5
    _base: float = field(init=False, repr=False, default=0.0)
    _trees: list = field(init=False, repr=False, default=None)
    _n_features: int = field(init=False, repr=False, default=0)

    def fit(self, features: object, targets: object) -> "BoostedTreesRegressor":
        x = _as_matrix(features)
        y = _as_vector(targets, x.shape[0], "targets")
        if x.shape[0] < 2:
            raise EstimationError("regressor fitting requires at least 2 rows")
        if self.rounds < 1:
            raise EstimationError("boosting requires at least 1 round")
        if not 0.0 < self.shrinkage <= 1.0:
            raise EstimationError("shrinkage must lie in (0, 1]")
        self._n_features = x.shape[1]
        self._base = float(y.mean())
        self._trees = []
        if x.shape[1] == 0:
            return self
        predictions = np.full(x.shape[0], self._base)
        for _ in range(self.rounds):
            residuals = y - predictions
            tree = _fit_tree(x, residuals, 0, self.max_depth, self.min_leaf)
            step = np.empty(x.shape[0])
            _predict_tree(tree, x, step, np.arange(x.shape[0]))
            predictions = predictions + self.shrinkage * step
            self._trees.append(tree)
        return self

    def predict(self, features: object) -> np.ndarray:
        if self._trees is None:
            raise EstimationError("predict called before fit")
        x = _as_matrix(features)
        if x.shape[1] != self._n_features:
            raise EstimationError(
                f"predict features have {x.shape[1]} columns, model expects "
                f"{self._n_features}"
            )
        out = np.full(x.shape[0], self._base)
        if not self._trees:
            return out
        idx = np.arange(x.shape[0])
        step = np.empty(x.shape[0])
        for tree in self._trees:
            _predict_tree(tree, x, step, idx)
            out = out + self.shrinkage * step
        return out


@dataclass
class LogisticPropensity:
    """Full-batch gradient-descent logistic regression for g(x) = P(W=1 | x).

    The loss is mean log-loss plus an L2 penalty lam/(2n) * ||coef||^2 on the
    non-intercept coefficients; the step size comes from a Gershgorin bound
    on the loss curvature, so training is deterministic with a fixed budget.
    """

    lam: float = 1.0
    iterations: int = 500
    clip_low: float = 0.01
    clip_high: float = 0.99
    _mean: np.ndarray = field(init=False, repr=False, default=None)
    _scale: np.ndarray = field(init=False, repr=False, default=None)
    _coef: np.ndarray = field(init=False, repr=False, default=None)
    _intercept: float = field(init=False, repr=False, default=0.0)

    def fit(self, features: object, labels: object) -> "LogisticPropensity":
        x = _as_matrix(features)
        w = _as_vector(labels, x.shape[0], "labels")
        if not np.isin(w, (0.0, 1.0)).all():
            raise EstimationError("propensity labels must be 0 or 1")
        if w.min() == w.max():
            raise EstimationError("propensity fitting requires both treatment groups")
        if self.iterations < 1:
            raise EstimationError("iteration budget must be positive")
        z, self._mean, self._scale = _standardize_fit(x)
        n, p = z.shape
        gram = z.T @ z / n if p else np.zeros((0, 0))
        curvature = float(np.abs(gram).sum(axis=1).max()) if p else 0.0
        lipschitz = max(curvature, 1.0) / 4.0 + self.lam / n
        step = 1.0 / lipschitz
        coef = np.zeros(p)
        intercept = 0.0
        for _ in range(self.iterations):
            logits = z @ coef + intercept
            probs = _sigmoid(logits)
            error = probs - w
            grad_coef = z.T @ error / n + (self.lam / n) * coef
            grad_intercept = float(error.mean())
            coef = coef - step * grad_coef
            intercept = intercept - step * grad_intercept
        self._coef = coef
        self._intercept = intercept
        return self

    def predict_proba(self, features: object) -> np.ndarray:
        if self._coef is None:
            raise EstimationError("predict_proba called before fit")
        x = _as_matrix(features)
        if x.shape[1] != self._mean.shape[0]:
            raise EstimationError(
                f"predict features have {x.shape[1]} columns, model expects "
                f"{self._mean.shape[0]}"
            )
        z = (x - self._mean) / self._scale
        probs = _sigmoid(z @ self._coef + self._intercept)
        return np.clip(probs, self.clip_low, self.clip_high)


def _sigmoid(logits: np.ndarray) -> np.ndarray:
    out = np.empty_like(logits, dtype=float)
    positive = logits >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-logits[positive]))
    exp_logits = np.exp(logits[~positive])
    out[~positive] = exp_logits / (1.0 + exp_logits)
    return out


def fit_regressor(
    features: object,
    targets: object,
    kind: str = "ridge",
    seed: int = 0,
    ridge_lambda: float = 1.0,
    rounds: int = 200,
) -> object:
    """Fit and return a regressor of the requested kind.

    Both kinds are deterministic, so `seed` only fixes the interface.
    """
    del seed
    if kind == "ridge":
        return RidgeRegressor(lam=ridge_lambda).fit(features, targets)
    if kind == "boosted-trees":
        return BoostedTreesRegressor(rounds=rounds).fit(features, targets)
    raise EstimationError(f"unknown regressor kind: {kind!r}")


def fit_propensity(features: object, labels: object, seed: int = 0) -> LogisticPropensity:
    """Fit the propensity model; `seed` only fixes the interface."""
    del seed
    return LogisticPropensity().fit(features, labels)
