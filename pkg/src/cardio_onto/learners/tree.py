"""Binary decision tree: information-gain growth, optional error-based pruning."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..data import BINARY, CATEGORICAL, DOMAINS, FEATURES
from ._kernels import BINARY as K_BINARY
from ._kernels import CATEGORICAL as K_CATEGORICAL
from ._kernels import NUMERIC as K_NUMERIC
from ._kernels import apply_tree, grow_tree
from .base import check_binary_target, check_features

KIND_NAMES = {K_NUMERIC: "numeric", K_BINARY: "binary", K_CATEGORICAL: "categorical"}


@dataclass(frozen=True, eq=False)
class Tree:
    """Flat node arrays of a fitted tree.

    Node 0 is the root. ``left[i] == -1`` marks a leaf. For internal nodes,
    ``threshold`` holds the cut point (numeric/binary features, ``<=`` goes
    left) or the category value (categorical features, ``==`` goes left).
    ``count[i]`` holds the training class counts that reached node ``i``.
    ``categories`` maps each categorical feature index to its known values.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    count: np.ndarray
    kinds: np.ndarray
    feature_names: tuple
    categories: dict = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.feature)

    def is_leaf(self, node: int) -> bool:
        return self.left[node] < 0

    def node_class(self, node: int) -> int:
        # ties go to class 0
        return int(self.count[node, 1] > self.count[node, 0])

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.left < 0))

    @property
    def majority_class(self) -> int:
        return self.node_class(0)

    def leaf_classes(self) -> np.ndarray:
        return (self.count[:, 1] > self.count[:, 0]).astype(np.int64)

    def apply(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        return apply_tree(X, self.kinds, self.feature, self.threshold, self.left, self.right)

    def predict(self, X) -> np.ndarray:
        return self.leaf_classes()[self.apply(X)]

    def leaves(self) -> list[int]:
        """Leaf ids in left-to-right order."""
        out, stack = [], [0]
        while stack:
            node = stack.pop()
            if self.is_leaf(node):
                out.append(node)
            else:
                stack.append(int(self.right[node]))
                stack.append(int(self.left[node]))
        return out

    def to_dict(self) -> dict:
        def node(i):
            d = {"count": [int(self.count[i, 0]), int(self.count[i, 1])]}
            if not self.is_leaf(i):
                f = int(self.feature[i])
                d.update(
                    feature=self.feature_names[f],
                    test="eq" if self.kinds[f] == K_CATEGORICAL else "le",
                    value=float(self.threshold[i]),
                    left=node(int(self.left[i])),
                    right=node(int(self.right[i])),
                )
            return d

        features = []
        for i, (name, kind) in enumerate(zip(self.feature_names, self.kinds)):
            f = {"name": name, "kind": KIND_NAMES[int(kind)]}
            if i in self.categories:
                f["values"] = [float(v) for v in self.categories[i]]
            features.append(f)
        return {"features": features, "root": node(0)}

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        names = tuple(f["name"] for f in d["features"])
        codes = {v: k for k, v in KIND_NAMES.items()}
        kinds = np.array([codes[f["kind"]] for f in d["features"]], dtype=np.int64)
        categories = {i: tuple(f["values"]) for i, f in enumerate(d["features"]) if "values" in f}
        feature, threshold, left, right, count = [], [], [], [], []

        def add(nd):
            i = len(feature)
            feature.append(names.index(nd["feature"]) if "feature" in nd else -1)
            threshold.append(float(nd.get("value", 0.0)))
            left.append(-1)
            right.append(-1)
            count.append(nd["count"])
            if "left" in nd:
                left[i] = add(nd["left"])
                right[i] = add(nd["right"])
            return i

        add(d["root"])
        return cls(
            np.array(feature, dtype=np.int64), np.array(threshold, dtype=np.float64),
            np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
            np.array(count, dtype=np.int64).reshape(-1, 2), kinds, names, categories,
        )

    def subtree(self, keep_leaf: np.ndarray) -> "Tree":
        """Copy of the tree where nodes flagged in ``keep_leaf`` become leaves."""
        feature, threshold, left, right, count = [], [], [], [], []

        def add(i):
            j = len(feature)
            leaf = self.is_leaf(i) or keep_leaf[i]
            feature.append(-1 if leaf else int(self.feature[i]))
            threshold.append(0.0 if leaf else float(self.threshold[i]))
            left.append(-1)
            right.append(-1)
            count.append(self.count[i])
            if not leaf:
                left[j] = add(int(self.left[i]))
                right[j] = add(int(self.right[i]))
            return j

        add(0)
        return Tree(
            np.array(feature, dtype=np.int64), np.array(threshold, dtype=np.float64),
            np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
            np.array(count, dtype=np.int64).reshape(-1, 2), self.kinds, self.feature_names,
            self.categories,
        )


def added_errors(n: float, e: float, confidence: float) -> float:
    """Pessimistic extra errors for a leaf covering ``n`` cases with ``e`` errors.

    Upper limit of the binomial confidence interval at level ``confidence``
    (normal approximation with continuity correction), as used by C4.5.
    """
    if e < 1:
        base = n * (1 - confidence ** (1 / n))
        if e == 0:
            return base
        return base + e * (added_errors(n, 1, confidence) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = NormalDist().inv_cdf(1 - confidence)
    f = (e + 0.5) / n
    r = (f + z * z / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n)
    return r * n - e


def prune(tree: Tree, confidence: float = 0.25) -> Tree:
    """Bottom-up subtree replacement: collapse a node when its estimated error
    as a leaf is no worse than its subtree's (plus 0.1, as in C4.5)."""
    collapse = np.zeros(tree.node_count, dtype=bool)

    def leaf_error(i):
        n = float(tree.count[i].sum())
        e = float(tree.count[i].min())
        return e + added_errors(n, e, confidence) if n > 0 else 0.0

    def visit(i):
        if tree.is_leaf(i):
            return leaf_error(i)
        sub = visit(int(tree.left[i])) + visit(int(tree.right[i]))
        as_leaf = leaf_error(i)
        if as_leaf <= sub + 0.1:
            collapse[i] = True
            return as_leaf
        return sub

    visit(0)
    return tree.subtree(collapse)


def feature_kinds(n_features: int, categorical, binary) -> np.ndarray:
    kinds = np.full(n_features, K_NUMERIC, dtype=np.int64)
    for idx, code in ((binary, K_BINARY), (categorical, K_CATEGORICAL)):
        for i in idx:
            if not 0 <= i < n_features:
                raise ValueError(f"feature index {i} out of range for {n_features} features")
            kinds[i] = code
    return kinds


def resolve_schema(n_features, feature_names, categorical, binary):
    """Defaults to the cardiovascular column layout when X has its 11 columns."""
    cardio = n_features == len(FEATURES)
    if feature_names is None:
        feature_names = FEATURES if cardio else tuple(f"x{i}" for i in range(n_features))
    if len(feature_names) != n_features:
        raise ValueError(f"{len(feature_names)} feature names for {n_features} features")
    if categorical is None:
        categorical = CATEGORICAL if cardio else ()
    if binary is None:
        binary = BINARY if cardio else ()
    return tuple(feature_names), feature_kinds(n_features, categorical, binary)


def fit_tree(X, y, rows, kinds, names, *, min_leaf, max_depth, use_gain_ratio,
             max_features, seed) -> Tree:
    out = grow_tree(
        X, y.astype(np.int64), np.asarray(rows, dtype=np.int64), kinds,
        int(min_leaf), -1 if max_depth is None else int(max_depth),
        bool(use_gain_ratio), int(max_features), int(seed),
    )
    feature, threshold, left, right, c0, c1, _ = out
    categories = {}
    for j in np.flatnonzero(kinds == K_CATEGORICAL):
        known = set(np.unique(X[:, j]).tolist()) | DOMAINS.get(names[j], set())
        categories[int(j)] = tuple(sorted(float(v) for v in known))
    return Tree(feature.copy(), threshold.copy(), left.copy(), right.copy(),
                np.stack([c0, c1], axis=1), kinds, names, categories)


class DecisionTreeClassifier(ClassifierMixin, BaseEstimator):
    """Binary decision tree on numeric, binary and categorical attributes.

    Numeric attributes split at midpoints between consecutive distinct
    values; binary attributes split at their lower value (``x <= 0``);
    categorical attributes split one-vs-rest (``x == v``). Splits maximise
    information gain (or gain ratio). After growth, C4.5-style error-based
    pruning is applied unless ``prune=False``.

    Parameters
    ----------
    min_leaf : int
        Minimum number of training cases on each side of a split.
    max_depth : int or None
        Depth limit; None grows until leaves are pure or unsplittable.
    use_gain_ratio : bool
    prune : bool
    confidence : float
        Confidence factor for pruning; smaller prunes harder.
    categorical, binary : sequence of int or None
        Column indices. None picks the cardiovascular layout when X has 11
        columns (cholesterol and gluc categorical; gender, smoke, alco,
        active binary) and all-numeric otherwise.
    feature_names : sequence of str or None
    """

    def __init__(self, min_leaf=2, max_depth=None, use_gain_ratio=False, prune=True,
                 confidence=0.25, categorical=None, binary=None, feature_names=None):
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.use_gain_ratio = use_gain_ratio
        self.prune = prune
        self.confidence = confidence
        self.categorical = categorical
        self.binary = binary
        self.feature_names = feature_names

    def fit(self, X, y):
        X, y = check_features(X, y, estimator=self)
        y = check_binary_target(y)
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        names, kinds = resolve_schema(X.shape[1], self.feature_names, self.categorical, self.binary)
        tree = fit_tree(X, y, np.arange(len(y)), kinds, names, min_leaf=self.min_leaf,
                        max_depth=self.max_depth, use_gain_ratio=self.use_gain_ratio,
                        max_features=X.shape[1], seed=0)
        if self.prune:
            tree = prune(tree, self.confidence)
        self.tree_ = tree
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "tree_")
        X = check_features(X, estimator=self, reset=False)
        return self.tree_.predict(X)

    def apply(self, X):
        check_is_fitted(self, "tree_")
        return self.tree_.apply(check_features(X, estimator=self, reset=False))

    def _get_state(self):
        return self.tree_.to_dict()

    def _set_state(self, state):
        self.tree_ = Tree.from_dict(state)
        self.n_features_in_ = len(self.tree_.feature_names)
        self.classes_ = np.array([0, 1])
