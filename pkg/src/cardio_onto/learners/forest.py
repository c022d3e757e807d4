import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .base import check_binary_target, check_features
from .tree import Tree, fit_tree, resolve_schema


class RandomForestClassifier(ClassifierMixin, BaseEstimator):
    """Bagged unpruned trees with per-split feature subsampling.

    Prediction is a majority vote over trees; an even split votes class 0.
    ``max_features=None`` uses ``ceil(sqrt(n_features))``.
    """

    def __init__(self, n_trees=100, max_features=None, bootstrap=True, min_leaf=1,
                 max_depth=None, random_state=1, categorical=None, binary=None,
                 feature_names=None):
        self.n_trees = n_trees
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.random_state = random_state
        self.categorical = categorical
        self.binary = binary
        self.feature_names = feature_names

    def fit(self, X, y):
        X, y = check_features(X, y, estimator=self)
        y = check_binary_target(y)
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        names, kinds = resolve_schema(X.shape[1], self.feature_names, self.categorical, self.binary)
        p = X.shape[1]
        m = math.ceil(math.sqrt(p)) if self.max_features is None else min(int(self.max_features), p)
        n = len(y)
        trees = []
        for child in np.random.SeedSequence(self.random_state).spawn(self.n_trees):
            rng = np.random.default_rng(child)
            rows = rng.integers(0, n, n) if self.bootstrap else np.arange(n)
            trees.append(fit_tree(
                X, y, rows, kinds, names, min_leaf=self.min_leaf, max_depth=self.max_depth,
                use_gain_ratio=False, max_features=m, seed=int(rng.integers(2**31 - 1)),
            ))
        self.trees_ = trees
        self.max_features_ = m
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = p
        return self

    def predict(self, X):
        check_is_fitted(self, "trees_")
        X = check_features(X, estimator=self, reset=False)
        votes = np.zeros(X.shape[0], dtype=np.int64)
        for tree in self.trees_:
            votes += tree.predict(X)
        return (2 * votes > len(self.trees_)).astype(np.int64)

    def _get_state(self):
        return {"max_features": self.max_features_, "trees": [t.to_dict() for t in self.trees_]}

    def _set_state(self, state):
        self.trees_ = [Tree.from_dict(t) for t in state["trees"]]
        self.max_features_ = state["max_features"]
        self.n_features_in_ = len(self.trees_[0].feature_names)
        self.classes_ = np.array([0, 1])
