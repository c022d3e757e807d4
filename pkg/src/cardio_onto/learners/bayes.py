import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..data import BINARY, CATEGORICAL, FEATURES
from .base import check_binary_target, check_features


class NaiveBayes(ClassifierMixin, BaseEstimator):
    """Naive Bayes with Gaussian numeric likelihoods and Laplace-smoothed
    frequency tables for categorical columns.

    Class priors are Laplace-smoothed as well: ``(n_c + 1) / (n + 2)``.
    A categorical value's likelihood is ``(count(v, c) + 1) / (n_c + V)`` where
    ``V`` is the number of distinct values seen in training. Equal posteriors
    predict class 0.
    """

    def __init__(self, categorical=None, min_std=1e-6):
        self.categorical = categorical
        self.min_std = min_std

    def _categorical_columns(self, p):
        if self.categorical is not None:
            return tuple(self.categorical)
        return tuple(sorted(CATEGORICAL + BINARY)) if p == len(FEATURES) else ()

    def fit(self, X, y):
        X, y = check_features(X, y, estimator=self)
        y = check_binary_target(y)
        p = X.shape[1]
        cat = self._categorical_columns(p)
        n = len(y)
        counts = np.array([np.sum(y == 0), np.sum(y == 1)])
        self.log_prior_ = np.log((counts + 1) / (n + 2))
        self.gaussians_ = {}
        self.tables_ = {}
        for j in range(p):
            col = X[:, j]
            if j in cat:
                values = np.unique(col)
                table = {}
                for v in values:
                    table[float(v)] = [
                        float(np.log((np.sum(col[y == c] == v) + 1) / (counts[c] + len(values))))
                        for c in (0, 1)
                    ]
                self.tables_[j] = {
                    "values": table,
                    "unseen": [float(np.log(1 / (counts[c] + len(values)))) for c in (0, 1)],
                }
            else:
                stats = []
                for c in (0, 1):
                    xc = col[y == c]
                    mu = float(xc.mean()) if xc.size else 0.0
                    sd = float(xc.std()) if xc.size else 0.0
                    stats.append((mu, max(sd, self.min_std)))
                self.gaussians_[j] = stats
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = p
        return self

    def joint_log_likelihood(self, X):
        check_is_fitted(self, "log_prior_")
        X = check_features(X, estimator=self, reset=False)
        jll = np.tile(self.log_prior_, (X.shape[0], 1))
        for j, stats in self.gaussians_.items():
            for c, (mu, sd) in enumerate(stats):
                jll[:, c] += -0.5 * np.log(2 * np.pi * sd * sd) - (X[:, j] - mu) ** 2 / (2 * sd * sd)
        for j, table in self.tables_.items():
            for i, v in enumerate(X[:, j]):
                jll[i] += table["values"].get(float(v), table["unseen"])
        return jll

    def predict(self, X):
        jll = self.joint_log_likelihood(X)
        return (jll[:, 1] > jll[:, 0]).astype(np.int64)

    def _get_state(self):
        return {
            "log_prior": self.log_prior_.tolist(),
            "gaussians": {str(j): [list(s) for s in v] for j, v in self.gaussians_.items()},
            "tables": {
                str(j): {"values": [[v, lp] for v, lp in t["values"].items()], "unseen": t["unseen"]}
                for j, t in self.tables_.items()
            },
        }

    def _set_state(self, state):
        self.log_prior_ = np.array(state["log_prior"])
        self.gaussians_ = {int(j): [tuple(s) for s in v] for j, v in state["gaussians"].items()}
        self.tables_ = {
            int(j): {"values": {float(v): lp for v, lp in t["values"]}, "unseen": t["unseen"]}
            for j, t in state["tables"].items()
        }
        self.n_features_in_ = len(self.gaussians_) + len(self.tables_)
        self.classes_ = np.array([0, 1])
