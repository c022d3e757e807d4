import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._kernels import nearest_neighbours
from .base import check_binary_target, check_features


def minmax_fit(X):
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    span[span == 0] = 1.0
    return lo, span


class KNeighbors(ClassifierMixin, BaseEstimator):
    """k-nearest-neighbour vote over min-max scaled Euclidean distance.

    Equidistant neighbours are ranked by training order; a tied vote
    predicts class 0. Tolerates single-class training data.
    """

    def __init__(self, k=1, scale=True):
        self.k = k
        self.scale = scale

    def fit(self, X, y):
        X, y = check_features(X, y, estimator=self)
        y = check_binary_target(y)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.scale:
            self.lo_, self.span_ = minmax_fit(X)
        else:
            self.lo_, self.span_ = np.zeros(X.shape[1]), np.ones(X.shape[1])
        self.train_X_ = np.ascontiguousarray((X - self.lo_) / self.span_)
        self.train_y_ = y
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]
        return self

    def kneighbors(self, X):
        check_is_fitted(self, "train_X_")
        X = check_features(X, estimator=self, reset=False)
        k = min(self.k, len(self.train_y_))
        return nearest_neighbours(self.train_X_, np.ascontiguousarray((X - self.lo_) / self.span_), k)

    def predict(self, X):
        idx = self.kneighbors(X)
        ones = self.train_y_[idx].sum(axis=1)
        return (2 * ones > idx.shape[1]).astype(np.int64)

    def _get_state(self):
        return {"lo": self.lo_.tolist(), "span": self.span_.tolist(),
                "X": self.train_X_.tolist(), "y": self.train_y_.tolist()}

    def _set_state(self, state):
        self.lo_ = np.array(state["lo"])
        self.span_ = np.array(state["span"])
        self.train_X_ = np.ascontiguousarray(state["X"], dtype=np.float64)
        self.train_y_ = np.array(state["y"], dtype=np.int64)
        self.n_features_in_ = len(self.lo_)
        self.classes_ = np.array([0, 1])
