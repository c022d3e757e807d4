import math

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._kernels import mlp_sgd
from .base import check_binary_target, check_features
from .neighbors import minmax_fit


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def forward(W1, b1, w2, b2, X):
    hidden = _sigmoid(X @ W1 + b1)
    return hidden, _sigmoid(hidden @ w2 + b2)


def loss_and_grad(W1, b1, w2, b2, X, y):
    """Summed squared error ``sum(0.5 (o - y)^2)`` and its gradient by backprop."""
    hidden, out = forward(W1, b1, w2, b2, X)
    err = out - y
    loss = 0.5 * np.sum(err ** 2)
    delta_o = err * out * (1 - out)
    g_w2 = hidden.T @ delta_o
    g_b2 = np.sum(delta_o)
    delta_h = np.outer(delta_o, w2) * hidden * (1 - hidden)
    g_W1 = X.T @ delta_h
    g_b1 = delta_h.sum(axis=0)
    return loss, (g_W1, g_b1, g_w2, g_b2)


class MLPClassifier(ClassifierMixin, BaseEstimator):
    """One-hidden-layer sigmoid network trained by per-instance backprop with momentum.

    Inputs are min-max scaled to [0, 1] inside the model. ``n_hidden=None``
    uses ``ceil((n_features + 2) / 2)`` units. Weights start uniform in
    [-0.05, 0.05]; instances are presented in one seeded order every epoch.
    An output of exactly 0.5 predicts class 0.
    """

    def __init__(self, n_hidden=None, learning_rate=0.3, momentum=0.2, epochs=500,
                 random_state=1):
        self.n_hidden = n_hidden
        self.learning_rate = learning_rate
        self.momentum = momentum
        self.epochs = epochs
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_features(X, y, estimator=self)
        y = check_binary_target(y, require_both=True)
        n, p = X.shape
        h = math.ceil((p + 2) / 2) if self.n_hidden is None else int(self.n_hidden)
        self.lo_, self.span_ = minmax_fit(X)
        Xs = np.ascontiguousarray((X - self.lo_) / self.span_)
        rng = np.random.default_rng(self.random_state)
        W1 = rng.uniform(-0.05, 0.05, (p, h))
        b1 = rng.uniform(-0.05, 0.05, h)
        w2 = rng.uniform(-0.05, 0.05, h)
        b2 = float(rng.uniform(-0.05, 0.05))
        order = rng.permutation(n)
        b2 = mlp_sgd(Xs, y.astype(np.float64), W1, b1, w2, b2, float(self.learning_rate),
                     float(self.momentum), int(self.epochs), order)
        self.W1_, self.b1_, self.w2_, self.b2_ = W1, b1, w2, float(b2)
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = p
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "W1_")
        X = check_features(X, estimator=self, reset=False)
        _, out = forward(self.W1_, self.b1_, self.w2_, self.b2_, (X - self.lo_) / self.span_)
        return np.column_stack([1 - out, out])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] > 0.5).astype(np.int64)

    def _get_state(self):
        return {"lo": self.lo_.tolist(), "span": self.span_.tolist(), "W1": self.W1_.tolist(),
                "b1": self.b1_.tolist(), "w2": self.w2_.tolist(), "b2": self.b2_}

    def _set_state(self, state):
        self.lo_ = np.array(state["lo"])
        self.span_ = np.array(state["span"])
        self.W1_ = np.array(state["W1"])
        self.b1_ = np.array(state["b1"])
        self.w2_ = np.array(state["w2"])
        self.b2_ = float(state["b2"])
        self.n_features_in_ = len(self.lo_)
        self.classes_ = np.array([0, 1])
