"""Logistic regression (Newton/IRLS) and a linear SVM (hinge subgradient descent).

Both standardise features internally and expose ``coef_``/``intercept_`` on
the original feature scale, so ``decision_function`` is a plain dot product.
A decision value of exactly 0 predicts class 0.
"""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .base import check_binary_target, check_features


def _standardize(X):
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0] = 1.0
    return (X - mean) / scale, mean, scale


def _log1pexp(z):
    return np.logaddexp(0.0, z)


class _LinearModel(ClassifierMixin, BaseEstimator):

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = check_features(X, estimator=self, reset=False)
        return X @ self.coef_ + self.intercept_

    def predict(self, X):
        return (self.decision_function(X) > 0).astype(np.int64)

    def _set_linear(self, w, b, mean, scale):
        self.coef_ = w / scale
        self.intercept_ = float(b - np.sum(w * mean / scale))
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = len(w)

    def _get_state(self):
        return {"coef": self.coef_.tolist(), "intercept": self.intercept_}

    def _set_state(self, state):
        self.coef_ = np.array(state["coef"], dtype=np.float64)
        self.intercept_ = float(state["intercept"])
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = len(self.coef_)


class LogisticRegression(_LinearModel):
    """Ridge-penalised logistic regression fitted by Newton's method.

    Iterates until the largest parameter update falls below ``tol``; steps
    are halved whenever they would lower the penalised log-likelihood.
    """

    def __init__(self, ridge=1e-8, tol=1e-8, max_iter=100):
        self.ridge = ridge
        self.tol = tol
        self.max_iter = max_iter

    def _penalised_loglik(self, A, y, beta):
        z = A @ beta
        return np.sum(y * z - _log1pexp(z)) - 0.5 * self.ridge * np.sum(beta[1:] ** 2)

    def fit(self, X, y):
        X, y = check_features(X, y, estimator=self)
        y = check_binary_target(y, require_both=True).astype(np.float64)
        Xs, mean, scale = _standardize(X)
        A = np.hstack([np.ones((len(y), 1)), Xs])
        p = A.shape[1]
        penalty = np.full(p, self.ridge)
        penalty[0] = 0.0
        beta = np.zeros(p)
        ll = self._penalised_loglik(A, y, beta)
        self.n_iter_ = 0
        for it in range(1, self.max_iter + 1):
            prob = 1.0 / (1.0 + np.exp(-(A @ beta)))
            w = prob * (1.0 - prob)
            grad = A.T @ (y - prob) - penalty * beta
            hess = (A.T * w) @ A + np.diag(penalty)
            try:
                step = np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(hess, grad, rcond=None)[0]
            t = 1.0
            while t > 1e-10:
                cand = self._penalised_loglik(A, y, beta + t * step)
                if cand >= ll - 1e-12:
                    break
                t /= 2
            beta = beta + t * step
            ll = self._penalised_loglik(A, y, beta)
            self.n_iter_ = it
            if np.max(np.abs(t * step)) < self.tol:
                break
        self._set_linear(beta[1:], beta[0], mean, scale)
        return self

    def predict_proba(self, X):
        p1 = 1.0 / (1.0 + np.exp(-self.decision_function(X)))
        return np.column_stack([1 - p1, p1])


def hinge_objective(w, b, X, t, lam):
    """``lam/2 |w|^2 + mean(max(0, 1 - t (Xw + b)))`` for labels ``t`` in {-1, +1}."""
    margin = t * (X @ w + b)
    return 0.5 * lam * (w @ w) + np.mean(np.maximum(0.0, 1.0 - margin))


def hinge_gradient(w, b, X, t, lam):
    """(Sub)gradient of :func:`hinge_objective`; exact wherever no margin equals 1."""
    margin = t * (X @ w + b)
    active = margin < 1.0
    n = len(t)
    gw = lam * w - (X[active].T @ t[active]) / n
    gb = -np.sum(t[active]) / n
    return gw, gb


class LinearSVM(_LinearModel):
    """Soft-margin linear SVM trained by full-batch subgradient descent.

    The objective is ``1/2 |w|^2 + C * sum(hinge)`` scaled by ``1/(C n)``;
    the step size decays as ``step / sqrt(t)`` and the iterate with the lowest
    objective is kept.
    """

    def __init__(self, C=1.0, n_iter=500, step=1.0):
        self.C = C
        self.n_iter = n_iter
        self.step = step

    def fit(self, X, y):
        X, y = check_features(X, y, estimator=self)
        y = check_binary_target(y, require_both=True)
        if self.C <= 0:
            raise ValueError("C must be positive")
        Xs, mean, scale = _standardize(X)
        t = np.where(y == 1, 1.0, -1.0)
        lam = 1.0 / (self.C * len(t))
        w = np.zeros(X.shape[1])
        b = 0.0
        best = (hinge_objective(w, b, Xs, t, lam), w.copy(), b)
        for it in range(1, self.n_iter + 1):
            gw, gb = hinge_gradient(w, b, Xs, t, lam)
            eta = self.step / np.sqrt(it)
            w = w - eta * gw
            b = b - eta * gb
            obj = hinge_objective(w, b, Xs, t, lam)
            if obj < best[0]:
                best = (obj, w.copy(), b)
        self.objective_ = best[0]
        self._set_linear(best[1], best[2], mean, scale)
        return self
