"""Deterministic logistic regression trained by full-batch gradient descent.

No solver randomness: zero initialization, fixed step size, L2 penalty on
the weights only (never the bias), stop on gradient norm or iteration cap.
Identical inputs give bit-identical models, which the classifier
experiments rely on.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_feature_matrix
from .errors import DataError

DEFAULT_HP = {"l2": 1e-4, "lr": 0.1, "max_iter": 5000, "tol": 1e-8}


def logistic_loss(w, b, X, y, l2: float) -> float:
    """Mean cross-entropy + 0.5 * l2 * ||w||^2 (bias unpenalized)."""
    z = X @ w + b
    # log(1 + e^z) - y z == cross-entropy of sigmoid(z) against y, but stable
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * np.dot(w, w))


def logistic_gradient(w, b, X, y, l2: float):
    """(grad_w, grad_b) of logistic_loss at (w, b)."""
    z = X @ w + b
    residual = expit(z) - y
    grad_w = X.T @ residual / len(y) + l2 * w
    grad_b = float(residual.mean())
    return grad_w, grad_b


def fit_logistic_gd(
    X,
    y,
    l2: float = 1e-4,
    lr: float = 0.1,
    max_iter: int = 5000,
    tol: float = 1e-8,
):
    """Gradient descent from zero init; returns (w, b, n_iter, converged).

    The gradient norm is checked before each update, so a solution that is
    already stationary is returned untouched with n_iter = 0.
    """
    X = as_feature_matrix(X, "X")
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or len(y) != X.shape[0]:
        raise DataError(f"y must be 1-D with {X.shape[0]} entries")
    if not np.isin(y, (0.0, 1.0)).all():
        raise DataError("y must contain only 0/1 labels")
    if len(np.unique(y)) < 2:
        raise ValueError("need at least one example of each class")

    w = np.zeros(X.shape[1], dtype=np.float64)
    b = 0.0
    n_iter = 0
    converged = False
    for n_iter in range(max_iter + 1):
        grad_w, grad_b = logistic_gradient(w, b, X, y, l2)
        gnorm = math.sqrt(float(np.dot(grad_w, grad_w)) + grad_b * grad_b)
        if gnorm <= tol:
            converged = True
            break
        if n_iter == max_iter:
            break
        w = w - lr * grad_w
        b = b - lr * grad_b
    return w, b, n_iter, converged


class LogisticRegressionGD(ClassifierMixin, BaseEstimator):
    """sklearn-style binary classifier around fit_logistic_gd.

    Parameters are the optimizer hyperparameters; fitted state lives in
    coef_, intercept_, classes_, n_iter_, converged_.
    """

    def __init__(self, l2: float = 1e-4, lr: float = 0.1,
                 max_iter: int = 5000, tol: float = 1e-8):
        self.l2 = l2
        self.lr = lr
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        X = as_feature_matrix(X, "X")
        y = np.asarray(y)
        classes = np.unique(y)
        if len(classes) != 2:
            raise ValueError(
                f"binary classifier needs exactly 2 classes, got {len(classes)}"
            )
        y01 = (y == classes[1]).astype(np.float64)
        w, b, n_iter, converged = fit_logistic_gd(
            X, y01, l2=self.l2, lr=self.lr, max_iter=self.max_iter, tol=self.tol
        )
        self.classes_ = classes
        self.coef_ = w
        self.intercept_ = b
        self.n_iter_ = n_iter
        self.converged_ = converged
        return self

    def decision_function(self, X):
        check_is_fitted(self, "coef_")
        X = as_feature_matrix(X, "X")
        if X.shape[1] != self.coef_.shape[0]:
            raise DataError(
                f"X has {X.shape[1]} features, model has {self.coef_.shape[0]}"
            )
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p1 = expit(self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        scores = self.decision_function(X)
        return self.classes_[(scores >= 0.0).astype(int)]
