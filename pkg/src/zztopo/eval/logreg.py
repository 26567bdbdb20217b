"""Multinomial logistic regression with an L2 penalty on the weights."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp


@dataclass(frozen=True, eq=False)
class LogRegModel:
    W: np.ndarray  # (D, C)
    b: np.ndarray  # (C,)
    classes: np.ndarray
    converged: bool = True

    def scores(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.W + self.b


def _objective(theta, X, Y, l2):
    D, C = X.shape[1], Y.shape[1]
    W = theta[: D * C].reshape(D, C)
    b = theta[D * C :]
    Z = X @ W + b
    lse = logsumexp(Z, axis=1)
    loss = float((lse - (Z * Y).sum(axis=1)).sum() + 0.5 * l2 * (W * W).sum())
    P = np.exp(Z - lse[:, None])
    G = P - Y
    gW = X.T @ G + l2 * W
    gb = G.sum(axis=0)
    return loss, np.concatenate([gW.ravel(), gb])


def logreg_fit(X, y, l2: float = 1.0, tol: float = 1e-6, max_iter: int = 1000) -> LogRegModel:
    """Minimize summed cross-entropy + l2/2 ||W||^2 (bias unpenalized) from zero."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    classes, yi = np.unique(y, return_inverse=True)
    if len(classes) < 2:
        raise ValueError("training data must contain at least 2 classes")
    N, D = X.shape
    C = len(classes)
    Y = np.zeros((N, C))
    Y[np.arange(N), yi] = 1.0
    res = minimize(_objective, np.zeros(D * C + C), args=(X, Y, l2), jac=True, method="L-BFGS-B",
                   options={"gtol": tol, "maxiter": max_iter, "ftol": 0.0})
    W = res.x[: D * C].reshape(D, C)
    return LogRegModel(W, res.x[D * C :], classes, bool(res.success))


def logreg_predict(model: LogRegModel, X) -> np.ndarray:
    """Class with the highest score; np.argmax returns the lowest index on ties."""
    return model.classes[np.argmax(model.scores(X), axis=1)]
