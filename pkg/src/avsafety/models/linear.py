"""Linear models: L2 logistic regression and a Pegasos-style linear SVM.

Both operate on the design matrix augmented with a trailing constant-1
column. Logistic regression leaves the intercept unregularized and trains
by full-batch gradient descent with backtracking line search; the SVM
regularizes the whole augmented vector (the usual bias-augmentation
simplification) and averages its subgradient iterates over 200 epochs.
Scores for both are the logistic of the linear margin.
"""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset
from ..errors import ModelError
from . import kernels
from .base import register_family
from .boosting import sigmoid

LOGR_MAX_ITER = 5000
LOGR_GRAD_TOL = 1e-6
SVM_EPOCHS = 200


def augment(X: np.ndarray) -> np.ndarray:
    return np.hstack([X, np.ones((X.shape[0], 1))])


def logistic_loss_and_gradient(
    weights: np.ndarray, data: Dataset | tuple[np.ndarray, np.ndarray], l2: float
) -> tuple[float, np.ndarray]:
    """Mean negative log-likelihood plus (l2/2)*||w||^2 over the non-intercept
    weights, with its exact gradient.

    The last weight component is the intercept and is not regularized.
    Accepts a Dataset or a raw (X, y) pair; weights must have one more
    component than the feature count.
    """
    if isinstance(data, Dataset):
        X, y = data.X, data.y
    else:
        X, y = data
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (X.shape[1] + 1,):
        raise ModelError(
            f"weights have shape {w.shape}, expected ({X.shape[1] + 1},)"
        )
    if not np.all(np.isfinite(w)):
        raise ModelError("weights must be finite")
    Xa = augment(np.asarray(X, dtype=np.float64))
    yf = np.asarray(y, dtype=np.float64)
    n = Xa.shape[0]
    z = Xa @ w
    # log(1 + exp(-s)) with s = z for y=1 and s = -z for y=0, overflow-safe
    s = np.where(yf == 1.0, z, -z)
    loss = float(np.mean(np.logaddexp(0.0, -s)))
    p = sigmoid(z)
    grad = Xa.T @ (p - yf) / n
    reg = np.append(w[:-1], 0.0)
    loss += 0.5 * l2 * float(reg @ reg)
    grad += l2 * reg
    return loss, grad


def fit_logr(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> dict:
    """Gradient descent with backtracking (Armijo) line search.

    Stops when the gradient infinity-norm drops below 1e-6 or after 5000
    iterations. Deterministic; the seed is unused.
    """
    l2 = float(hp["l2"])
    w = np.zeros(X.shape[1] + 1, dtype=np.float64)
    step = 1.0
    loss, grad = logistic_loss_and_gradient(w, (X, y), l2)
    for _ in range(LOGR_MAX_ITER):
        gnorm = float(np.max(np.abs(grad)))
        if gnorm < LOGR_GRAD_TOL:
            break
        g2 = float(grad @ grad)
        step = min(step * 2.0, 1e6)
        while True:
            cand = w - step * grad
            cand_loss, cand_grad = logistic_loss_and_gradient(cand, (X, y), l2)
            if cand_loss <= loss - 1e-4 * step * g2 or step < 1e-16:
                break
            step *= 0.5
        w, loss, grad = cand, cand_loss, cand_grad
    return {"weights": w}


def score_linear(params: dict, X: np.ndarray) -> np.ndarray:
    w = params["weights"]
    return sigmoid(augment(np.asarray(X, dtype=np.float64)) @ w)


def fit_svm(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> dict:
    lam = float(hp["reg_lambda"])
    Xa = np.ascontiguousarray(augment(np.asarray(X, dtype=np.float64)))
    ysign = np.where(y == 1, 1.0, -1.0)
    w = kernels.pegasos_train(Xa, ysign, lam, SVM_EPOCHS, np.uint64(seed & (2**64 - 1)))
    return {"weights": w}


def mean_hinge_loss(params: dict, X: np.ndarray, y: np.ndarray) -> float:
    """Mean hinge loss max(0, 1 - y*margin) of an SVM parameter set."""
    margins = augment(np.asarray(X, dtype=np.float64)) @ params["weights"]
    ysign = np.where(y == 1, 1.0, -1.0)
    return float(np.mean(np.maximum(0.0, 1.0 - ysign * margins)))


register_family("logr", fit_logr, score_linear)
register_family("svm", fit_svm, score_linear)
