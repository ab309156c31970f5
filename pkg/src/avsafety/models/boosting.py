"""Second-order gradient-boosted trees on logistic loss.

Margins start at 0 (probability 0.5). Each round fits one Newton tree to
the current gradients/hessians; leaf steps -G/(H + reg_lambda) are scaled
by the learning rate before being stored, so prediction is simply the
sigmoid of the summed stored leaf values. There is no row or column
subsampling, which keeps fitting deterministic without a seed.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .base import register_family


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def fit_boosting(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> dict:
    rounds = int(hp["rounds"])
    lr = float(hp["learning_rate"])
    max_depth = int(hp["max_depth"])
    lam = float(hp["reg_lambda"])

    X = np.ascontiguousarray(X, dtype=np.float64)
    yf = y.astype(np.float64)
    margins = np.zeros(X.shape[0], dtype=np.float64)
    trees = []
    for _ in range(rounds):
        p = sigmoid(margins)
        grad = p - yf
        hess = p * (1.0 - p)
        feat, thr, left, right, weight = kernels.grow_newton_tree(
            X, grad, hess, max_depth, lam
        )
        weight = weight * lr
        leaf = kernels.tree_leaf_ids(feat, thr, left, right, X)
        margins += weight[leaf]
        trees.append(
            {
                "feature": feat,
                "threshold": thr,
                "left": left,
                "right": right,
                "weight": weight,
            }
        )
    return {"trees": trees}


def margins_per_round(params: dict, X: np.ndarray) -> np.ndarray:
    """(rounds, n_rows) cumulative margins after each boosting round."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    out = np.empty((len(params["trees"]), X.shape[0]), dtype=np.float64)
    margins = np.zeros(X.shape[0], dtype=np.float64)
    for i, tree in enumerate(params["trees"]):
        leaf = kernels.tree_leaf_ids(
            tree["feature"], tree["threshold"], tree["left"], tree["right"], X
        )
        margins += tree["weight"][leaf]
        out[i] = margins
    return out


def score_boosting(params: dict, X: np.ndarray) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    margins = np.zeros(X.shape[0], dtype=np.float64)
    for tree in params["trees"]:
        leaf = kernels.tree_leaf_ids(
            tree["feature"], tree["threshold"], tree["left"], tree["right"], X
        )
        margins += tree["weight"][leaf]
    return sigmoid(margins)


register_family("xgb", fit_boosting, score_boosting)
