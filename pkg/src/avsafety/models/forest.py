"""Random forest of CART trees (Gini impurity, majority vote).

Each tree trains on a bootstrap sample the size of the training set and
considers ceil(sqrt(n_features)) features per split. The forest score is
the fraction of trees voting serious; a tree votes serious when its leaf
holds strictly more serious than incident records (leaf ties vote
incident, the majority class).
"""

from __future__ import annotations

import math

import numpy as np

from ..rng import SplitMix64
from . import kernels
from .base import register_family


def fit_forest(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> dict:
    n_trees = int(hp["n_trees"])
    max_depth = int(hp["max_depth"])
    bootstrap = int(hp["bootstrap"])
    mtry = math.isqrt(X.shape[1])
    if mtry * mtry < X.shape[1]:
        mtry += 1

    rng = SplitMix64(seed)
    tree_seeds = [rng.next_u64() for _ in range(n_trees)]
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.uint8)
    trees = []
    for ts in tree_seeds:
        feat, thr, left, right, c_inc, c_ser = kernels.grow_gini_tree(
            X, y, max_depth, mtry, np.uint64(ts), bootstrap
        )
        trees.append(
            {
                "feature": feat,
                "threshold": thr,
                "left": left,
                "right": right,
                "count_incident": c_inc,
                "count_serious": c_ser,
            }
        )
    return {"trees": trees}


def tree_votes(tree: dict, X: np.ndarray) -> np.ndarray:
    """Per-row vote of a single tree: 1 votes serious, 0 votes incident."""
    leaf = kernels.tree_leaf_ids(
        tree["feature"], tree["threshold"], tree["left"], tree["right"],
        np.ascontiguousarray(X, dtype=np.float64),
    )
    return (tree["count_serious"][leaf] > tree["count_incident"][leaf]).astype(
        np.float64
    )


def score_forest(params: dict, X: np.ndarray) -> np.ndarray:
    trees = params["trees"]
    votes = np.zeros(X.shape[0], dtype=np.float64)
    for tree in trees:
        votes += tree_votes(tree, X)
    return votes / len(trees)


register_family("rfc", fit_forest, score_forest)
