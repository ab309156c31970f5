"""K-nearest-neighbor classifier (Euclidean, majority vote).

The model stores its training matrix. For a query, neighbors are the k
training rows with smallest squared Euclidean distance; ties break toward
the lower training index. The score is the serious fraction among the k
votes, so even-k vote ties land on 0.5 and resolve to serious via the
global score rule.
"""

from __future__ import annotations

import numpy as np

from ..errors import ModelError
from .base import register_family


def fit_knn(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> dict:
    k = int(hp["k"])
    if k > X.shape[0]:
        raise ModelError(f"k={k} exceeds training size {X.shape[0]}")
    return {"k": k, "train_x": np.array(X, dtype=np.float64), "train_y": y.copy()}


def score_knn(params: dict, X: np.ndarray) -> np.ndarray:
    k = int(params["k"])
    ref = params["train_x"]
    ref_y = params["train_y"]
    n_ref = ref.shape[0]
    tiebreak = np.arange(n_ref)
    out = np.empty(X.shape[0], dtype=np.float64)
    for qi in range(X.shape[0]):
        d2 = np.sum((ref - X[qi]) ** 2, axis=1)
        order = np.lexsort((tiebreak, d2))
        out[qi] = float(np.sum(ref_y[order[:k]] == 1)) / k
    return out


register_family("knn", fit_knn, score_knn)
