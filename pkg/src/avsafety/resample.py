"""SMOTE over-sampling of the minority class.

Applied to training data only; the experiment runner enforces that test
records are never touched. Synthetic samples interpolate between a
minority record and one of its k nearest minority neighbors:

    s = x + g * (n - x),  one g ~ U[0, 1) per synthetic, all coordinates.

Parents are drawn by cycling through the minority records in shuffled
order so generation spreads as evenly as possible. Enough synthetics are
generated to bring the minority count up to the majority count exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, Label, LabeledRecord, class_counts
from .errors import DataError
from .rng import SplitMix64


@dataclass(frozen=True)
class SmoteConfig:
    k: int
    seed: int

    def __post_init__(self):
        if self.k < 1:
            raise DataError(f"smote k must be >= 1, got {self.k}")


def k_nearest_minority(
    x: np.ndarray,
    minority: list[np.ndarray] | np.ndarray,
    k: int,
    self_index: int | None = None,
) -> list[int]:
    """Indices of the k nearest minority vectors to x (Euclidean).

    Ties break toward the lower index. x itself is excluded: pass
    ``self_index`` when x is a member of ``minority``; otherwise the first
    exact-equal vector, if any, is skipped.
    """
    pts = np.asarray(minority, dtype=np.float64)
    n = pts.shape[0]
    if self_index is None:
        matches = np.nonzero(np.all(pts == np.asarray(x), axis=1))[0]
        self_index = int(matches[0]) if len(matches) else -1
    avail = n - (1 if 0 <= self_index < n else 0)
    if not 1 <= k <= avail:
        raise DataError(f"k={k} out of range for {avail} candidate neighbors")
    d2 = np.sum((pts - np.asarray(x)) ** 2, axis=1)
    order = np.lexsort((np.arange(n), d2))
    picked = [int(i) for i in order if i != self_index][:k]
    return picked


def smote(train: Dataset, cfg: SmoteConfig) -> Dataset:
    """Balance the training set by synthesizing minority records.

    Returns the original records (bit-identical) followed by synthetics
    whose record_ids carry a ``synthetic:`` prefix. A perfectly balanced
    input is returned unchanged. Deterministic given (train, cfg).

    Raises:
        DataError: fewer than two classes, or minority count <= k.
    """
    n_inc, n_ser = class_counts(train)
    if n_inc == 0 or n_ser == 0:
        raise DataError("smote needs both classes present in the training set")
    if n_inc == n_ser:
        return train

    minority_label = Label.SERIOUS_INCIDENT if n_ser < n_inc else Label.INCIDENT
    need = abs(n_inc - n_ser)
    minority_pos = [
        i for i, r in enumerate(train.records) if r.label is minority_label
    ]
    m = len(minority_pos)
    if m <= cfg.k:
        raise DataError(
            f"minority count {m} must exceed k={cfg.k} for neighbor search"
        )

    pts = train.X[minority_pos]
    neighbor_table = [
        k_nearest_minority(pts[i], pts, cfg.k, self_index=i) for i in range(m)
    ]

    rng = SplitMix64(cfg.seed)
    parent_order = list(range(m))
    rng.shuffle(parent_order)

    synthetics: list[LabeledRecord] = []
    for s_idx in range(need):
        pi = parent_order[s_idx % m]
        parent = pts[pi]
        neighbor = pts[neighbor_table[pi][rng.next_below(cfg.k)]]
        gap = rng.next_float()
        synth = parent + gap * (neighbor - parent)
        # guard float overshoot so each coordinate stays inside the
        # closed parent..neighbor interval
        lo = np.minimum(parent, neighbor)
        hi = np.maximum(parent, neighbor)
        synth = np.clip(synth, lo, hi)
        parent_id = train.records[minority_pos[pi]].record_id
        synthetics.append(
            LabeledRecord(
                record_id=f"synthetic:{parent_id}:{s_idx}",
                features=synth,
                label=minority_label,
            )
        )

    return Dataset(list(train.records) + synthetics, train.schema_version)
