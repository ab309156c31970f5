"""Hyperparameter search: exhaustive grid, stratified 3-fold CV.

The winner maximizes mean fold accuracy; ties break on higher mean fold
MCC, then on grid order. Folds are fixed before the search (per-class
shuffle, round-robin assignment), so every grid point sees the same
folds and the whole search is deterministic given the seed.
"""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset, Label
from ..errors import ModelError
from ..metrics import confusion, metric_sample
from ..rng import SplitMix64, derive_seed
from .base import Hyperparams, ModelSpec, fit, grid_points

N_FOLDS = 3
MIN_PER_CLASS = 10


def fold_assignments(d: Dataset, seed: int, n_folds: int = N_FOLDS) -> np.ndarray:
    """Fold index per record: per-class Fisher-Yates shuffle, then deal
    round-robin (incident class first, one shared generator)."""
    rng = SplitMix64(seed)
    folds = np.empty(len(d), dtype=np.int64)
    for label in (Label.INCIDENT, Label.SERIOUS_INCIDENT):
        positions = [i for i, r in enumerate(d.records) if r.label is label]
        rng.shuffle(positions)
        for slot, pos in enumerate(positions):
            folds[pos] = slot % n_folds
    return folds


def tune(spec: ModelSpec | str, train: Dataset, seed: int) -> Hyperparams:
    """Best grid point for the family under 3-fold CV on the training set.

    Raises:
        ModelError: fewer than 10 records in either class.
    """
    if isinstance(spec, str):
        spec = ModelSpec(family=spec)
    n_ser = int(np.sum(train.y == 1))
    n_inc = len(train) - n_ser
    if min(n_inc, n_ser) < MIN_PER_CLASS:
        raise ModelError(
            f"tuning needs >= {MIN_PER_CLASS} records per class, "
            f"got incident={n_inc}, serious={n_ser}"
        )

    folds = fold_assignments(train, derive_seed(seed, 0))
    splits = []
    for f in range(N_FOLDS):
        holdout = np.nonzero(folds == f)[0]
        rest = np.nonzero(folds != f)[0]
        splits.append((train.subset(rest), train.subset(holdout)))

    best_hp = None
    best_acc = -1.0
    best_mcc = -2.0
    for gi, hp in enumerate(grid_points(spec)):
        accs = []
        mccs = []
        for fi, (fit_part, hold_part) in enumerate(splits):
            model = fit(spec, hp, fit_part, seed=derive_seed(seed, 1, gi, fi))
            pred = model.predict_labels(hold_part.X)
            sample = metric_sample(
                confusion([r.label for r in hold_part.records], pred)
            )
            accs.append(sample.accuracy)
            mccs.append(sample.mcc)
        mean_acc = float(np.mean(accs))
        mean_mcc = float(np.mean(mccs))
        if mean_acc > best_acc or (mean_acc == best_acc and mean_mcc > best_mcc):
            best_hp, best_acc, best_mcc = hp, mean_acc, mean_mcc
    assert best_hp is not None
    return best_hp
