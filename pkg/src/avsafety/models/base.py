"""Common fit/predict contract for the five classifier families.

A trained model scores vectors in [0, 1] (the serious-incident side);
``predict`` maps score >= 0.5 to SERIOUS_INCIDENT, everything below to
INCIDENT. That single tie rule applies to every family and is the rule
the service documents.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..dataset import Dataset, Label
from ..errors import ModelError
from ..schema import as_feature_vector

FAMILIES = ("rfc", "xgb", "logr", "svm", "knn")

FAMILY_DISPLAY = {
    "rfc": "RFC",
    "xgb": "XGB",
    "logr": "Log R",
    "svm": "SVM",
    "knn": "KNN",
}

#: Tuning grids, in documented order. itertools.product over the listed
#: (name, values) pairs defines the grid-point order used for tie-breaks.
GRIDS: dict[str, tuple[tuple[str, tuple], ...]] = {
    "rfc": (("n_trees", (50, 100, 200)), ("max_depth", (4, 8, 16))),
    "xgb": (
        ("rounds", (50, 100)),
        ("learning_rate", (0.1, 0.3)),
        ("max_depth", (2, 3, 4)),
        ("reg_lambda", (1.0,)),
    ),
    "logr": (("l2", (0.001, 0.01, 0.1, 1.0)),),
    "svm": (("reg_lambda", (1e-4, 1e-3, 1e-2)),),
    "knn": (("k", (1, 3, 5, 7, 9)),),
}

# keys accepted by fit() beyond the tuned grid, with defaults
_EXTRA_KEYS: dict[str, dict[str, Any]] = {
    "rfc": {"bootstrap": 1},
    "xgb": {},
    "logr": {},
    "svm": {},
    "knn": {},
}

Hyperparams = dict


@dataclass(frozen=True)
class ModelSpec:
    family: str
    grid: tuple[tuple[str, tuple], ...] = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ModelError(
                f"unknown model family {self.family!r}, expected one of {FAMILIES}"
            )
        if not self.grid:
            object.__setattr__(self, "grid", GRIDS[self.family])


def default_spec(family: str) -> ModelSpec:
    return ModelSpec(family=family)


def grid_points(spec: ModelSpec) -> list[Hyperparams]:
    """All grid combinations in documented order."""
    names = [name for name, _ in spec.grid]
    value_lists = [values for _, values in spec.grid]
    return [dict(zip(names, combo)) for combo in itertools.product(*value_lists)]


def validate_hyperparams(family: str, hp: Hyperparams) -> Hyperparams:
    """Check keys and value sanity; fill defaults for missing keys.

    Values need not sit on the tuning grid (off-grid settings such as a
    single-tree forest are legal for fit), but every key must be a known
    parameter of the family.
    """
    if family not in FAMILIES:
        raise ModelError(f"unknown model family {family!r}")
    allowed = {name: values[0] for name, values in GRIDS[family]}
    allowed.update(_EXTRA_KEYS[family])
    unknown = set(hp) - set(allowed)
    if unknown:
        raise ModelError(
            f"unknown hyperparameter {sorted(unknown)[0]!r} for family {family!r}"
        )
    merged = {**allowed, **hp}
    _sanity_check(family, merged)
    return merged


def _sanity_check(family: str, hp: Hyperparams) -> None:
    def require(cond: bool, msg: str):
        if not cond:
            raise ModelError(f"bad hyperparameters for {family!r}: {msg}")

    if family == "rfc":
        require(int(hp["n_trees"]) >= 1, "n_trees must be >= 1")
        require(int(hp["max_depth"]) >= 0, "max_depth must be >= 0")
        require(hp["bootstrap"] in (0, 1), "bootstrap must be 0 or 1")
    elif family == "xgb":
        require(int(hp["rounds"]) >= 1, "rounds must be >= 1")
        require(0.0 < hp["learning_rate"] <= 1.0, "learning_rate must be in (0, 1]")
        require(int(hp["max_depth"]) >= 0, "max_depth must be >= 0")
        require(hp["reg_lambda"] >= 0.0, "reg_lambda must be >= 0")
    elif family == "logr":
        require(hp["l2"] >= 0.0, "l2 must be >= 0")
    elif family == "svm":
        require(hp["reg_lambda"] > 0.0, "reg_lambda must be > 0")
    elif family == "knn":
        require(int(hp["k"]) >= 1, "k must be >= 1")


@dataclass
class TrainedModel:
    """Fitted classifier plus the metadata needed to reuse it."""

    family: str
    hyperparams: Hyperparams
    params: dict
    schema_version: str
    trained_on: int
    seed: int

    @property
    def n_features(self) -> int:
        return int(self.params["n_features"])

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        """Serious-incident scores in [0, 1] for a batch of rows."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ModelError(
                f"input has shape {X.shape}, model expects (*, {self.n_features})"
            )
        return _scorer(self.family)(self.params, X)

    def predict_score(self, x) -> float:
        x = as_feature_vector(x, n_features=self.n_features)
        return float(self.predict_scores(x[None, :])[0])

    def predict(self, x) -> Label:
        return score_to_label(self.predict_score(x))

    def predict_labels(self, X: np.ndarray) -> list[Label]:
        return [score_to_label(s) for s in self.predict_scores(X)]


def score_to_label(score: float) -> Label:
    """score >= 0.5 means SERIOUS_INCIDENT (the documented tie rule)."""
    return Label.SERIOUS_INCIDENT if score >= 0.5 else Label.INCIDENT


def fit(
    spec: ModelSpec | str, hp: Hyperparams, train: Dataset, seed: int
) -> TrainedModel:
    """Fit one model family on a training set. Deterministic given seed.

    Raises:
        ModelError: empty training set, invalid hyperparameters, or a
            single-class training set for any family except KNN.
    """
    family = spec.family if isinstance(spec, ModelSpec) else spec
    hp = validate_hyperparams(family, hp)
    if len(train) == 0:
        raise ModelError("cannot fit on an empty training set")
    classes = np.unique(train.y)
    if family != "knn" and classes.size < 2:
        raise ModelError(
            f"family {family!r} needs both classes in the training set"
        )
    params = _fitter(family)(train.X, train.y, hp, seed)
    params["n_features"] = train.n_features
    return TrainedModel(
        family=family,
        hyperparams=hp,
        params=params,
        schema_version=train.schema_version,
        trained_on=len(train),
        seed=seed,
    )


def predict(m: TrainedModel, x) -> Label:
    return m.predict(x)


def predict_score(m: TrainedModel, x) -> float:
    return m.predict_score(x)


def gini_impurity(class_counts: tuple[int, int]) -> float:
    """Gini impurity 1 - sum(p_i^2) of a two-class count pair."""
    a, b = class_counts
    if a < 0 or b < 0:
        raise ModelError("class counts must be non-negative")
    total = a + b
    if total == 0:
        raise ModelError("gini impurity of an empty node is undefined")
    pa = a / total
    pb = b / total
    return 1.0 - (pa * pa + pb * pb)


_FITTERS: dict[str, Callable] = {}
_SCORERS: dict[str, Callable] = {}


def register_family(family: str, fitter: Callable, scorer: Callable) -> None:
    _FITTERS[family] = fitter
    _SCORERS[family] = scorer


def _fitter(family: str) -> Callable:
    _ensure_registered()
    return _FITTERS[family]


def _scorer(family: str) -> Callable:
    _ensure_registered()
    return _SCORERS[family]


def _ensure_registered() -> None:
    if not _FITTERS:
        from . import boosting, forest, knn, linear  # noqa: F401
