"""Five classifier families behind one fit/predict contract."""

from .base import (  # noqa: F401
    FAMILIES,
    FAMILY_DISPLAY,
    GRIDS,
    Hyperparams,
    ModelSpec,
    TrainedModel,
    default_spec,
    fit,
    gini_impurity,
    grid_points,
    predict,
    predict_score,
    score_to_label,
    validate_hyperparams,
)
from .linear import logistic_loss_and_gradient  # noqa: F401
from .store import (  # noqa: F401
    canonical_bytes,
    load_model,
    model_version,
    save_model,
)
from .tune import tune  # noqa: F401

# importing the family modules registers their fitters/scorers
from . import boosting, forest, knn, linear  # noqa: F401, E402
