"""Model file format: one JSON document per trained model.

Layout: {format_version, family, schema_version, hyperparams, params,
seed, trained_on}. Arrays are stored as (nested) lists; floats keep full
round-trip precision (Python's repr). Serialization is canonical (sorted
keys, fixed separators), so identical models produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from ..errors import ModelError
from .base import FAMILIES, TrainedModel, validate_hyperparams

FORMAT_VERSION = 1

_TREE_INT_KEYS = ("feature", "left", "right", "count_incident", "count_serious")
_TREE_FLOAT_KEYS = ("threshold", "weight")


def model_document(model: TrainedModel) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "family": model.family,
        "schema_version": model.schema_version,
        "hyperparams": model.hyperparams,
        "params": _params_to_plain(model.params),
        "seed": model.seed,
        "trained_on": model.trained_on,
    }


def canonical_bytes(model: TrainedModel) -> bytes:
    doc = model_document(model)
    return (json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n").encode(
        "utf-8"
    )


def model_version(model: TrainedModel) -> str:
    """Short content hash identifying the trained model."""
    return hashlib.sha256(canonical_bytes(model)).hexdigest()[:12]


def save_model(model: TrainedModel, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(canonical_bytes(model))


def load_model(path: str) -> TrainedModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ModelError(f"cannot read model file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise ModelError(
            f"unsupported model file (expected format_version {FORMAT_VERSION})"
        )
    family = doc.get("family")
    if family not in FAMILIES:
        raise ModelError(f"unknown model family {family!r} in model file")
    hp = validate_hyperparams(family, doc.get("hyperparams", {}))
    try:
        params = _params_from_plain(family, doc["params"])
        return TrainedModel(
            family=family,
            hyperparams=hp,
            params=params,
            schema_version=str(doc["schema_version"]),
            trained_on=int(doc["trained_on"]),
            seed=int(doc["seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model file is missing or corrupts fields: {exc}") from exc


def _params_to_plain(params: dict) -> dict:
    out = {}
    for key, val in params.items():
        if key == "trees":
            out[key] = [
                {k: np.asarray(v).tolist() for k, v in tree.items()} for tree in val
            ]
        elif isinstance(val, np.ndarray):
            out[key] = val.tolist()
        elif isinstance(val, (np.integer, np.floating)):
            out[key] = val.item()
        else:
            out[key] = val
    return out


def _params_from_plain(family: str, plain: dict) -> dict:
    params = dict(plain)
    params["n_features"] = int(params["n_features"])
    if family in ("rfc", "xgb"):
        trees = []
        for tree in params["trees"]:
            rebuilt = {}
            for key, val in tree.items():
                if key in _TREE_INT_KEYS:
                    rebuilt[key] = np.asarray(val, dtype=np.int64)
                elif key in _TREE_FLOAT_KEYS:
                    rebuilt[key] = np.asarray(val, dtype=np.float64)
                else:
                    raise ModelError(f"unexpected tree field {key!r}")
            trees.append(rebuilt)
        params["trees"] = trees
    elif family in ("logr", "svm"):
        params["weights"] = np.asarray(params["weights"], dtype=np.float64)
    elif family == "knn":
        params["k"] = int(params["k"])
        params["train_x"] = np.asarray(params["train_x"], dtype=np.float64)
        params["train_y"] = np.asarray(params["train_y"], dtype=np.uint8)
    return params
