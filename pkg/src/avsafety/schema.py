"""Occurrence feature schema: 17 data classes, 61 binary features.

The canonical schema document ships with the package
(``data/occurrence_schema.json``). Vector layout is fixed by document
order: classes in listed order, features within a class in listed order,
zero-based. Index ``i`` always maps to the same feature for a given schema
version.

Note the schema intentionally contains two distinct "Fuel System" features
(ids ``fuel_system`` and ``fire_related_fuel_system``): one under aircraft
systems, one under fire/smoke/odour. They are separate signals and both
count toward the 61-feature total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

import numpy as np

from .errors import SchemaError

EXPECTED_CLASS_COUNT = 17
EXPECTED_FEATURE_COUNT = 61

#: A feature vector is a float64 array of shape (n_features,) with every
#: value finite and in [0, 1]. Raw encodings are 0/1; SMOTE synthetics may
#: be fractional.
FeatureVector = np.ndarray


@dataclass(frozen=True)
class FeatureDef:
    id: str
    display_name: str
    vector_index: int


@dataclass(frozen=True)
class DataClass:
    id: str
    display_name: str
    features: tuple[FeatureDef, ...]


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered catalog of data classes; single source of truth for layout."""

    version: str
    classes: tuple[DataClass, ...]

    def __post_init__(self):
        if len(self.classes) != EXPECTED_CLASS_COUNT:
            raise SchemaError(
                f"class count {len(self.classes)} != {EXPECTED_CLASS_COUNT}"
            )
        feats = self.features
        if len(feats) != EXPECTED_FEATURE_COUNT:
            raise SchemaError(
                f"feature count {len(feats)} != {EXPECTED_FEATURE_COUNT}"
            )
        seen: set[str] = set()
        for cls in self.classes:
            if not cls.features:
                raise SchemaError(f"data class {cls.id!r} has no features")
            if cls.id in seen:
                raise SchemaError(f"duplicate id {cls.id!r}")
            seen.add(cls.id)
        for feat in feats:
            if feat.id in seen:
                raise SchemaError(f"duplicate id {feat.id!r}")
            seen.add(feat.id)
        indices = [f.vector_index for f in feats]
        if indices != list(range(EXPECTED_FEATURE_COUNT)):
            raise SchemaError("vector indices are not 0..60 in document order")

    @property
    def features(self) -> tuple[FeatureDef, ...]:
        return tuple(f for cls in self.classes for f in cls.features)

    @property
    def feature_ids(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.features)

    def feature_by_id(self, feature_id: str) -> FeatureDef:
        try:
            return self._by_id()[feature_id]
        except KeyError:
            raise SchemaError(f"unknown feature id {feature_id!r}") from None

    def _by_id(self) -> dict[str, FeatureDef]:
        # cached on first use; the instance is frozen so this is safe
        cache = getattr(self, "_id_cache", None)
        if cache is None:
            cache = {f.id: f for f in self.features}
            object.__setattr__(self, "_id_cache", cache)
        return cache

    def to_document(self) -> dict:
        """Plain-dict form matching the on-disk schema document."""
        return {
            "version": self.version,
            "classes": [
                {
                    "id": cls.id,
                    "display_name": cls.display_name,
                    "features": [
                        {"id": f.id, "display_name": f.display_name}
                        for f in cls.features
                    ],
                }
                for cls in self.classes
            ],
        }


def load_schema(source: str | dict | None = None) -> FeatureSchema:
    """Load and validate a schema document.

    Args:
        source: path to a JSON schema document, an already-parsed dict, or
            None for the bundled canonical schema.

    Raises:
        SchemaError: malformed document, wrong class/feature counts, or a
            duplicate id (the message names the offending id).
    """
    if source is None:
        raw = resources.files("avsafety.data").joinpath(
            "occurrence_schema.json"
        ).read_text("utf-8")
        doc = json.loads(raw)
    elif isinstance(source, dict):
        doc = source
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise SchemaError(f"cannot read schema document: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"schema document is not valid JSON: {exc}") from exc

    if not isinstance(doc, dict):
        raise SchemaError("schema document must be an object")
    version = doc.get("version")
    if not isinstance(version, str) or not version:
        raise SchemaError("schema document needs a non-empty 'version' string")
    raw_classes = doc.get("classes")
    if not isinstance(raw_classes, list):
        raise SchemaError("schema document needs a 'classes' list")

    classes: list[DataClass] = []
    index = 0
    for ci, raw_cls in enumerate(raw_classes):
        cid = _require_str(raw_cls, "id", f"classes[{ci}]")
        cname = _require_str(raw_cls, "display_name", f"classes[{ci}]")
        raw_feats = raw_cls.get("features")
        if not isinstance(raw_feats, list) or not raw_feats:
            raise SchemaError(f"data class {cid!r} needs a non-empty 'features' list")
        feats = []
        for fi, raw_feat in enumerate(raw_feats):
            fid = _require_str(raw_feat, "id", f"classes[{ci}].features[{fi}]")
            fname = _require_str(
                raw_feat, "display_name", f"classes[{ci}].features[{fi}]"
            )
            feats.append(FeatureDef(id=fid, display_name=fname, vector_index=index))
            index += 1
        classes.append(DataClass(id=cid, display_name=cname, features=tuple(feats)))

    return FeatureSchema(version=version, classes=tuple(classes))


def _require_str(obj, key: str, where: str) -> str:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be an object")
    val = obj.get(key)
    if not isinstance(val, str) or not val:
        raise SchemaError(f"{where} needs a non-empty {key!r} string")
    return val


def encode(schema: FeatureSchema, selected: Iterable[str]) -> FeatureVector:
    """Encode a set of selected feature ids as a 0/1 vector.

    Raises:
        SchemaError: a selected id is not in the schema (names the id).
    """
    vec = np.zeros(EXPECTED_FEATURE_COUNT, dtype=np.float64)
    for fid in selected:
        vec[schema.feature_by_id(fid).vector_index] = 1.0
    return vec


def decode(
    schema: FeatureSchema, v: FeatureVector, threshold: float = 0.5
) -> set[str]:
    """Feature ids whose value is >= threshold. Inverse of encode on 0/1 vectors."""
    v = as_feature_vector(v)
    return {f.id for f in schema.features if v[f.vector_index] >= threshold}


def as_feature_vector(values, n_features: int = EXPECTED_FEATURE_COUNT) -> FeatureVector:
    """Validate values as a feature vector and return it as float64.

    Raises:
        SchemaError: wrong length, non-finite, or outside [0, 1].
    """
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != n_features:
        raise SchemaError(
            f"feature vector has shape {vec.shape}, expected ({n_features},)"
        )
    if not np.all(np.isfinite(vec)):
        raise SchemaError("feature vector contains non-finite values")
    if np.any(vec < 0.0) or np.any(vec > 1.0):
        raise SchemaError("feature vector values must lie in [0, 1]")
    return vec
