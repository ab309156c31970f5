"""Labeled occurrence records, CSV loading, and seeded stratified splits."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .rng import SplitMix64
from .schema import FeatureSchema, as_feature_vector


class Label(enum.Enum):
    """Binary occurrence classification.

    SERIOUS_INCIDENT is the positive class for confusion-matrix purposes.
    """

    INCIDENT = "incident"
    SERIOUS_INCIDENT = "serious_incident"

    @classmethod
    def from_wire(cls, value: str) -> "Label":
        for lab in cls:
            if lab.value == value:
                return lab
        raise DataError(
            f"bad label {value!r}: expected 'incident' or 'serious_incident'"
        )


@dataclass(frozen=True)
class LabeledRecord:
    record_id: str
    features: np.ndarray
    label: Label


class Dataset:
    """Immutable ordered collection of labeled records.

    All records share one schema version and one feature dimension. The
    float matrix and 0/1 label array (1 = serious incident) are built once
    at construction for the model code.
    """

    def __init__(self, records: Sequence[LabeledRecord], schema_version: str):
        records = tuple(records)
        if records:
            width = records[0].features.shape[0]
            for rec in records:
                as_feature_vector(rec.features, n_features=width)
            seen: set[str] = set()
            for rec in records:
                if rec.record_id in seen:
                    raise DataError(f"duplicate record_id {rec.record_id!r}")
                seen.add(rec.record_id)
        else:
            width = 0
        self.records = records
        self.schema_version = schema_version
        self.n_features = width
        self.X = (
            np.stack([r.features for r in records]).astype(np.float64)
            if records
            else np.zeros((0, 0))
        )
        self.y = np.array(
            [1 if r.label is Label.SERIOUS_INCIDENT else 0 for r in records],
            dtype=np.uint8,
        )

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def record_ids(self) -> tuple[str, ...]:
        return tuple(r.record_id for r in self.records)

    def subset(self, indices: Iterable[int]) -> "Dataset":
        return Dataset([self.records[i] for i in indices], self.schema_version)


@dataclass(frozen=True)
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int
    ratio: float


def load_dataset(source, schema: FeatureSchema) -> Dataset:
    """Load a CSV dataset and validate it against the schema.

    The header must contain each schema feature id exactly once plus
    ``label`` (and optionally ``record_id``), in any column order. Feature
    cells must parse as numbers in [0, 1]; labels must be ``incident`` or
    ``serious_incident``. Errors report the file line and column name.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        try:
            with open(source, "r", encoding="utf-8", newline="") as fh:
                return _parse_csv(fh, schema)
        except OSError as exc:
            raise DataError(f"cannot read dataset: {exc}") from exc
    if isinstance(source, io.TextIOBase):
        return _parse_csv(source, schema)
    raise DataError(f"unsupported dataset source {type(source).__name__}")


def _parse_csv(fh, schema: FeatureSchema) -> Dataset:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty dataset: no header row") from None

    expected = set(schema.feature_ids)
    seen: set[str] = set()
    for col in header:
        if col in seen:
            raise DataError(f"duplicate column {col!r}")
        seen.add(col)
        if col not in expected and col not in ("label", "record_id"):
            raise DataError(f"unknown column {col!r}")
    missing = expected - seen
    if missing:
        raise DataError(f"missing feature column {sorted(missing)[0]!r}")
    if "label" not in seen:
        raise DataError("missing 'label' column")

    col_of = {name: i for i, name in enumerate(header)}
    feat_cols = [col_of[fid] for fid in schema.feature_ids]
    label_col = col_of["label"]
    id_col = col_of.get("record_id")

    records: list[LabeledRecord] = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataError(
                f"line {line_no}: {len(row)} cells, header has {len(header)}"
            )
        values = np.empty(len(feat_cols), dtype=np.float64)
        for k, ci in enumerate(feat_cols):
            cell = row[ci]
            try:
                val = float(cell)
            except ValueError:
                raise DataError(
                    f"line {line_no}, column {header[ci]!r}: "
                    f"non-numeric value {cell!r}"
                ) from None
            if not np.isfinite(val) or val < 0.0 or val > 1.0:
                raise DataError(
                    f"line {line_no}, column {header[ci]!r}: "
                    f"value {cell!r} outside [0, 1]"
                )
            values[k] = val
        raw_label = row[label_col]
        try:
            label = Label.from_wire(raw_label)
        except DataError as exc:
            raise DataError(f"line {line_no}: {exc}") from None
        rec_id = row[id_col] if id_col is not None else f"row{line_no - 1}"
        records.append(LabeledRecord(rec_id, values, label))

    if not records:
        raise DataError("empty dataset: header only")
    return Dataset(records, schema.version)


def save_dataset(d: Dataset, schema: FeatureSchema, path: str) -> None:
    """Write a dataset in the CSV format accepted by load_dataset."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(schema.feature_ids) + ["label", "record_id"])
        for rec in d.records:
            cells = [_format_value(v) for v in rec.features]
            writer.writerow(cells + [rec.label.value, rec.record_id])


def _format_value(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return repr(float(v))


def class_counts(d: Dataset) -> tuple[int, int]:
    """(n_incident, n_serious) record counts."""
    n_serious = int(np.sum(d.y == 1)) if len(d) else 0
    return len(d) - n_serious, n_serious


def stratified_split(d: Dataset, ratio: float, seed: int) -> SplitPair:
    """Seeded stratified train/test split.

    Per class, round-half-up(ratio * class size) records go to train; the
    rest to test. Membership is decided by Fisher-Yates-shuffling each
    class's record positions (incident class first, then serious, one
    shared generator), so identical (dataset, ratio, seed) give identical
    splits. Output order preserves dataset order.
    """
    _check_ratio(ratio)
    by_class = _positions_by_class(d)
    for label, positions in by_class:
        if len(positions) < 2:
            raise DataError(
                f"class {label.value!r} has {len(positions)} records, need >= 2"
            )
    rng = SplitMix64(seed)
    train_pos: set[int] = set()
    for _, positions in by_class:
        positions = list(positions)
        rng.shuffle(positions)
        n_train = _round_half_up(ratio * len(positions))
        train_pos.update(positions[:n_train])
    return _assemble(d, train_pos, ratio, seed)


def random_split(d: Dataset, ratio: float, seed: int) -> SplitPair:
    """Non-stratified variant of stratified_split (sensitivity checks)."""
    _check_ratio(ratio)
    if len(d) < 2:
        raise DataError(f"dataset has {len(d)} records, need >= 2")
    rng = SplitMix64(seed)
    positions = list(range(len(d)))
    rng.shuffle(positions)
    n_train = _round_half_up(ratio * len(d))
    return _assemble(d, set(positions[:n_train]), ratio, seed)


def _check_ratio(ratio: float) -> None:
    if not 0.0 < ratio < 1.0:
        raise DataError(f"split ratio must be in (0, 1), got {ratio}")


def _positions_by_class(d: Dataset) -> list[tuple[Label, list[int]]]:
    return [
        (label, [i for i, r in enumerate(d.records) if r.label is label])
        for label in (Label.INCIDENT, Label.SERIOUS_INCIDENT)
    ]


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _assemble(d: Dataset, train_pos: set[int], ratio: float, seed: int) -> SplitPair:
    train = d.subset([i for i in range(len(d)) if i in train_pos])
    test = d.subset([i for i in range(len(d)) if i not in train_pos])
    return SplitPair(train=train, test=test, seed=seed, ratio=ratio)
