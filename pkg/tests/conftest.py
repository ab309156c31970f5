import numpy as np
import pytest

from avsafety.dataset import Dataset, LabeledRecord, Label
from avsafety.experiment import generate_synthetic_dataset
from avsafety.schema import load_schema


@pytest.fixture(scope="session")
def schema():
    return load_schema()


@pytest.fixture(scope="session")
def synth475(schema):
    """Planted-rule stand-in for the real 475-event dataset (15% noise)."""
    return generate_synthetic_dataset(475, 0.6, 0.15, seed=7, schema=schema)


@pytest.fixture(scope="session")
def synth_noise0(schema):
    return generate_synthetic_dataset(475, 0.6, 0.0, seed=7, schema=schema)


def make_dataset(vectors, labels, schema_version="test", prefix="r"):
    """Build a Dataset from raw vectors and 0/1 labels."""
    records = [
        LabeledRecord(
            f"{prefix}{i}",
            np.asarray(v, dtype=np.float64),
            Label.SERIOUS_INCIDENT if y else Label.INCIDENT,
        )
        for i, (v, y) in enumerate(zip(vectors, labels))
    ]
    return Dataset(records, schema_version)


def random_binary_dataset(rng, n, dim=61, serious_rate=0.4, schema_version="test"):
    """Random 0/1 dataset from a numpy Generator (test-side randomness)."""
    X = (rng.random((n, dim)) < 0.25).astype(np.float64)
    y = (rng.random(n) < serious_rate).astype(int)
    return make_dataset(X, y, schema_version=schema_version)
