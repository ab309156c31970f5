"""Exception types shared across the package."""


class AvSafetyError(Exception):
    """Base class for all validation and processing errors."""


class SchemaError(AvSafetyError):
    """Schema document is malformed or violates schema invariants."""


class DataError(AvSafetyError):
    """Dataset content is invalid (bad cell, bad label, bad shape)."""


class ModelError(AvSafetyError):
    """Model construction, hyperparameters, or model file is invalid."""


class ConfigError(AvSafetyError):
    """Experiment or service configuration is invalid."""


class ExperimentError(AvSafetyError):
    """A benchmark stage failed; the message carries run index and stage."""
