"""Exception types shared across the toolkit.

All errors raised for bad data or bad configuration derive from
``SpeedClassError`` so callers (notably the CLI) can map them onto the
documented exit codes: usage/config problems exit 2, data/model problems
exit 3.
"""


class SpeedClassError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(SpeedClassError):
    """A document or CSV header does not match the expected schema."""


class FormatError(SpeedClassError):
    """A file is structurally broken (ragged rows, unparseable cells)."""


class MissingChannelError(SpeedClassError):
    """A required recording channel is absent."""


class ConfigError(SpeedClassError):
    """Invalid configuration: unknown algorithm, bad hyperparameter, ..."""


class DegenerateDataError(SpeedClassError):
    """Training data cannot support the requested algorithm
    (e.g. a single class for a discriminative objective)."""


class CapabilityError(SpeedClassError):
    """The model family does not support the requested operation."""
