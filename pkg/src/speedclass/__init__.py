"""Vehicle-speed classification from recorded drive channels.

The package turns multi-channel drive recordings into a supervised
learning problem: road-context channels (speed limit, traffic flow,
traffic lights, signs, toll booths, curvature, slope) predict the vehicle
speed bucketed into fifteen 10 km/h classes.  It ships eight classifier
families implemented from first principles, a deterministic evaluation
pipeline (hold-out plus 5-fold cross-validation), a synthetic drive
generator for end-to-end testing, and a command-line interface.

Entry points:

* :mod:`speedclass.ingestion`    - CSV channel recordings and feature selection
* :mod:`speedclass.preprocess`   - standardization, speed discretization, splits
* :mod:`speedclass.classifiers`  - the eight classifier families
* :mod:`speedclass.evaluation`   - confusion matrices, metrics, reports
* :mod:`speedclass.synthgen`     - synthetic route/driver generator
* :mod:`speedclass.cli`          - the ``speedclass`` command
"""

from __future__ import annotations

from .errors import (
    CapabilityError,
    ConfigError,
    DegenerateDataError,
    FormatError,
    MissingChannelError,
    SchemaError,
    SpeedClassError,
)

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "ConfigError",
    "DegenerateDataError",
    "FormatError",
    "MissingChannelError",
    "SchemaError",
    "SpeedClassError",
    "__version__",
]
