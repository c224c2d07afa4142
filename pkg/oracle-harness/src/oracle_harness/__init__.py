"""Golden-fixture generator backed by a pinned reference toolkit.

Builds small, frozen classification datasets, computes metrics and
predictions with scikit-learn at an exact pinned version, and writes the
results as self-contained JSON fixtures plus a content-hash manifest.
The fixtures feed cross-implementation parity tests in a consumer test
suite; this package is a build-time tool, never a runtime dependency.
"""

from .build import (
    FIXTURE_FORMAT,
    MANIFEST_FORMAT,
    PINNED_TOOLKIT_VERSION,
    ToolkitVersionError,
    build_fixtures,
)
from .datasets import FrozenDataset, frozen_datasets

__all__ = [
    "FIXTURE_FORMAT",
    "MANIFEST_FORMAT",
    "PINNED_TOOLKIT_VERSION",
    "FrozenDataset",
    "ToolkitVersionError",
    "build_fixtures",
    "frozen_datasets",
]

__version__ = "1.0.0"
