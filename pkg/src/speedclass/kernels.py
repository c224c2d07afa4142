"""Backend selection for the tree kernels.

The compiled extension is preferred when it imported successfully; the
pure-numpy module is the fallback.  Both produce bit-identical trees (the
parity tests enforce this), so selection only affects speed.  Set the
environment variable ``SPEEDCLASS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

if os.environ.get("SPEEDCLASS_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    KERNEL_BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        KERNEL_BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build environment
        from . import _kernels_py as _impl  # type: ignore[no-redef]

        KERNEL_BACKEND = "python"

grow_tree_classification = _impl.grow_tree_classification
grow_tree_regression = _impl.grow_tree_regression
apply_tree = _impl.apply_tree

__all__ = [
    "KERNEL_BACKEND",
    "apply_tree",
    "grow_tree_classification",
    "grow_tree_regression",
]
