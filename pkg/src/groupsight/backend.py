"""Kernel backend selection.

The compiled `_kernel` extension is preferred when built; the pure-Python
`_kernel_py` module is the drop-in fallback. Set GROUPSIGHT_PURE=1 to
force the fallback (used by the backend benchmark and tests). Both
backends are required to return identical answers for identical inputs,
so everything downstream is backend-agnostic.
"""

from __future__ import annotations

import os

_force_pure = os.environ.get("GROUPSIGHT_PURE", "") not in ("", "0")

if _force_pure:
    from ._kernel_py import FamilyIndex

    BACKEND = "pure"
else:
    try:
        from ._kernel import FamilyIndex  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from ._kernel_py import FamilyIndex  # type: ignore[no-redef]

        BACKEND = "pure"


def active_backend() -> str:
    """Name of the kernel backend in use: "compiled" or "pure"."""
    return BACKEND


__all__ = ["FamilyIndex", "active_backend", "BACKEND"]
