"""Backend selection for the per-cell hot kernels.

The compiled extension is preferred when it imported cleanly; the pure
NumPy fallback returns the same answers up to summation-order roundoff.  Set ``HERMKIN_PURE_PY=1`` to force the
fallback (used by the benchmark to compare both).
"""

from __future__ import annotations

import os

if os.environ.get("HERMKIN_PURE_PY"):
    from ._kernels_py import BACKEND, change_frame_core, quadratic_contract
else:
    try:
        from ._kernels import BACKEND, change_frame_core, quadratic_contract
    except ImportError:
        from ._kernels_py import BACKEND, change_frame_core, quadratic_contract

__all__ = ["BACKEND", "change_frame_core", "quadratic_contract"]
