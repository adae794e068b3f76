"""Kernel selection: compiled extension when available, pure Python otherwise.

The choice is made once at import time. Set LLV_LAB_KERNEL=pure to force the
reference implementation, LLV_LAB_KERNEL=c to require the compiled one
(raising if it was not built).
"""

import os

_choice = os.environ.get("LLV_LAB_KERNEL", "auto")
if _choice not in ("auto", "c", "pure"):
    raise RuntimeError(f"LLV_LAB_KERNEL must be auto, c or pure, not {_choice!r}")

if _choice == "pure":
    from . import pyref as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "c":
            raise
        from . import pyref as _impl

BACKEND = _impl.BACKEND
row_combine = _impl.row_combine
vec_content = _impl.vec_content
vec_divexact = _impl.vec_divexact
dot = _impl.dot
mat_mul = _impl.mat_mul
mat_vec = _impl.mat_vec
