"""Kernel backend selection.

The compiled extension is used when importable; otherwise the numpy
fallback. Set FFQRAM_KERNELS=py to force the fallback, FFQRAM_KERNELS=cy
to require the extension (ImportError if it was not built).
"""

import os

from . import kernels_py

_choice = os.environ.get("FFQRAM_KERNELS", "auto").lower()

if _choice == "py":
    _impl = kernels_py
elif _choice == "cy":
    from . import _kernels as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = kernels_py

BACKEND = "compiled" if _impl is not kernels_py else "python"

apply_1q = _impl.apply_1q
apply_2q = _impl.apply_2q
apply_xor_mask = _impl.apply_xor_mask
prob_one = _impl.prob_one
prob_match = _impl.prob_match
inner = _impl.inner
