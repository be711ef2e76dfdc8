"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``AQCSTAB_PURE=1`` to force the fallback here and in ``padic`` (used by the benchmark and the
parity tests).
"""

import os

from . import _kernels_py

if os.environ.get("AQCSTAB_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

COMPILED = _impl is not _kernels_py
BACKEND = "cython" if COMPILED else "python"

ppow = _impl.ppow
split = _impl.split
normalize = _impl.normalize
add = _impl.add
neg = _impl.neg
mul = _impl.mul
div = _impl.div
from_fraction = _impl.from_fraction
from_fraction_rel = _impl.from_fraction_rel
mix64 = _impl.mix64

__all__ = [
    "BACKEND", "COMPILED", "ppow", "split", "normalize", "add", "neg", "mul",
    "div", "from_fraction", "from_fraction_rel", "mix64",
]
