"""Exact arithmetic in Q_p; see ``_padic`` for the implementation.

The same source is also built as the extension ``_padic_c``.  It is used
when importable, unless ``AQCSTAB_PURE=1`` forces plain Python.
"""

import os

from . import _padic

if os.environ.get("AQCSTAB_PURE") == "1":
    _impl = _padic
else:
    try:
        from . import _padic_c as _impl
    except ImportError:
        _impl = _padic

COMPILED = _impl is not _padic

INF = _impl.INF
DEFAULT_PREC = _impl.DEFAULT_PREC
NormVal = _impl.NormVal
PAdic = _impl.PAdic
is_prime = _impl.is_prime
vp = _impl.vp
from_rational = _impl.from_rational
from_fraction = _impl.from_fraction
add = _impl.add
sub = _impl.sub
mul = _impl.mul
div = _impl.div
norm = _impl.norm
_embed = _impl._embed

__all__ = [
    "COMPILED", "INF", "DEFAULT_PREC", "NormVal", "PAdic", "is_prime", "vp",
    "from_rational", "from_fraction", "add", "sub", "mul", "div", "norm",
]
