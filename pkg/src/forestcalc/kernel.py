"""Kernel selection: compiled integer elimination when available.

Importing this module picks the compiled kernel if it was built,
otherwise the pure Python twin.  Set FORESTCALC_PURE=1 to force the
fallback regardless.
"""

import os

from . import _intelim_py

if os.environ.get("FORESTCALC_PURE"):
    _impl = _intelim_py
else:
    try:
        from . import _intelim as _impl
    except ImportError:
        _impl = _intelim_py

IMPLEMENTATION = _impl.IMPLEMENTATION
sparse_elementary_divisors = _impl.sparse_elementary_divisors
normalize_divisor_chain = _impl.normalize_divisor_chain
