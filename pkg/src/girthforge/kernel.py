"""Kernel selection: compiled extension when available, Python otherwise.

The compiled kernel (:mod:`girthforge._cykernel`, built from Cython) and
the pure-Python kernel (:mod:`girthforge._pykernel`) expose identical
functions and produce identical results; only speed differs.  Set
``GIRTHFORGE_KERNEL=python`` or ``GIRTHFORGE_KERNEL=compiled`` to force a
choice at import time (the latter raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _pykernel

_forced = os.environ.get("GIRTHFORGE_KERNEL", "").strip().lower()

if _forced == "python":
    _impl = _pykernel
elif _forced == "compiled":
    from . import _cykernel as _impl  # raises ImportError when not built
else:
    try:
        from . import _cykernel as _impl
    except ImportError:
        _impl = _pykernel

BACKEND: str = _impl.BACKEND

count_cycles = _impl.count_cycles
girth_upper = _impl.girth_upper
cost_tables = _impl.cost_tables
gallager_b = _impl.gallager_b

__all__ = ["BACKEND", "count_cycles", "girth_upper", "cost_tables", "gallager_b"]
