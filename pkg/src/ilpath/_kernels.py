"""Kernel dispatch: compiled accelerators when usable, pure Python otherwise.

The compiled kernels work on int64, so they are only selected when every
intermediate value provably fits; anything wider falls back to the exact
pure-Python twins.  Set ``ILPATH_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from ilpath import _kernels_py

try:
    from ilpath import _speedups  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _speedups = None

REACHED = _kernels_py.REACHED
EXHAUSTED = _kernels_py.EXHAUSTED
BUDGET = _kernels_py.BUDGET

_INT64_SAFE = 2**62


def _force_pure() -> bool:
    return os.environ.get("ILPATH_PURE", "").strip().lower() in ("1", "true", "yes", "on")


def compiled_available() -> bool:
    return _speedups is not None


def backend_name() -> str:
    return "pure" if (_speedups is None or _force_pure()) else "compiled"


def _reach_fits_int64(columns, bvec, bounds, max_states) -> bool:
    if len(columns) >= 120 or max_states >= 2**31 - 2:
        return False  # the compiled kernel packs symbols in int8, indices in int32
    code_span = 2
    for b in bounds:
        code_span *= 2 * b + 1
        if code_span > _INT64_SAFE:
            return False
    deltas = [abs(v) for col in columns for v in col] + [abs(v) for v in bvec]
    peak = max(bounds, default=0) + max(deltas, default=0)
    return peak < _INT64_SAFE


def _enum_fits_int64(rows, bvec, box, max_nodes) -> bool:
    if max_nodes >= _INT64_SAFE:
        return False
    for row, b in zip(rows, bvec):
        reach = abs(b) + sum(abs(a) for a in row) * box
        if reach >= _INT64_SAFE:
            return False
    return True


def automaton_reach(columns, bvec, bounds, max_states):
    """See `_kernels_py.automaton_reach`; dispatches to the fast twin."""
    if (
        _speedups is not None
        and not _force_pure()
        and _reach_fits_int64(columns, bvec, bounds, max_states)
    ):
        return _speedups.automaton_reach(columns, bvec, bounds, max_states)
    return _kernels_py.automaton_reach(columns, bvec, bounds, max_states)


def enumerate_box(rows, bvec, box, max_nodes, first_only=False):
    """See `_kernels_py.enumerate_box`; dispatches to the fast twin."""
    if (
        _speedups is not None
        and not _force_pure()
        and _enum_fits_int64(rows, bvec, box, max_nodes)
    ):
        return _speedups.enumerate_box(rows, bvec, box, max_nodes, first_only)
    return _kernels_py.enumerate_box(rows, bvec, box, max_nodes, first_only)
