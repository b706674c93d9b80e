"""Lattice-scan kernels with compiled/pure-Python backend selection.

The compiled extension is used when it was built and every input fits
comfortably in int64; otherwise the pure-Python reference runs.  Set
``KSTAB_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

try:
    if os.environ.get("KSTAB_PURE_PYTHON"):
        raise ImportError("pure python forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_LIMIT = 1 << 40


def _fits(*mats, lo=(), hi=()) -> bool:
    box = max([abs(v) for v in list(lo) + list(hi)] + [1])
    for mat in mats:
        for row in mat:
            if isinstance(row, (list, tuple)):
                if any(abs(v) * box * (len(row) + 1) > _LIMIT for v in row):
                    return False
            elif abs(row) > _LIMIT:
                return False
    return True


def _pick(A, b, lo, hi, *extra):
    if _compiled is not None and _fits(A, b, *extra, lo=lo, hi=hi):
        return _compiled
    return _kernels_py


def enumerate_points(A, b, lo, hi) -> list[tuple[int, ...]]:
    A, b = [list(map(int, r)) for r in A], list(map(int, b))
    return _pick(A, b, lo, hi).enumerate_points(A, b, list(lo), list(hi))


def count_points(A, b, lo, hi) -> int:
    A, b = [list(map(int, r)) for r in A], list(map(int, b))
    return _pick(A, b, lo, hi).count_points(A, b, list(lo), list(hi))


def depth_sum(A, b, G, g, den, lo, hi) -> tuple[int, int]:
    A, b = [list(map(int, r)) for r in A], list(map(int, b))
    G, g, den = [list(map(int, r)) for r in G], list(map(int, g)), list(map(int, den))
    if any(d <= 0 for d in den):
        raise ValueError("depth denominators must be positive")
    return _pick(A, b, lo, hi, G, g, den).depth_sum(A, b, G, g, den, list(lo), list(hi))
