"""Pure-Python lattice-scan kernels.

Reference implementation of the routines in ``_kernels.pyx``; selected
automatically when the compiled module is unavailable.
"""
from itertools import product


def _inside(A, b, x):
    for row, c in zip(A, b):
        s = c
        for a, xi in zip(row, x):
            s += a * xi
        if s < 0:
            return False
    return True


def enumerate_points(A, b, lo, hi):
    """Integer points x with lo <= x <= hi and A x + b >= 0."""
    ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
    return [x for x in product(*ranges) if _inside(A, b, x)]


def count_points(A, b, lo, hi):
    ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
    return sum(1 for x in product(*ranges) if _inside(A, b, x))


def depth_sum(A, b, G, g, den, lo, hi):
    """Count points of {A x + b >= 0} in the box and sum their depths.

    The depth of x is max(0, max_i ceil((G_i . x + g_i) / den_i)); every den_i > 0.
    """
    count = 0
    total = 0
    ranges = [range(l, h + 1) for l, h in zip(lo, hi)]
    for x in product(*ranges):
        if not _inside(A, b, x):
            continue
        count += 1
        depth = 0
        for row, c, d in zip(G, g, den):
            s = c
            for a, xi in zip(row, x):
                s += a * xi
            q = -((-s) // d)
            if q > depth:
                depth = q
        total += depth
    return count, total
