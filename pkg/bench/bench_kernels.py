"""Compiled vs pure-Python lattice kernels on the weight-sampling workload.

    python3 bench/bench_kernels.py [--repeat 3]

Each case is the depth scan behind one weight sample w(K).  Both backends
must return identical (count, depth) pairs; the script exits non-zero if not.
"""
from __future__ import annotations

import argparse
import sys
import timeit

from kstab import _kernels_py
from kstab.blowup import blowup_model, minimal_semiample_r, random_flag_ideal
from kstab.dfweight import _depth_data
from kstab.lattice import bounding_box
from kstab.toric import load_corpus, variety

try:
    from kstab import _kernels as _compiled
except ImportError:
    _compiled = None


def cases():
    picks = [(variety("P2"), 0, 12), (variety("P1xP1"), 2, 12),
             (load_corpus("smooth-del-pezzo-toric")[-1], 1, 8), (variety("P3"), 0, 4)]
    for X, seed, K in picks:
        model = blowup_model(X, random_flag_ideal(X, seed))
        r = minimal_semiample_r(model)
        A, b, G, g, den = _depth_data(model, r, K)
        lo, hi = bounding_box(X.Q.scaled(K * r))
        yield f"{X.name} seed={seed} K={K} r={r}", (A, b, G, g, den, lo, hi)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; only the fallback is available")
        return 1
    print(f"{'case':40s} {'points':>8s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    ok = True
    for label, data in cases():
        ref = _kernels_py.depth_sum(*data)
        fast = _compiled.depth_sum(*data)
        ok &= ref == fast
        tp = min(timeit.repeat(lambda: _kernels_py.depth_sum(*data), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: _compiled.depth_sum(*data), number=1, repeat=args.repeat))
        print(f"{label:40s} {ref[0]:8d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x"
              + ("" if ref == fast else "  MISMATCH"))
    # whole pipeline, backend chosen at import in a fresh interpreter
    import os
    import subprocess
    code = ("import time; from kstab.toric import variety; from kstab.blowup import random_flag_ideal;"
            "from kstab.dfweight import donaldson_futaki_weight; t = time.perf_counter();"
            "[donaldson_futaki_weight(X, random_flag_ideal(X, s), kmax=12)"
            " for X in (variety('P2'), variety('P1xP1')) for s in range(4)];"
            "print(time.perf_counter() - t)")
    for label, env in (("cython", {}), ("python", {"KSTAB_PURE_PYTHON": "1"})):
        out = subprocess.run([sys.executable, "-c", code], env={**os.environ, **env},
                             capture_output=True, text=True, check=True).stdout
        print(f"end-to-end DF, 8 instances, {label:6s} backend: {float(out):.3f} s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
