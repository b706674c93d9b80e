"""Donaldson-Futaki invariants from graded section counts.

For a flag ideal J and order r the polarization on the blowup B is
L - E with L = -rK.  Sections of K(L - E) are characters (u, j) of the torus
of X x A^1; for fixed u they are exactly the j >= j_min(u), so the central
fibre has one weight j_min(u) per u in KrQ.  The total weight is
w(K) = -sum_u j_min(u).

By default j_min is read off the valuations of the refined fan, i.e. sections
of the normalized blowup (``closure=True``).  ``closure=False`` counts sections
of J^K literally through the coefficient ideals C_j(K).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from . import kernels
from ._linalg import solve
from .blowup import BlowupModel, blowup_model, minimal_semiample_r, semiample_test
from .ideals import FlagIdeal, InvariantIdeal
from .lattice import bounding_box, lattice_points
from .toric import ToricFanoVariety, section_count


class FitError(RuntimeError):
    """Samples did not stabilize to a polynomial below the configured ceiling."""


# -- literal counts ---------------------------------------------------------

def coefficient_ideal(J: FlagIdeal, k: int, j: int) -> InvariantIdeal:
    """Coefficient of t^j in J^k."""
    return _coefficient_ideal(J, k, j)


@lru_cache(maxsize=4096)
def _coefficient_ideal(J: FlagIdeal, k: int, j: int) -> InvariantIdeal:
    fan = J.X.fan
    if k == 0 or j >= k * J.N:
        return InvariantIdeal.unit(fan)
    if k == 1:
        return J.level(j)
    out = None
    for i in range(min(j, J.N) + 1):
        if J.level(i).is_zero():
            continue
        term = J.level(i) * _coefficient_ideal(J, k - 1, j - i)
        out = term if out is None else out + term
    return out if out is not None else InvariantIdeal.zero(fan)


def twisted_section_count(X: ToricFanoVariety, m: int, C: InvariantIdeal) -> int:
    """Sections of -mK lying in C on every chart."""
    if C.is_zero():
        return 0
    points = lattice_points(X.Q.scaled(m)) if m else [(0,) * X.n]
    if C.is_unit():
        return len(points)
    count = 0
    for u in points:
        if all(C.contains_monomial(i, [int(x + m * q) for x, q in zip(u, [-c for c in X.chart_vertices[i]])])
               for i in range(len(X.fan.cones))):
            count += 1
    return count


def literal_weight(X: ToricFanoVariety, J: FlagIdeal, r: int, K: int) -> int:
    m = K * r
    P = section_count(X, m)
    return -sum(P - twisted_section_count(X, m, coefficient_ideal(J, K, j)) for j in range(K * J.N))


# -- normalized counts ------------------------------------------------------

def _depth_data(model: BlowupModel, r: int, K: int):
    """Kernel inputs: KrQ as A u + b >= 0, and rows of the j_min bound."""
    X = model.X
    A = [list(v) for v in X.rays]
    b = [K * r] * len(X.rays)
    G, g, den = [], [], []
    for rec in model.records:
        w, bw = rec.ray, rec.ray[-1]
        if bw == 0:
            continue
        v = w[:-1]
        # j >= (K c_w - <u, v> - K r psi_X(v)) / b_w
        G.append([-c for c in v])
        g.append(K * rec.c - K * r * int(X.psi(v)))
        den.append(bw)
    return A, b, G, g, den


def normalized_weight(model: BlowupModel, r: int, K: int) -> tuple[int, int]:
    """(P(K), w(K)) for the normalized blowup with polarization K(L - E)."""
    X = model.X
    A, b, G, g, den = _depth_data(model, r, K)
    lo, hi = bounding_box(X.Q.scaled(K * r))
    count, depth = kernels.depth_sum(A, b, G, g, den, lo, hi)
    return count, -depth


def weight(X: ToricFanoVariety, J: FlagIdeal, r: int, k: int, closure: bool = True) -> int:
    """Total weight w_r(k) on the central fibre."""
    if closure:
        return normalized_weight(blowup_model(X, J), r, k)[1]
    return literal_weight(X, J, r, k)


def weight_period(model: BlowupModel, r: int) -> int:
    """Denominator of the section polytope; counts are polynomial along its multiples."""
    alpha = model.psi_X.scale(r) - model.phi
    return lcm(1, *[c.denominator for form in alpha.forms for c in form])


# -- fitting ----------------------------------------------------------------

def fit_polynomial(xs: Sequence, ys: Sequence, degree: int) -> list[Fraction]:
    """Coefficients c_0..c_degree of the interpolating polynomial (exact)."""
    xs, ys = list(xs)[:degree + 1], list(ys)[:degree + 1]
    if len(xs) < degree + 1:
        raise FitError("not enough samples")
    coeffs = solve([[Fraction(x) ** i for i in range(degree + 1)] for x in xs], [Fraction(y) for y in ys])
    if coeffs is None:
        raise FitError("singular interpolation nodes")
    return list(coeffs)


def evaluate(coeffs: Sequence, x) -> Fraction:
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _verified_fit(xs, ys, degree, extra):
    coeffs = fit_polynomial(xs, ys, degree)
    ok = all(evaluate(coeffs, x) == y for x, y in zip(xs[degree + 1:degree + 1 + extra],
                                                         ys[degree + 1:degree + 1 + extra]))
    return coeffs, ok


@dataclass(frozen=True)
class WeightData:
    r: int
    period: int
    k_min: int
    samples: tuple[tuple[int, int, int], ...]  # (K, P(K), w(K))
    P: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    closure: bool = True


@dataclass(frozen=True)
class DFReport:
    route: str
    r: int
    value: Fraction
    e: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    weights: WeightData | None = None
    table: dict | None = None
    scale: int = 1

    def to_json(self) -> dict:
        q = lambda x: f"{Fraction(x).numerator}/{Fraction(x).denominator}"
        out = {"route": self.route, "r": self.r, "scale": self.scale, "DF": q(self.value)}
        if self.e:
            out["e"] = {f"{i},{j}": q(v) for (i, j), v in sorted(self.e.items())}
        if self.weights is not None:
            wd = self.weights
            out["weights"] = {"period": wd.period, "k_min": wd.k_min, "closure": wd.closure,
                              "samples": [{"k": k, "P": p, "w": w} for k, p, w in wd.samples]}
        if self.table is not None:
            out["intersections"] = {k: (q(v) if isinstance(v, (int, Fraction)) else v)
                                    for k, v in self.table.items()}
        return out


EXTRA = 2  # verification samples beyond each fitting window


def weight_data(X: ToricFanoVariety, J: FlagIdeal, r: int, kmax: int = 40,
                closure: bool = True, scale: int = 1, model: BlowupModel | None = None) -> WeightData:
    """Sample (P, w) along multiples of the period and find a stable polynomial window."""
    model = model or blowup_model(X, J)
    if not semiample_test(model, r).passed:
        raise ValueError(f"L - E is not semiample at r={r}")
    period = weight_period(model, r)
    n = X.n
    need = n + 2 + EXTRA
    cache: dict[int, tuple[int, int]] = {}

    def sample(K):
        if K not in cache:
            if closure:
                cache[K] = normalized_weight(model, r, K)
            else:
                cache[K] = (section_count(X, K * r), literal_weight(X, J, r, K))
        return cache[K]

    start = 1
    while True:
        ks = [period * (start + i) for i in range(need)]
        if ks[-1] > kmax:
            raise FitError(f"no stable window with k <= {kmax} (period {period}, k_min > {start - 1})")
        # the scaled pipeline samples K = scale * k, i.e. polarization scale (L - E)
        Ps = [sample(scale * k)[0] for k in ks]
        ws = [sample(scale * k)[1] for k in ks]
        Pc, okP = _verified_fit(ks, Ps, n, EXTRA + 1)
        wc, okw = _verified_fit(ks, ws, n + 1, EXTRA)
        if okP and okw:
            return WeightData(r, period, start, tuple(zip(ks, Ps, ws)), tuple(Pc), tuple(wc), closure)
        start += 1


def donaldson_futaki_weight(X: ToricFanoVariety, J: FlagIdeal, r: int | None = None, kmax: int = 40,
                            closure: bool = True, scale: int = 1) -> DFReport:
    """DF = e_{n+1,n} of e~(rho, K) = w(K) rho P(rho) - w(rho) K P(K)."""
    model = blowup_model(X, J)
    if r is None:
        r = minimal_semiample_r(model)
        if r is None:
            raise ValueError("no semiample order found")
    data = weight_data(X, J, r, kmax, closure, scale, model)
    n = X.n
    ks = [k for k, _, _ in data.samples]
    P = {k: p for k, p, _ in data.samples}
    W = {k: w for k, _, w in data.samples}

    def etilde(rho, K):
        return W[K] * rho * P[rho] - W[rho] * K * P[K]

    per_rho = []
    for rho in ks:
        coeffs, ok = _verified_fit(ks, [etilde(rho, K) for K in ks], n + 1, EXTRA)
        if not ok:
            raise FitError(f"e~({rho}, K) is not a polynomial of degree {n + 1} in K")
        per_rho.append(coeffs)
    e: dict[tuple[int, int], Fraction] = {}
    for i in range(n + 2):
        coeffs, ok = _verified_fit(ks, [c[i] for c in per_rho], n + 1, EXTRA)
        if not ok:
            raise FitError(f"coefficient e_{i}(rho) is not a polynomial of degree {n + 1}")
        for j, v in enumerate(coeffs):
            e[(i, j)] = v
    if e[(n + 1, n + 1)] != 0:
        raise AssertionError(f"normalization failed: e_{{n+1,n+1}} = {e[(n + 1, n + 1)]}")
    return DFReport("weight", r, e[(n + 1, n)], e, data, scale=scale)
