"""Donaldson-Futaki invariants from intersection numbers on the compactified blowup.

The fan of the blowup over A^1 is closed up over infinity by the cones
sigma + (0, -1).  A = L - E is generally not nef there, but A + mF is for m
large (F the fibre at infinity, the divisor of the ray (0, -1)), and all
needed products of A follow from those of A + mF: F^2 = 0, F meets neither E
nor K_{B/X x A^1}, and A + mF restricts to L on F.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .blowup import BlowupModel, blowup_model, minimal_semiample_r, semiample_test
from .dfweight import DFReport, fit_polynomial
from .ideals import FlagIdeal
from .lattice import (Fan, GeometryError, PLFunction, RationalPolytope, convexity_test,
                      face_volume, normalized_volume)
from .toric import ToricFanoVariety


@dataclass(frozen=True)
class NefModel:
    model: BlowupModel
    r: int
    fan: Fan  # compactified fan; the last ray is (0, -1)
    m0: int

    @property
    def X(self) -> ToricFanoVariety:
        return self.model.X

    @property
    def fibre_ray(self) -> int:
        return len(self.fan.rays) - 1

    def alpha(self, m: int, y: int = 0) -> list[Fraction]:
        """Ray coefficients of (L - E) + m F + y L."""
        X, r = self.X, self.r
        out = []
        for k, w in enumerate(self.fan.rays):
            lw = r * X.psi(w[:-1]) if any(w[:-1]) else Fraction(0)
            c = self.model.records[k].c if k < len(self.model.records) else 0
            out.append((1 + y) * lw - c + (m if k == self.fibre_ray else 0))
        return out

    def polytope(self, m: int, y: int = 0) -> RationalPolytope:
        return RationalPolytope.from_halfspaces(self.fan.rays, self.alpha(m, y))

    def is_nef(self, m: int) -> bool:
        f = PLFunction.from_ray_values(self.fan, self.alpha(m))
        return convexity_test(self.fan, f).passed

    def coefficients(self) -> dict[str, list]:
        """Ray coefficients of L, E and K_{B/X x A^1} on the compactified fan."""
        X, r = self.X, self.r
        L, E, K = [], [], []
        for k, w in enumerate(self.fan.rays):
            L.append(r * X.psi(w[:-1]) if any(w[:-1]) else Fraction(0))
            if k < len(self.model.records):
                E.append(self.model.records[k].c)
                K.append(self.model.records[k].a)
            else:
                E.append(0)
                K.append(0)
        return {"L": L, "E": E, "K": K}


def compactified_fan(model: BlowupModel) -> Fan:
    X = model.X
    bottom = len(model.fan.rays)
    rays = list(model.fan.rays) + [(0,) * X.n + (-1,)]
    cones = list(model.fan.cones) + [tuple(c) + (bottom,) for c in X.fan.cones]
    return Fan.of(rays, cones)


def build_nef_model(X: ToricFanoVariety, J: FlagIdeal, r: int, model: BlowupModel | None = None,
                    bound: int = 256) -> NefModel:
    model = model or blowup_model(X, J)
    if not semiample_test(model, r).passed:
        raise ValueError(f"L - E is not semiample at r={r}")
    fan = compactified_fan(model)
    probe = NefModel(model, r, fan, 0)
    for m in range(bound + 1):
        if probe.is_nef(m):
            return NefModel(model, r, fan, m)
    raise GeometryError(f"no nef twist found with m <= {bound}")


def _top_and_faces(nm: NefModel, m: int):
    P = nm.polytope(m)
    n = nm.X.n
    top = factorial(n + 1) * normalized_volume(P)
    faces = [factorial(n) * face_volume(P, w) for w in nm.fan.rays]
    return top, faces


def intersection_numbers(nm: NefModel, m: int | None = None) -> dict[str, Fraction]:
    """A^{n+1}, A^n.L, A^n.E, A^n.K_rel for A = L - E, via the twist A + mF."""
    m = nm.m0 if m is None else m
    n, r = nm.X.n, nm.r
    Ln = Fraction(r) ** n * nm.X.degree
    top, faces = _top_and_faces(nm, m)
    co = nm.coefficients()
    dot_ = lambda coeffs: sum(Fraction(c) * f for c, f in zip(coeffs, faces))
    return {
        "A^{n+1}": top - (n + 1) * m * Ln,
        "A^n.L": dot_(co["L"]) - n * m * Ln,
        "A^n.E": dot_(co["E"]),
        "A^n.K": dot_(co["K"]),
        "L^n": Ln,
        "m": Fraction(m),
    }


def mixed_products(nm: NefModel, m: int | None = None) -> list[Fraction]:
    """A^i L^{n+1-i} for i = 0..n+1, from vol(P_m + y P_L) interpolated in y."""
    m = nm.m0 if m is None else m
    n = nm.X.n
    Ln = Fraction(nm.r) ** n * nm.X.degree
    ys = list(range(n + 2))
    vols = [normalized_volume(nm.polytope(m, y)) for y in ys]
    poly = fit_polynomial(ys, vols, n + 1)  # coefficient of y^{n+1-i} is C(n+1, i) V_i
    out = []
    for i in range(n + 2):
        Vi = poly[n + 1 - i] / comb(n + 1, i)
        twisted = factorial(n + 1) * Vi
        out.append(twisted - (i * m * Ln if i >= 1 else 0))
    return out


def donaldson_futaki_intersection(X: ToricFanoVariety, J: FlagIdeal, r: int | None = None,
                                  m: int | None = None) -> DFReport:
    """2 n! (n+1)! DF = r^{n-1} V [-A^n.(L + nE) + (n+1) r A^n.K_{B/X x A^1}]."""
    model = blowup_model(X, J)
    if r is None:
        r = minimal_semiample_r(model)
        if r is None:
            raise ValueError("no semiample order found")
    nm = build_nef_model(X, J, r, model)
    t = intersection_numbers(nm, m)
    n = X.n
    V = X.degree
    bracket = -t["A^n.L"] - n * t["A^n.E"] + (n + 1) * r * t["A^n.K"]
    df = Fraction(r) ** (n - 1) * V * bracket / (2 * factorial(n) * factorial(n + 1))
    table = dict(t)
    table["m0"] = Fraction(nm.m0)
    return DFReport("intersection", r, df, table=table)


@dataclass(frozen=True)
class Decomposition:
    first: Fraction  # -A^n.L
    second: Fraction  # A^n.((n+1) r K - n E)
    e_degree: Fraction  # A^n.E
    hodge: Fraction | None  # (-E)^{n+1-s} L^s, n <= 2 only
    s: int
    df: Fraction
    identity_holds: bool
    cross_check: bool
    twist_independent: bool
    checks: dict[str, bool] = field(default_factory=dict)


def decomposition_check(X: ToricFanoVariety, J: FlagIdeal, r: int | None = None) -> Decomposition:
    model = blowup_model(X, J)
    if r is None:
        r = minimal_semiample_r(model)
    nm = build_nef_model(X, J, r, model)
    n, V = X.n, X.degree
    t = intersection_numbers(nm)
    t2 = intersection_numbers(nm, nm.m0 + 1)
    first = -t["A^n.L"]
    second = (n + 1) * r * t["A^n.K"] - n * t["A^n.E"]
    df = donaldson_futaki_intersection(X, J, r).value
    identity = Fraction(r) ** (n - 1) * V * (first + second) == 2 * factorial(n) * factorial(n + 1) * df
    cross = t["A^n.E"] == t["A^n.L"] - t["A^{n+1}"]
    same = all(t[k] == t2[k] for k in ("A^{n+1}", "A^n.L", "A^n.E", "A^n.K"))
    s = model.s
    hodge = None
    if n <= 2 and s >= 0:
        mixed = mixed_products(nm)  # A^i L^{n+1-i}
        # (-E)^{n+1-s} L^s with -E = A - L
        e = n + 1 - s
        hodge = sum(comb(e, k) * (-1) ** (e - k) * mixed[k] for k in range(e + 1))
    trivial = model.trivial_type
    checks = {
        "first term >= 0": first >= 0,
        "first term = 0 iff s = 0": (first == 0) == (s == 0) if not trivial else True,
        "A^n.E > 0": t["A^n.E"] > 0 if not trivial else True,
        "(-E)^{n+1-s}.L^s < 0": hodge < 0 if hodge is not None and not trivial else True,
        "terms sum to the DF formula": identity,
        "A^n.E = A^n.L - A^{n+1}": cross,
        "independent of the twist m": same,
    }
    return Decomposition(first, second, t["A^n.E"], hodge, s, df, identity, cross, same, checks)
