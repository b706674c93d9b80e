"""Toric blowups of flag ideals, Seshadri constants and the related inequalities.

The blowup of X x A^1 along a monomial flag ideal J is replaced by its
normalization, the toric variety of the coarsest refinement on which phi_J is
linear.  Ampleness pulls back and descends along that finite map, so Seshadri
constants computed on the refined fan agree with the ones on the blowup itself.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any

from ._linalg import dot
from .ideals import FlagIdeal, InvariantIdeal, flag_ideal, product_fan
from .lattice import Fan, PLFunction, Verdict, convexity_test, refine_fan
from .lct import global_lct
from .toric import ToricFanoVariety


@dataclass(frozen=True)
class RayData:
    ray: tuple[int, ...]
    a: int  # discrepancy of K_{B / X x A^1}
    b: int  # multiplicity in the pullback of X x {0}
    c: int  # order of J


@dataclass(frozen=True)
class BlowupModel:
    X: ToricFanoVariety
    J: FlagIdeal
    fan: Fan
    phi: PLFunction
    records: tuple[RayData, ...]

    @property
    def s(self) -> int:
        return self.J.cosupport_dimension

    @property
    def trivial_type(self) -> bool:
        return self.J.trivial_type

    @cached_property
    def psi_X(self) -> PLFunction:
        """psi_X(v) pulled back along the projection to N, on the refined fan."""
        return PLFunction.from_ray_values(self.fan, [self.X.psi(w[:-1]) for w in self.fan.rays])

    @property
    def original_count(self) -> int:
        return len(self.X.rays) + 1

    def new_records(self) -> tuple[RayData, ...]:
        return self.records[self.original_count:]

    def check(self) -> None:
        """Rebuild phi_J from the c's and psi_1 from the a's and compare."""
        if PLFunction.from_ray_values(self.fan, [r.c for r in self.records]) != self.phi:
            raise AssertionError("order data do not reproduce phi_J")
        for r in self.records:
            if r.a + 1 != self.X.psi(r.ray[:-1]) + r.ray[-1] or r.b != r.ray[-1]:
                raise AssertionError(f"discrepancy data inconsistent at {r.ray}")
        # psi_1 must be linear on the refined cones as well
        PLFunction.from_ray_values(self.fan, [r.a + 1 for r in self.records])

    def to_json(self) -> dict:
        return {"s": self.s, "trivial_type": self.trivial_type,
                "rays": [{"ray": list(r.ray), "a": r.a, "b": r.b, "c": r.c} for r in self.records]}


def blowup_model(X: ToricFanoVariety, J: FlagIdeal) -> BlowupModel:
    fan, (phi,) = refine_fan(product_fan(X), [J.min_function])
    records = []
    for w, c in zip(fan.rays, phi.values):
        a = X.psi(w[:-1]) + w[-1] - 1
        records.append(RayData(w, int(a), w[-1], int(c)))
    return BlowupModel(X, J, fan, phi, tuple(records))


@dataclass(frozen=True)
class SeshadriResult:
    """``value is None`` means +infinity (nothing to blow up)."""

    value: Fraction | None
    witness: tuple | None = None  # (cone rays, ray) where the bound is attained
    level: int | None = None

    @property
    def infinite(self) -> bool:
        return self.value is None


def _critical_ratio(fan: Fan, top: PLFunction, phi: PLFunction):
    """sup{c : top - c phi strictly convex} as a min over (cone, ray) pairs."""
    best = None
    for i, cone in enumerate(fan.cones):
        members = set(cone)
        for k, w in enumerate(fan.rays):
            if k in members:
                continue
            num = top.values[k] - dot(top.forms[i], w)
            den = phi.values[k] - dot(phi.forms[i], w)
            if den > 0:
                cand = (num / den, tuple(fan.rays[j] for j in cone), w)
                if best is None or cand[0] < best[0]:
                    best = cand
            elif den == 0 and num <= 0:
                return Fraction(0), (tuple(fan.rays[j] for j in cone), w)
    if best is None:
        return None, None
    return best[0], (best[1], best[2])


def seshadri_ideal(X: ToricFanoVariety, I: InvariantIdeal, r: int = 1) -> SeshadriResult:
    """Seshadri constant of I with respect to -rK."""
    if I.is_unit():
        return SeshadriResult(None)
    if I.is_zero():
        raise ValueError("the zero ideal has empty complement; Seshadri constant undefined")
    fan, (phi,) = refine_fan(X.fan, [I.min_function])
    top = PLFunction.from_ray_values(fan, [r * X.psi(w) for w in fan.rays])
    value, witness = _critical_ratio(fan, top, phi)
    return SeshadriResult(value, witness)


def seshadri_flag(X: ToricFanoVariety, J: FlagIdeal, r: int = 1) -> SeshadriResult:
    """Minimum over nontrivial levels of the level Seshadri constants."""
    best = SeshadriResult(None)
    for j, I in enumerate(J.levels):
        if I.is_unit() or I.is_zero():
            continue
        res = seshadri_ideal(X, I, r)
        if res.value is not None and (best.value is None or res.value < best.value):
            best = SeshadriResult(res.value, res.witness, j)
    return best


def semiample_test(model: BlowupModel, r: int) -> Verdict:
    """Convexity of r psi_X - phi_J on the refined fan over A^1."""
    f = model.psi_X.scale(r) - model.phi
    return convexity_test(model.fan, f, strict=False)


def minimal_semiample_r(model: BlowupModel, bound: int = 64) -> int | None:
    for r in range(1, bound + 1):
        if semiample_test(model, r).passed:
            return r
    return None


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: Fraction | None
    rhs: Fraction | None
    holds: bool
    vacuous: bool = False
    detail: dict[str, Any] = field(default_factory=dict)


def prop31_check(model: BlowupModel, sesh: SeshadriResult | None = None) -> InequalityReport:
    """Sesh(J) <= (1/lct(X)) min_{c_w > 0} (a_w - b_w + 1) / c_w."""
    X, J = model.X, model.J
    if model.trivial_type:
        return InequalityReport("seshadri-vs-discrepancy", None, None, True, vacuous=True)
    sesh = sesh or seshadri_flag(X, J)
    lct = global_lct(X).value
    ratios = [(Fraction(r.a - r.b + 1, r.c), r.ray) for r in model.records if r.c > 0]
    if not ratios or sesh.value is None:
        return InequalityReport("seshadri-vs-discrepancy", sesh.value, None, True, vacuous=True)
    best, ray = min(ratios)
    rhs = best / lct
    return InequalityReport("seshadri-vs-discrepancy", sesh.value, rhs, sesh.value <= rhs,
                            detail={"ray": ray, "lct": lct, "min_ratio": best})


def prop44_margin(model: BlowupModel, sesh: SeshadriResult | None = None) -> InequalityReport:
    """epsilon = min over c_w > 0 of ((n+1)/n a_w - Sesh c_w) / c_w.

    ``lhs`` carries epsilon and ``rhs`` the comparison point 0.
    """
    X = model.X
    if model.trivial_type:
        return InequalityReport("discrepancy-margin", None, Fraction(0), True, vacuous=True)
    sesh = sesh or seshadri_flag(X, model.J)
    if sesh.value is None:
        return InequalityReport("discrepancy-margin", None, Fraction(0), True, vacuous=True)
    n = X.n
    coeffs = [(Fraction(n + 1, n) * r.a - sesh.value * r.c, r) for r in model.records if r.c > 0]
    eps, rec = min(((co / r.c, r) for co, r in coeffs), key=lambda t: (t[0], t[1].ray))
    sign = "positive" if eps > 0 else "zero" if eps == 0 else "negative"
    return InequalityReport("discrepancy-margin", eps, Fraction(0), True,
                            detail={"sign": sign, "ray": rec.ray, "seshadri": sesh.value,
                                    "coefficients": {str(r.ray): co for co, r in coeffs}})


# -- random instances -------------------------------------------------------

def _atom(X: ToricFanoVariety, rng: random.Random) -> InvariantIdeal:
    fan = X.fan
    kind = rng.choice(["point", "point", "divisor", "unit"])
    if kind == "point":
        return InvariantIdeal.fixed_point(fan, rng.randrange(len(fan.cones)))
    if kind == "divisor":
        return InvariantIdeal.boundary_divisor(fan, rng.randrange(len(fan.rays)))
    return InvariantIdeal.unit(fan)


def _random_factor(X: ToricFanoVariety, rng: random.Random) -> InvariantIdeal:
    a = _atom(X, rng)
    op = rng.random()
    if op < 0.3:
        return a * _atom(X, rng)
    if op < 0.5:
        return a + _atom(X, rng)
    return a


def random_flag_ideal(X: ToricFanoVariety, seed: int, max_levels: int = 3,
                      require_s: int | None = None, tries: int = 200) -> FlagIdeal:
    """Seeded nontrivial flag ideal built as I_j = I_{j+1} G_j, so the chain holds by construction."""
    rng = random.Random(seed)
    for _ in range(tries):
        N = rng.randint(1, max_levels)
        top = _random_factor(X, rng)
        levels = [top]
        for _ in range(N - 1):
            levels.insert(0, levels[0] * _random_factor(X, rng))
        if levels[0].is_unit():
            continue
        J = flag_ideal(X, levels)
        if require_s is not None and J.cosupport_dimension != require_s:
            continue
        return J
    raise RuntimeError(f"no admissible flag ideal found for seed {seed}")
