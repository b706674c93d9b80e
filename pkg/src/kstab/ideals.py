"""Torus-invariant ideals on toric charts and flag ideals on X x A^1.

An invariant ideal is stored chart by chart: for each maximal cone sigma a
set of exponent vectors in sigma^dual (M coordinates) generating the monomial
ideal of the affine chart U_sigma.  A chart with the single generator 0 is the
unit ideal; an empty generator set is the zero ideal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Mapping, Sequence

from ._linalg import dot
from .lattice import Fan, MinFunction, PLFunction, refine_fan
from .toric import ToricFanoVariety

Exponent = tuple[int, ...]


class IdealError(ValueError):
    pass


def _dominates(fan: Fan, cone: int, a: Sequence[int], g: Sequence[int]) -> bool:
    """a - g lies in the dual of the given cone, i.e. x^a is a multiple of x^g there."""
    return all(dot(a, fan.rays[k]) >= dot(g, fan.rays[k]) for k in fan.cones[cone])


def _minimalize(fan: Fan, cone: int, gens) -> frozenset[Exponent]:
    gens = sorted(set(tuple(g) for g in gens))
    keep = []
    for a in gens:
        if not any(b != a and _dominates(fan, cone, a, b) for b in gens):
            keep.append(a)
    # two distinct exponents can dominate each other only along a lineality space,
    # which strongly convex full-dimensional cones do not have
    return frozenset(keep)


def hilbert_basis(fan: Fan, cone: int) -> list[Exponent]:
    """Minimal generators of the semigroup sigma^dual cap M."""
    normals = fan.cone(cone).facet_normals
    d = fan.rank
    lo = [sum(min(0, m[i]) for m in normals) for i in range(d)]
    hi = [sum(max(0, m[i]) for m in normals) for i in range(d)]
    rays = [fan.rays[k] for k in fan.cones[cone]]
    pts = [p for p in product(*(range(a, b + 1) for a, b in zip(lo, hi)))
           if any(p) and all(dot(p, v) >= 0 for v in rays)]
    basis = []
    for p in pts:
        if not any(q != p and all(dot(p, v) - dot(q, v) >= 0 for v in rays) for q in pts):
            basis.append(p)
    return sorted(basis)


@dataclass(frozen=True)
class InvariantIdeal:
    """Monomial ideal sheaf given by minimal generators on every chart."""

    fan: Fan
    charts: tuple[frozenset[Exponent], ...]

    @classmethod
    def of(cls, fan: Fan, charts: Mapping[int, Sequence[Sequence[int]]] | Sequence) -> "InvariantIdeal":
        if not isinstance(charts, Mapping):
            charts = dict(enumerate(charts))
        unit = [(0,) * fan.rank]
        out = []
        for i in range(len(fan.cones)):
            gens = charts.get(i, unit)
            for g in gens:
                if len(g) != fan.rank:
                    raise IdealError(f"exponent {list(g)} has the wrong length on chart {i}")
                if any(not isinstance(c, int) for c in g):
                    raise IdealError(f"exponent {list(g)} is not integral")
            out.append(_minimalize(fan, i, gens))
        return cls(fan, tuple(out))

    @classmethod
    def unit(cls, fan: Fan) -> "InvariantIdeal":
        return cls.of(fan, {})

    @classmethod
    def zero(cls, fan: Fan) -> "InvariantIdeal":
        return cls.of(fan, {i: [] for i in range(len(fan.cones))})

    @classmethod
    def fixed_point(cls, fan: Fan, cone: int) -> "InvariantIdeal":
        """Maximal ideal of the torus-fixed point of a maximal cone."""
        return cls.of(fan, {cone: hilbert_basis(fan, cone)})

    @classmethod
    def boundary_divisor(cls, fan: Fan, ray: int) -> "InvariantIdeal":
        """Ideal sheaf of the invariant prime divisor of a ray."""
        charts = {}
        v = fan.rays[ray]
        for i in fan.cones_containing(ray):
            charts[i] = [h for h in hilbert_basis(fan, i) if dot(h, v) >= 1]
        return cls.of(fan, charts)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return all(not g for g in self.charts)

    def is_unit(self) -> bool:
        zero = (0,) * self.fan.rank
        return all(g == frozenset([zero]) for g in self.charts)

    def contains_monomial(self, cone: int, a: Sequence[int]) -> bool:
        return any(_dominates(self.fan, cone, a, g) for g in self.charts[cone])

    def __le__(self, other: "InvariantIdeal") -> bool:
        """Inclusion self in other, tested chart by chart on generators."""
        return all(other.contains_monomial(i, g) for i, gens in enumerate(self.charts) for g in gens)

    def validate(self) -> None:
        """Generators lie in the dual cones and the charts glue."""
        fan = self.fan
        for i, gens in enumerate(self.charts):
            for g in gens:
                if any(dot(g, fan.rays[k]) < 0 for k in fan.cones[i]):
                    raise IdealError(f"exponent {list(g)} is not regular on chart {i}")
        zero_charts = {i for i, g in enumerate(self.charts) if not g}
        if zero_charts and len(zero_charts) != len(self.charts):
            raise IdealError("ideal is zero on some charts but not on others")
        for i in range(len(fan.cones)):
            for j in range(i + 1, len(fan.cones)):
                face = sorted(set(fan.cones[i]) & set(fan.cones[j]))
                if not self._localizations_agree(i, j, face):
                    raise IdealError(f"charts {i} and {j} disagree along their common face {face}")

    def _localizations_agree(self, i: int, j: int, face: list[int]) -> bool:
        rays = [self.fan.rays[k] for k in face]

        def member(a, gens):
            return any(all(dot(a, v) >= dot(g, v) for v in rays) for g in gens)

        return (all(member(a, self.charts[j]) for a in self.charts[i])
                and all(member(a, self.charts[i]) for a in self.charts[j]))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "InvariantIdeal") -> "InvariantIdeal":
        return InvariantIdeal.of(self.fan, [a | b for a, b in zip(self.charts, other.charts)])

    def __mul__(self, other: "InvariantIdeal") -> "InvariantIdeal":
        return InvariantIdeal.of(self.fan, [
            [tuple(x + y for x, y in zip(g, h)) for g in a for h in b]
            for a, b in zip(self.charts, other.charts)])

    def __pow__(self, k: int) -> "InvariantIdeal":
        out = InvariantIdeal.unit(self.fan)
        for _ in range(k):
            out = out * self
        return out

    # -- valuations -------------------------------------------------------

    @cached_property
    def min_function(self) -> MinFunction:
        if self.is_zero():
            raise IdealError("the zero ideal has no order function")
        return MinFunction(tuple(tuple(sorted(g)) for g in self.charts))

    def order_at(self, x: Sequence) -> Fraction:
        """phi_I(x): minimum of <x, a> over generators on a chart containing x."""
        return self.min_function.value(self.fan.locate(x), x)

    def to_json(self) -> dict:
        return {"charts": {str(i): sorted(list(g) for g in gens) for i, gens in enumerate(self.charts)}}

    @classmethod
    def from_json(cls, fan: Fan, data: Mapping) -> "InvariantIdeal":
        if data.get("zero"):
            return cls.zero(fan)
        charts = data.get("charts", {})
        try:
            parsed = {int(k): [tuple(int(c) for c in g) for g in v] for k, v in charts.items()}
        except (TypeError, ValueError) as exc:
            raise IdealError(f"malformed chart data: {exc}") from exc
        if any(k < 0 or k >= len(fan.cones) for k in parsed):
            raise IdealError("chart index out of range")
        return cls.of(fan, parsed)


def order_function(X: ToricFanoVariety, I: InvariantIdeal) -> PLFunction:
    """phi_I on the coarsest refinement of the fan of X where it is linear."""
    _, (phi,) = refine_fan(X.fan, [I.min_function])
    return phi


@dataclass(frozen=True)
class FlagIdeal:
    """J = I_0 + I_1 t + ... + I_{N-1} t^{N-1} + (t^N) on X x A^1.

    ``shift`` records how many leading zero levels were divided out as a
    power of t.  A trivial-type ideal (t^N) keeps ``N`` and has only zero levels.
    """

    X: ToricFanoVariety
    levels: tuple[InvariantIdeal, ...]
    shift: int = 0

    @property
    def N(self) -> int:
        return len(self.levels)

    @property
    def trivial_type(self) -> bool:
        """J is (t^N) or the unit ideal."""
        return all(I.is_zero() for I in self.levels) or self.levels[0].is_unit()

    def level(self, j: int) -> InvariantIdeal:
        if j >= self.N:
            return InvariantIdeal.unit(self.X.fan)
        return self.levels[j]

    @cached_property
    def product_fan(self) -> Fan:
        return product_fan(self.X)

    @cached_property
    def min_function(self) -> MinFunction:
        """Chart data for phi_J(u, s) = min_j (phi_{I_j}(u) + j s)."""
        n = self.X.n
        forms = []
        for i in range(len(self.X.fan.cones)):
            cone_forms = {(0,) * n + (self.N,)}
            for j, I in enumerate(self.levels):
                cone_forms |= {tuple(g) + (j,) for g in I.charts[i]}
            forms.append(tuple(sorted(cone_forms)))
        return MinFunction(tuple(forms))

    def order_at(self, w: Sequence) -> Fraction:
        return self.min_function.value(self.product_fan.locate(w), w)

    @cached_property
    def cosupport_dimension(self) -> int:
        """Dimension of the zero locus of J (contained in X x {0}); -1 if empty."""
        if all(I.is_zero() for I in self.levels):
            return self.X.n
        I0 = self.levels[0]
        fan = self.X.fan
        best = -1
        for face in _all_faces(fan):
            x = [sum(fan.rays[k][c] for k in face) for c in range(fan.rank)]
            if I0.min_function.value(fan.locate(x), x) > 0:
                best = max(best, fan.rank - len(face))
        return best

    def validate(self) -> None:
        if self.N < 1:
            raise IdealError("N must be positive")
        for j, I in enumerate(self.levels):
            if I.fan != self.X.fan:
                raise IdealError(f"level {j} lives on a different fan")
            I.validate()
        for j in range(self.N - 1):
            if not self.levels[j] <= self.levels[j + 1]:
                raise IdealError(f"chain broken: I_{j} is not contained in I_{j + 1}")
        if not self.trivial_type and self.levels[0].is_zero():
            raise IdealError("I_0 = (0) must be normalized away")

    def to_json(self) -> dict:
        out = {"N": self.N, "levels": [
            {"zero": True} if I.is_zero() else I.to_json() for I in self.levels]}
        if self.shift:
            out["shift"] = self.shift
        return out

    @classmethod
    def from_json(cls, X: ToricFanoVariety, data: Mapping) -> "FlagIdeal":
        try:
            N = int(data["N"])
            raw = list(data["levels"])
        except (KeyError, TypeError, ValueError) as exc:
            raise IdealError(f"malformed flag ideal: {exc}") from exc
        if len(raw) != N:
            raise IdealError(f"expected {N} levels, got {len(raw)}")
        return flag_ideal(X, [InvariantIdeal.from_json(X.fan, lv) for lv in raw])


def flag_ideal(X: ToricFanoVariety, levels: Sequence[InvariantIdeal]) -> FlagIdeal:
    """Validated flag ideal with leading zero levels divided out."""
    levels = list(levels)
    if not levels:
        raise IdealError("at least one level is required")
    shift = 0
    if not all(I.is_zero() for I in levels):
        while levels[0].is_zero():
            levels.pop(0)
            shift += 1
    J = FlagIdeal(X, tuple(levels), shift)
    J.validate()
    return J


def trivial_flag(X: ToricFanoVariety, N: int) -> FlagIdeal:
    """J = (t^N)."""
    return flag_ideal(X, [InvariantIdeal.zero(X.fan)] * N)


def product_fan(X: ToricFanoVariety) -> Fan:
    """Fan of X x A^1: rays (v, 0) followed by (0, 1); cones sigma + (0, 1)."""
    top = len(X.fan.rays)
    rays = [tuple(r) + (0,) for r in X.fan.rays] + [(0,) * X.n + (1,)]
    return Fan.of(rays, [tuple(c) + (top,) for c in X.fan.cones])


def _all_faces(fan: Fan) -> list[tuple[int, ...]]:
    """All faces of the fan as ray-index tuples, the zero cone included.

    A subset S of a maximal cone's rays is a face exactly when it equals the
    set of rays on which every facet normal vanishing on S also vanishes.
    """
    faces = {()}
    for i, c in enumerate(fan.cones):
        normals = fan.cone(i).facet_normals
        for size in range(1, len(c) + 1):
            for S in combinations(c, size):
                tight = [m for m in normals if all(dot(m, fan.rays[k]) == 0 for k in S)]
                closure = tuple(k for k in c if all(dot(m, fan.rays[k]) == 0 for m in tight))
                if closure == S:
                    faces.add(S)
    return sorted(faces, key=lambda f: (len(f), f))
