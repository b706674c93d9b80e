"""Cones, fans, rational polytopes and piecewise-linear functions.

Everything is exact: lattice vectors are tuples of ints, offsets and function
values are ``Fraction``.  Ambient ranks stay small (at most 4 for fans, 5 for
a few auxiliary polytopes), so vertex and ray enumeration is done by brute
force over subsets of constraints.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import ceil, factorial, floor, gcd
from typing import Iterable, Sequence

from . import kernels
from ._linalg import affine_rank, det, dot, int_det, nullspace, primitive, rank, solve


class GeometryError(ValueError):
    """Malformed cone, fan or polytope data."""


def cone_rays(inequalities: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    """Primitive extreme rays of the pointed cone {x : <a, x> >= 0 for all a}."""
    ineqs = sorted({primitive(a) for a in inequalities if any(a)})
    if rank(ineqs) < dim:
        raise GeometryError("cone contains a line")
    rays = set()
    for sub in combinations(ineqs, dim - 1):
        ker = nullspace(list(sub), dim)
        if len(ker) != 1:
            continue
        k = ker[0]
        for sign in (1, -1):
            cand = [sign * x for x in k]
            if all(dot(a, cand) >= 0 for a in ineqs):
                rays.add(primitive(cand))
    return sorted(rays)


def in_cone(x: Sequence, generators: Sequence[Sequence]) -> bool:
    """Membership of x in the cone spanned by generators (Caratheodory search)."""
    if not any(x):
        return True
    gens = [tuple(g) for g in generators]
    if rank(gens + [tuple(x)]) > rank(gens):
        return False
    r = rank(gens)
    for sub in combinations(gens, r):
        if rank(sub) < r:
            continue
        # solve x = sum l_i s_i in the span: use r independent coordinates
        rows = [list(col) for col in zip(*sub)]
        target = list(x)
        idx = _independent_rows(rows, r)
        coeffs = solve([rows[i] for i in idx], [target[i] for i in idx])
        if coeffs is None or any(c < 0 for c in coeffs):
            continue
        if all(dot(row, coeffs) == t for row, t in zip(rows, target)):
            return True
    return False


def _independent_rows(rows, r):
    chosen: list[int] = []
    for i in range(len(rows)):
        if rank([rows[j] for j in chosen + [i]]) > len(chosen):
            chosen.append(i)
            if len(chosen) == r:
                break
    return chosen


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone spanned by primitive lattice vectors."""

    generators: tuple[tuple[int, ...], ...]
    rank: int

    @classmethod
    def of(cls, generators: Iterable[Sequence[int]]) -> "Cone":
        gens = tuple(primitive(g) for g in generators)
        if not gens:
            raise GeometryError("a cone needs at least one generator")
        return cls(gens, len(gens[0]))

    @property
    def dim(self) -> int:
        return rank(self.generators)

    @cached_property
    def facet_normals(self) -> tuple[tuple[int, ...], ...]:
        """Inward facet normals; only meaningful for full-dimensional cones."""
        if self.dim < self.rank:
            raise GeometryError("facet normals need a full-dimensional cone")
        return tuple(cone_rays(self.generators, self.rank))

    def contains(self, x: Sequence) -> bool:
        if self.dim == self.rank:
            return all(dot(m, x) >= 0 for m in self.facet_normals)
        return in_cone(x, self.generators)

    def is_strongly_convex(self) -> bool:
        return not any(in_cone([-c for c in g], self.generators) for g in self.generators)

    def validate(self) -> None:
        if not self.is_strongly_convex():
            raise GeometryError(f"cone {self.generators} is not strongly convex")
        for i, g in enumerate(self.generators):
            others = self.generators[:i] + self.generators[i + 1:]
            if others and in_cone(g, others):
                raise GeometryError(f"generator {g} is not an extreme ray")


@dataclass(frozen=True)
class Fan:
    """Fan given by primitive rays and maximal cones (tuples of ray indices)."""

    rays: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, rays, cones) -> "Fan":
        rays = tuple(tuple(int(c) for c in r) for r in rays)
        for r in rays:
            if primitive(r) != r:
                raise GeometryError(f"ray {r} is not primitive")
        return cls(rays, tuple(tuple(sorted(c)) for c in cones))

    @property
    def rank(self) -> int:
        return len(self.rays[0])

    @cached_property
    def _cones(self) -> tuple[Cone, ...]:
        return tuple(Cone(tuple(self.rays[j] for j in c), self.rank) for c in self.cones)

    def cone(self, i: int) -> Cone:
        return self._cones[i]

    def ray_index(self, ray: Sequence[int]) -> int:
        return self.rays.index(tuple(ray))

    def cones_containing(self, ray_index: int) -> list[int]:
        return [i for i, c in enumerate(self.cones) if ray_index in c]

    def locate(self, x: Sequence) -> int:
        """Index of a maximal cone containing x."""
        for i in range(len(self.cones)):
            if self.cone(i).contains(x):
                return i
        raise GeometryError(f"{tuple(x)} is outside the support of the fan")

    def facets(self) -> dict[frozenset, list[int]]:
        """Codimension-one faces of maximal cones, mapped to the cones owning them."""
        out: dict[frozenset, list[int]] = {}
        for i, c in enumerate(self.cones):
            cone = self.cone(i)
            for m in cone.facet_normals:
                face = frozenset(j for j in c if dot(m, self.rays[j]) == 0)
                out.setdefault(face, []).append(i)
        return out

    def walls(self) -> list[tuple[frozenset, int, int]]:
        return [(f, *owners) for f, owners in self.facets().items() if len(owners) == 2]

    def is_complete(self, samples: int = 64, seed: int = 0) -> bool:
        """Wall pairing plus a covering test on random integer directions."""
        if any(len(o) != 2 for o in self.facets().values()):
            return False
        rng = random.Random(seed)
        for _ in range(samples):
            x = [rng.randint(-97, 97) for _ in range(self.rank)]
            try:
                self.locate(x)
            except GeometryError:
                return False
        return True

    def validate(self) -> None:
        """Cones strongly convex, full-dimensional, and meeting along common faces."""
        for i in range(len(self.cones)):
            cone = self.cone(i)
            cone.validate()
            if cone.dim != self.rank:
                raise GeometryError(f"maximal cone {i} is not full-dimensional")
        for i, j in combinations(range(len(self.cones)), 2):
            if not self._meet_in_face(i, j):
                raise GeometryError(f"cones {i} and {j} do not meet in a common face")

    def _meet_in_face(self, i: int, j: int) -> bool:
        ci, cj = self.cone(i), self.cone(j)
        common = set(self.cones[i]) & set(self.cones[j])
        ineqs = list(ci.facet_normals) + list(cj.facet_normals)
        try:
            meet = cone_rays(ineqs, self.rank)
        except GeometryError:
            return False
        if any(tuple(r) not in {self.rays[k] for k in common} for r in meet):
            return False
        for c, cone in ((self.cones[i], ci), (self.cones[j], cj)):
            normals = [m for m in cone.facet_normals
                       if all(dot(m, self.rays[k]) == 0 for k in common)]
            face = {k for k in c if all(dot(m, self.rays[k]) == 0 for m in normals)}
            if face != common:
                return False
        return True

    def is_smooth(self) -> bool:
        return all(len(c) == self.rank and abs(int_det([self.rays[k] for k in c])) == 1
                   for c in self.cones)


def linear_form_on(rays: Sequence[Sequence[int]], values: Sequence) -> tuple[Fraction, ...] | None:
    """The linear form taking the given values on the given spanning rays, if any."""
    d = len(rays[0])
    idx = _independent_rows([list(r) for r in rays], d)
    if len(idx) < d:
        raise GeometryError("rays do not span the ambient space")
    form = solve([rays[i] for i in idx], [Fraction(values[i]) for i in idx])
    if any(dot(form, r) != v for r, v in zip(rays, values)):
        return None
    return tuple(form)


@dataclass(frozen=True)
class PLFunction:
    """Function on the support of a fan, linear on every maximal cone."""

    fan: Fan
    values: tuple[Fraction, ...]
    forms: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_ray_values(cls, fan: Fan, values: Sequence) -> "PLFunction":
        values = tuple(Fraction(v) for v in values)
        forms = []
        for i, c in enumerate(fan.cones):
            form = linear_form_on([fan.rays[k] for k in c], [values[k] for k in c])
            if form is None:
                raise GeometryError(f"values are not linear on cone {i}")
            forms.append(form)
        return cls(fan, values, tuple(forms))

    def __call__(self, x: Sequence) -> Fraction:
        return dot(self.forms[self.fan.locate(x)], x)

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return PLFunction.from_ray_values(self.fan, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return PLFunction.from_ray_values(self.fan, [a - b for a, b in zip(self.values, other.values)])

    def scale(self, c) -> "PLFunction":
        return PLFunction.from_ray_values(self.fan, [c * v for v in self.values])


@dataclass(frozen=True)
class MinFunction:
    """Chart data for a function equal to a minimum of linear forms on each maximal cone."""

    forms: tuple[tuple[tuple, ...], ...]

    def value(self, cone_index: int, x: Sequence) -> Fraction:
        return min(Fraction(dot(f, x)) for f in self.forms[cone_index])


def refine_fan(fan: Fan, functions: Sequence[MinFunction]) -> tuple[Fan, list[PLFunction]]:
    """Coarsest common refinement on which every function is linear.

    Each maximal cone is cut into the full-dimensional regions where a fixed
    form attains the minimum, simultaneously for all functions.  New rays are
    primitive and listed after the original ones in lexicographic order.
    """
    d = fan.rank
    cells: list[list[tuple]] = []
    for i in range(len(fan.cones)):
        cone = fan.cone(i)
        if not cone.is_strongly_convex():
            raise GeometryError(f"cone {i} is not strongly convex")
        pieces = [list(cone.facet_normals)]
        for fn in functions:
            forms = sorted({tuple(Fraction(v) for v in f) for f in fn.forms[i]})
            if not forms:
                raise GeometryError(f"function has no linear pieces on cone {i}")
            refined = []
            for ineqs in pieces:
                for f in forms:
                    cut = ineqs + [tuple(g - h for g, h in zip(other, f)) for other in forms if other != f]
                    rays = cone_rays(cut, d)
                    if rays and rank(rays) == d:
                        refined.append(cut)
            pieces = refined
        for ineqs in pieces:
            cells.append(cone_rays(ineqs, d))
    new = sorted({r for cell in cells for r in cell} - set(fan.rays))
    rays = tuple(fan.rays) + tuple(new)
    index = {r: k for k, r in enumerate(rays)}
    cones = sorted({tuple(sorted(index[r] for r in cell)) for cell in cells})
    refined_fan = Fan(rays, tuple(cones))
    pls = []
    for fn in functions:
        values = []
        for r in rays:
            home = next(k for k, c in enumerate(fan.cones) if fan.cone(k).contains(r))
            values.append(fn.value(home, r))
        pls.append(PLFunction.from_ray_values(refined_fan, values))
    return refined_fan, pls


@dataclass(frozen=True)
class Verdict:
    passed: bool
    strict: bool
    witness: tuple[int, int] | None = None  # (cone index, ray index) violating the test
    gap: Fraction | None = None


def convexity_test(fan: Fan, f: PLFunction, strict: bool = False) -> Verdict:
    """Convexity (f >= every cone's linear form at every ray) with a witness on failure.

    For fans with convex support this is equivalent to the local wall-crossing
    condition; strict convexity asks for a positive gap at every ray outside the cone.
    """
    if f.fan is not fan and f.fan != fan:
        raise GeometryError("function lives on a different fan")
    worst = None
    for i, c in enumerate(fan.cones):
        form = f.forms[i]
        members = set(c)
        for k, ray in enumerate(fan.rays):
            if k in members:
                continue
            gap = f.values[k] - dot(form, ray)
            bad = gap <= 0 if strict else gap < 0
            if bad and (worst is None or gap < worst[2]):
                worst = (i, k, gap)
    if worst is None:
        return Verdict(True, strict)
    return Verdict(False, strict, (worst[0], worst[1]), worst[2])


@dataclass(frozen=True)
class RationalPolytope:
    """Bounded polytope {x : <a_i, x> + c_i >= 0} with its vertex list."""

    normals: tuple[tuple[Fraction, ...], ...]
    offsets: tuple[Fraction, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    dim_ambient: int

    @classmethod
    def from_halfspaces(cls, normals: Sequence[Sequence], offsets: Sequence) -> "RationalPolytope":
        d = len(normals[0])
        rows = []
        seen = set()
        for a, c in zip(normals, offsets):
            key = (tuple(Fraction(x) for x in a), Fraction(c))
            if key not in seen and any(key[0]):
                seen.add(key)
                rows.append(key)
        A = [r[0] for r in rows]
        if rank(A) < d or cone_rays(A, d):
            raise GeometryError("polytope is unbounded")
        verts = set()
        for sub in combinations(range(len(rows)), d):
            x = solve([A[i] for i in sub], [-rows[i][1] for i in sub])
            if x is None:
                continue
            if all(dot(a, x) + c >= 0 for a, c in rows):
                verts.add(tuple(x))
        if not verts:
            raise GeometryError("polytope is empty")
        return cls(tuple(A), tuple(r[1] for r in rows), tuple(sorted(verts)), d)

    @classmethod
    def from_vertices(cls, points: Sequence[Sequence]) -> "RationalPolytope":
        pts = sorted({tuple(Fraction(x) for x in p) for p in points})
        d = len(pts[0])
        k = affine_rank(pts)
        p0 = pts[0]
        diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
        normals: list[tuple] = []
        offsets: list[Fraction] = []
        for e in nullspace(diffs, d) if diffs else [[Fraction(int(i == j)) for i in range(d)] for j in range(d)]:
            c = -dot(e, p0)
            normals += [tuple(e), tuple(-x for x in e)]
            offsets += [c, -c]
        if k > 0:
            coords = _independent_rows([list(col) for col in zip(*diffs)], k)
            proj = [tuple(p[i] for i in coords) for p in pts]
            for a, c in _facets_full(proj, k):
                lifted = [Fraction(0)] * d
                for i, ai in zip(coords, a):
                    lifted[i] = ai
                normals.append(tuple(lifted))
                offsets.append(c)
        P = cls.from_halfspaces(normals, offsets)
        return P

    @property
    def dim(self) -> int:
        return affine_rank(self.vertices)

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) + c >= 0 for a, c in zip(self.normals, self.offsets))

    def scaled(self, m) -> "RationalPolytope":
        m = Fraction(m)
        return RationalPolytope(self.normals, tuple(c * m for c in self.offsets),
                                tuple(tuple(m * x for x in v) for v in self.vertices), self.dim_ambient)

    def check_consistency(self) -> None:
        """Both descriptions define the same set (vertices satisfy halfspaces and are extreme)."""
        if any(not self.contains(v) for v in self.vertices):
            raise GeometryError("a vertex violates a halfspace")
        again = RationalPolytope.from_halfspaces(self.normals, self.offsets)
        if set(again.vertices) != set(self.vertices):
            raise GeometryError("vertex and halfspace descriptions disagree")

    @cached_property
    def _tight(self) -> list[frozenset]:
        return [frozenset(i for i, v in enumerate(self.vertices) if dot(a, v) + c == 0)
                for a, c in zip(self.normals, self.offsets)]

    def triangulate(self, face: frozenset | None = None) -> list[tuple[int, ...]]:
        """Pulling triangulation of a face, coning from its lexicographically smallest vertex."""
        if face is None:
            face = frozenset(range(len(self.vertices)))
        k = affine_rank([self.vertices[i] for i in face])
        return self._pull(face, k)

    def _pull(self, face: frozenset, k: int) -> list[tuple[int, ...]]:
        if k == 0:
            return [(min(face),)]
        v0 = min(face, key=lambda i: self.vertices[i])
        out = []
        seen = set()
        for t in self._tight:
            sub = face & t
            if v0 in sub or sub in seen or not sub:
                continue
            if affine_rank([self.vertices[i] for i in sub]) != k - 1:
                continue
            seen.add(sub)
            out += [(v0,) + s for s in self._pull(sub, k - 1)]
        return out


def _facets_full(points, d):
    """Facet inequalities (a, c) with <a,x> + c >= 0 of a full-dimensional point set."""
    out = set()
    for sub in combinations(points, d):
        diffs = [[a - b for a, b in zip(p, sub[0])] for p in sub[1:]]
        ker = nullspace(diffs, d) if diffs else [[Fraction(1)]]
        if len(ker) != 1:
            continue
        a = primitive(ker[0])
        c = -dot(a, sub[0])
        vals = [dot(a, p) + c for p in points]
        if all(v >= 0 for v in vals):
            out.add((a, c))
        elif all(v <= 0 for v in vals):
            out.add((tuple(-x for x in a), -c))
    return sorted(out)


def _integer_rows(P: RationalPolytope):
    A, b = [], []
    for a, c in zip(P.normals, P.offsets):
        den = 1
        for x in list(a) + [c]:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        A.append([int(x * den) for x in a])
        b.append(int(c * den))
    return A, b


def bounding_box(P: RationalPolytope) -> tuple[list[int], list[int]]:
    lo = [ceil(min(v[i] for v in P.vertices)) for i in range(P.dim_ambient)]
    hi = [floor(max(v[i] for v in P.vertices)) for i in range(P.dim_ambient)]
    return lo, hi


def lattice_points(P: RationalPolytope) -> list[tuple[int, ...]]:
    A, b = _integer_rows(P)
    lo, hi = bounding_box(P)
    return kernels.enumerate_points(A, b, lo, hi)


def count_lattice_points(P: RationalPolytope) -> int:
    A, b = _integer_rows(P)
    lo, hi = bounding_box(P)
    return kernels.count_points(A, b, lo, hi)


def normalized_volume(P: RationalPolytope) -> Fraction:
    """Euclidean volume (unit cube = 1); zero for lower-dimensional polytopes."""
    d = P.dim_ambient
    if P.dim < d:
        return Fraction(0)
    total = Fraction(0)
    for simplex in P.triangulate():
        v0 = P.vertices[simplex[0]]
        total += abs(det([[a - b for a, b in zip(P.vertices[i], v0)] for i in simplex[1:]]))
    return total / factorial(d)


def face_volume(P: RationalPolytope, normal: Sequence[int]) -> Fraction:
    """Lattice-normalized volume of the face minimizing <normal, .>; 0 if deficient."""
    d = P.dim_ambient
    w = tuple(int(x) for x in normal)
    if primitive(w) != w:
        raise GeometryError(f"normal {w} is not primitive")
    vals = [dot(w, v) for v in P.vertices]
    low = min(vals)
    face = frozenset(i for i, x in enumerate(vals) if x == low)
    if affine_rank([P.vertices[i] for i in face]) < d - 1:
        return Fraction(0)
    axis = next(i for i, x in enumerate(w) if x != 0)
    base = P.vertices[min(face)]
    apex = tuple(x + (1 if i == axis else 0) for i, x in enumerate(base))
    delta = abs(w[axis])
    total = Fraction(0)
    for simplex in P.triangulate(face):
        total += abs(det([[a - b for a, b in zip(P.vertices[i], apex)] for i in simplex]))
    return total / (factorial(d - 1) * delta)
