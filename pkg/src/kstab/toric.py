"""Toric Fano varieties, their anticanonical polytopes, and the built-in corpus."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from math import factorial, lcm
from typing import Sequence

from ._linalg import dot
from .lattice import (Fan, GeometryError, PLFunction, RationalPolytope, convexity_test,
                      count_lattice_points, normalized_volume)

CORPORA = ("smooth-del-pezzo-toric", "reflexive-polygons-16", "threefolds-basic")


class NotFanoError(GeometryError):
    pass


@dataclass(frozen=True)
class ToricFanoVariety:
    name: str
    fan: Fan

    @classmethod
    def from_json(cls, data: dict) -> "ToricFanoVariety":
        X = cls(data.get("name", "unnamed"), Fan.of(data["rays"], data["max_cones"]))
        X.validate()
        return X

    def to_json(self) -> dict:
        return {"name": self.name, "rays": [list(r) for r in self.fan.rays],
                "max_cones": [list(c) for c in self.fan.cones]}

    @property
    def n(self) -> int:
        return self.fan.rank

    @property
    def rays(self):
        return self.fan.rays

    @cached_property
    def Q(self) -> RationalPolytope:
        return anticanonical_polytope(self)

    @cached_property
    def psi(self) -> PLFunction:
        """Support function of -K: value 1 on every ray."""
        return PLFunction.from_ray_values(self.fan, [1] * len(self.fan.rays))

    @cached_property
    def chart_vertices(self) -> tuple[tuple[Fraction, ...], ...]:
        """For each maximal cone, the vertex q of Q with <q, v> = -1 on its rays."""
        return tuple(tuple(-c for c in form) for form in self.psi.forms)

    @property
    def is_gorenstein(self) -> bool:
        return all(x.denominator == 1 for v in self.Q.vertices for x in v)

    @property
    def gorenstein_index(self) -> int:
        return lcm(*[x.denominator for v in self.Q.vertices for x in v])

    @property
    def is_smooth(self) -> bool:
        return self.fan.is_smooth()

    def is_projective_space(self) -> bool:
        return self.is_smooth and len(self.fan.rays) == self.n + 1

    @cached_property
    def degree(self) -> Fraction:
        """Anticanonical degree (-K)^n = n! vol(Q)."""
        return factorial(self.n) * normalized_volume(self.Q)

    def validate(self) -> None:
        self.fan.validate()
        if not self.fan.is_complete():
            raise GeometryError(f"{self.name}: fan is not complete")
        verdict = convexity_test(self.fan, self.psi, strict=True)
        if not verdict.passed:
            raise NotFanoError(f"{self.name}: -K is not ample (witness {verdict.witness})")
        self.Q.check_consistency()


def anticanonical_polytope(X: ToricFanoVariety) -> RationalPolytope:
    """Q = {x : <x, v> >= -1 for every ray v}."""
    try:
        Q = RationalPolytope.from_halfspaces(X.fan.rays, [1] * len(X.fan.rays))
    except GeometryError as exc:
        raise NotFanoError(f"{X.name}: not Fano ({exc})") from exc
    if not Q.contains([0] * X.n) or any(dot(a, [0] * X.n) + c <= 0 for a, c in zip(Q.normals, Q.offsets)):
        raise NotFanoError(f"{X.name}: origin is not interior to Q")
    return Q


def section_count(X: ToricFanoVariety, m: int) -> int:
    """dim H^0(X, -mK) = #(mQ cap M)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m % X.gorenstein_index:
        raise ValueError(f"{X.name}: m={m} is not a multiple of the Gorenstein index")
    return count_lattice_points(X.Q.scaled(m))


@dataclass(frozen=True)
class TInvariantDivisor:
    """sum d_rho D_rho, a member of |-mK| certified by u with d_rho = m + <u, v_rho>."""

    coefficients: tuple[Fraction, ...]
    m: int
    witness: tuple[int, ...] | None = None

    @classmethod
    def from_character(cls, X: ToricFanoVariety, u: Sequence[int], m: int) -> "TInvariantDivisor":
        return cls(tuple(Fraction(m + dot(u, v)) for v in X.rays), m, tuple(u))

    def validate(self, X: ToricFanoVariety) -> None:
        if self.m <= 0:
            raise ValueError("level m must be positive")
        if len(self.coefficients) != len(X.rays):
            raise ValueError("one coefficient per ray is required")
        if any(d < 0 for d in self.coefficients):
            raise ValueError("divisor is not effective")
        if self.witness is None:
            raise ValueError("linear-equivalence witness missing")
        if any(d != self.m + dot(self.witness, v) for d, v in zip(self.coefficients, X.rays)):
            raise ValueError("witness does not certify linear equivalence to -mK")


def _corpus_dir():
    return resources.files("kstab") / "data" / "corpus"


def load_corpus(name: str) -> list[ToricFanoVariety]:
    return list(_load_corpus(name))


@lru_cache(maxsize=None)
def _load_corpus(name: str) -> tuple[ToricFanoVariety, ...]:
    if name not in CORPORA:
        raise KeyError(f"unknown corpus {name!r}; choose from {', '.join(CORPORA)}")
    base = _corpus_dir()
    raw = (base / f"{name}.json").read_bytes()
    sums = json.loads((base / "SHA256SUMS.json").read_text())
    if hashlib.sha256(raw).hexdigest() != sums[name]:
        raise ValueError(f"corpus {name!r} failed its checksum")
    return tuple(ToricFanoVariety.from_json(entry) for entry in json.loads(raw))


def variety(name: str) -> ToricFanoVariety:
    """Look up a corpus variety by name (e.g. 'P2', 'P1xP1')."""
    for corpus in CORPORA:
        for X in load_corpus(corpus):
            if X.name == name:
                return X
    if name == "P1":
        return ToricFanoVariety.from_json({"name": "P1", "rays": [[1], [-1]], "max_cones": [[0], [1]]})
    raise KeyError(f"no corpus variety named {name!r}")
