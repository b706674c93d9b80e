"""Log canonical thresholds of invariant pairs, ideals, and toric Fano varieties."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ._linalg import dot
from .ideals import InvariantIdeal, IdealError, order_function
from .lattice import lattice_points
from .toric import TInvariantDivisor, ToricFanoVariety


@dataclass(frozen=True)
class LctResult:
    """Threshold value with the valuation realizing it; ``value is None`` means +infinity."""

    value: Fraction | None
    witness: dict[str, Any] = field(default_factory=dict)

    @property
    def infinite(self) -> bool:
        return self.value is None

    def to_json(self) -> dict:
        return {"value": "inf" if self.value is None else _q(self.value),
                "witness": {k: _jsonable(v) for k, v in self.witness.items()}}


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _jsonable(v):
    if isinstance(v, Fraction):
        return _q(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(c) for c in v]
    return v


def _argmin(candidates):
    """Smallest ratio; ties go to the lexicographically smallest ray."""
    return min(candidates, key=lambda t: (t[0], t[1]))


def lct_pair(X: ToricFanoVariety, D: TInvariantDivisor) -> LctResult:
    """lct(X, (1/m) D) = m / max d_rho for an invariant divisor."""
    D.validate(X)
    cands = [(Fraction(D.m) / d, ray) for ray, d in zip(X.rays, D.coefficients) if d > 0]
    if not cands:
        return LctResult(None, {"reason": "zero divisor"})
    value, ray = _argmin(cands)
    return LctResult(value, {"ray": ray})


def lct_ideal(X: ToricFanoVariety, I: InvariantIdeal) -> LctResult:
    """min of psi(w) / phi_I(w) over rays of the refined fan with phi_I(w) > 0."""
    if I.is_zero():
        raise IdealError("lct of the zero ideal is zero by convention; not supported")
    phi = order_function(X, I)
    cands = [(X.psi(w) / v, w) for w, v in zip(phi.fan.rays, phi.values) if v > 0]
    if not cands:
        return LctResult(None, {"reason": "unit ideal"})
    value, ray = _argmin(cands)
    return LctResult(value, {"ray": ray})


def global_lct(X: ToricFanoVariety) -> LctResult:
    """Torus-invariant global threshold 1 / (1 + max <q, v_rho>) over vertices q of Q."""
    best = None
    for q in sorted(X.Q.vertices):
        for ray in X.rays:
            val = dot(q, ray)
            if best is None or val > best[0]:
                best = (val, q, ray)
    val, q, ray = best
    return LctResult(1 / (1 + Fraction(val)), {"vertex": q, "ray": ray})


def lct_lower_oracle(X: ToricFanoVariety, m_max: int) -> LctResult:
    """Brute force over members of |-mK| for m <= m_max; an upper bound on global lct."""
    if m_max < 1:
        raise ValueError("m_max must be positive")
    if not X.is_gorenstein:
        raise ValueError(f"{X.name}: oracle requires a Gorenstein variety")
    best = None
    for m in range(1, m_max + 1):
        for u in lattice_points(X.Q.scaled(m)):
            top = max(m + dot(u, v) for v in X.rays)
            cand = Fraction(m, top)
            if best is None or cand < best[0]:
                best = (cand, m, u)
    value, m, u = best
    return LctResult(value, {"m": m, "character": u})


def threshold_gate(X: ToricFanoVariety, lct: LctResult | None = None) -> str:
    """'strict', 'boundary' or 'below' relative to n/(n+1)."""
    value = (lct or global_lct(X)).value
    bound = Fraction(X.n, X.n + 1)
    if value > bound:
        return "strict"
    return "boundary" if value == bound else "below"
