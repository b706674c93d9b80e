"""Exact checks of the polynomial identities used in the sign analysis of DF."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

S, T = sp.symbols("S T")


class IdentityError(RuntimeError):
    pass


@dataclass(frozen=True)
class PolyIdentityResult:
    n: int
    holds: bool
    gamma: tuple[Fraction, ...] = ()
    delta: tuple[tuple[Fraction, ...], ...] = ()
    m: tuple[int, ...] = ()
    s: int | None = None
    representable: bool = True
    attempts: int = 1
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        q = lambda x: f"{Fraction(x).numerator}/{Fraction(x).denominator}"
        out = {"n": self.n, "holds": self.holds}
        if self.gamma:
            out["gamma"] = [q(g) for g in self.gamma]
            out["delta"] = [[q(d) for d in row] for row in self.delta]
        if self.s is not None:
            out["s"] = self.s
            out["representable"] = self.representable
            out["m"] = list(self.m)
        return out


def _frac(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


def base_pattern(n: int) -> list[list[int]]:
    """delta_{i,j} = 0 if i + 1 <= j else 1, for 0 <= i <= n-1 and 1 <= j <= n-1."""
    return [[0 if i + 1 <= j else 1 for j in range(1, n)] for i in range(n)]


def verify_lemma_positivity(n: int, perturbation: Fraction = Fraction(1, 8), seed: int = 0,
                            max_attempts: int = 30) -> PolyIdentityResult:
    """Write sum_k S^{n-1-k}(S-T)^k as sum_i gamma_i prod_j (S - delta_ij T) with gamma > 0, 0 < delta < 1."""
    if n < 1:
        raise ValueError("n must be positive")
    target = sp.expand(sum(S ** (n - 1 - k) * (S - T) ** k for k in range(n)))
    if n == 1:
        return PolyIdentityResult(1, target == 1, (Fraction(1),), ((),))
    rng = random.Random(seed)
    eps = Fraction(perturbation)
    for attempt in range(1, max_attempts + 1):
        delta = []
        for row in base_pattern(n):
            out = []
            for b in row:
                # seeded offset in (0, eps], kept away from 0 and 1
                off = eps * Fraction(rng.randint(1, 16), 16)
                out.append(off if b == 0 else 1 - off)
            delta.append(out)
        basis = [sp.expand(sp.prod([S - sp.Rational(d.numerator, d.denominator) * T for d in row]))
                 for row in delta]
        gammas = sp.symbols(f"g0:{n}")
        combo = sp.expand(sum(g * b for g, b in zip(gammas, basis)))
        eqs = sp.Poly(combo - target, S, T).coeffs()
        sol = sp.solve(eqs, gammas, dict=True)
        if len(sol) == 1 and all(g in sol[0] for g in gammas):
            gamma = [_frac(sol[0][g]) for g in gammas]
            ok = all(0 < d < 1 for row in delta for d in row)
            if ok and all(g > 0 for g in gamma):
                check = sp.expand(sum(sp.Rational(g.numerator, g.denominator) * b
                                      for g, b in zip(gamma, basis)) - target)
                return PolyIdentityResult(n, check == 0, tuple(gamma), tuple(tuple(r) for r in delta),
                                          attempts=attempt, detail={"perturbation": eps})
        eps /= 2
    raise IdentityError(f"no positive solution for n={n} after {max_attempts} attempts")


def verify_lemma_positivity2(n: int, s: int | None = None) -> PolyIdentityResult:
    """(T-1)^n (T+n) = T^{n+1} - sum_i (n+1-i)(T-1)^{n-i} T^{i-1}, and T^s in the basis (T-1)^{n-i} T^{i-1}."""
    if n < 2:
        raise ValueError("n must be at least 2")
    lhs = sp.expand((T - 1) ** n * (T + n))
    rhs = sp.expand(T ** (n + 1) - sum((n + 1 - i) * (T - 1) ** (n - i) * T ** (i - 1) for i in range(1, n + 1)))
    holds = lhs == rhs
    if s is None:
        return PolyIdentityResult(n, holds)
    if not 0 < s <= n:
        raise ValueError("s must satisfy 0 < s <= n")
    basis = [sp.expand((T - 1) ** (n - i) * T ** (i - 1)) for i in range(1, n + 1)]
    # the basis spans polynomials of degree <= n - 1; certify independence first
    mat = sp.Matrix([[sp.Poly(b, T).coeff_monomial(T ** d) for d in range(n)] for b in basis])
    if mat.det() == 0:
        raise IdentityError("basis is linearly dependent")
    ms = sp.symbols(f"m1:{n + 1}")
    eqs = sp.Poly(sp.expand(sum(m * b for m, b in zip(ms, basis)) - T ** s), T).all_coeffs()
    sol = sp.solve(eqs, ms, dict=True)
    if not sol:
        return PolyIdentityResult(n, holds, s=s, representable=False,
                                  detail={"reason": f"T^{s} has degree above the span (<= {n - 1})"})
    m = [sol[0][x] for x in ms]
    integral = all(sp.Rational(x).q == 1 for x in m)
    m_int = tuple(int(x) for x in m) if integral else ()
    check = sp.expand(sum(x * b for x, b in zip(m, basis)) - T ** s) == 0
    return PolyIdentityResult(n, holds and check and integral, m=m_int, s=s)
