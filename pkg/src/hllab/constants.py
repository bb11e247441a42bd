"""Numeric constant bounds: Khintchine constants and Bohnenblust--Hille type constants."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from scipy.optimize import brentq

from hllab.errors import DomainError
from hllab.exponents import bh_exponent, parse_exponent, recip, theta_weights

P0_PRINTED = 1.847


def _real_low(p: float) -> float:
    return 2.0 ** (1.0 / p - 0.5)


def _real_high(p: float) -> float:
    return (math.gamma((1.0 + p) / 2.0) / math.sqrt(math.pi)) ** (-1.0 / p) / math.sqrt(2.0)


@functools.lru_cache(maxsize=None)
def khintchine_crossover() -> float:
    """Root p_0 in (1.5, 1.95) where the two real-branch formulas meet.

    The formulas also meet at p = 2, so the bracket has to stay clear of it.
    """
    f = lambda p: math.log(_real_low(p)) - math.log(_real_high(p))
    return brentq(f, 1.5, 1.95, xtol=1e-13, rtol=1e-15)


def khintchine(p, field: str = "real") -> float:
    """Best constant A_{K,p} in (sum |a_i|^2)^{1/2} <= A_{K,p} (E|sum a_i eps_i|^p)^{1/p}.

    Complex values follow the closed form Gamma((1+p)/2)^{-1/p} on 1 < p <= 2.
    """
    p = float(p)
    if field == "real":
        if not 0 < p <= 2:
            raise DomainError(f"real Khintchine constant needs 0 < p <= 2, got {p}")
        return _real_low(p) if p <= khintchine_crossover() else _real_high(p)
    if field == "complex":
        if not 1 < p <= 2:
            raise DomainError(f"complex Khintchine constant needs 1 < p <= 2, got {p}")
        return math.gamma((1.0 + p) / 2.0) ** (-1.0 / p)
    raise DomainError(f"unknown field {field!r}")


@dataclass(frozen=True)
class VectorConstantContext:
    """Data for vector-valued constants.

    ``kahane(p, q)`` must return a Kahane constant K_{p,q}; only q = 2 is used here.
    """

    q: Fraction | float
    C_qY: float
    pi_r1: float
    r: Fraction | float
    kahane: Callable[[float, float], float]

    def __post_init__(self):
        q, r = parse_exponent(self.q), parse_exponent(self.r)
        if self.C_qY < 1:
            raise DomainError("cotype constant C_q(Y) must be >= 1")
        if self.pi_r1 <= 0:
            raise DomainError("pi_{r,1}(v) must be positive")
        if not 1 <= r <= q:
            raise DomainError("need 1 <= r <= q")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    def s_k(self, k: int):
        return bh_exponent(k, self.r, self.q)


def scalar_context(field: str = "complex", a_c1: float | None = None) -> VectorConstantContext:
    """X = Y = K, r = 1, q = 2: Kahane constants reduce to Khintchine constants.

    ``a_c1`` supplies the complex constant at p = 1, which the closed form leaves out.
    """

    def kahane(p, q):
        if q != 2:
            raise DomainError("scalar context only provides K_{p,2}")
        if field == "complex" and p == 1:
            if a_c1 is None:
                raise DomainError("complex Khintchine constant at p = 1 not available; pass a_c1")
            return a_c1
        return khintchine(p, field)

    return VectorConstantContext(q=Fraction(2), C_qY=1.0, pi_r1=1.0, r=Fraction(1), kahane=kahane)


def theorem61_constant(m: int, ctx: VectorConstantContext) -> float:
    """(sqrt(2) C_q(Y))^{m-1} pi_{r,1}(v)."""
    if m < 1:
        raise DomainError("m must be >= 1")
    return (math.sqrt(2.0) * ctx.C_qY) ** (m - 1) * ctx.pi_r1


def bh_recursion(m: int, k: int, ctx: VectorConstantContext, c_k: float) -> float:
    """One step C_{Y,m} <= (C_q(Y) K_{s_k,2})^{m-k} C_{Y,k}."""
    if not 1 <= k < m:
        raise DomainError(f"need 1 <= k < m, got k={k}, m={m}")
    factor = ctx.C_qY * ctx.kahane(float(ctx.s_k(k)), 2.0)
    return factor ** (m - k) * c_k


def best_recursion(m: int, ctx: VectorConstantContext, table: Sequence[float]) -> tuple[int, float]:
    """Minimise the recursion over k; ``table[k-1]`` holds C_{Y,k} for k < m."""
    if len(table) < m - 1:
        raise DomainError(f"need C_{{Y,k}} for k = 1..{m - 1}")
    return min(((k, bh_recursion(m, k, ctx, table[k - 1])) for k in range(1, m)), key=lambda kv: kv[1])


def bh_table(m: int, ctx: VectorConstantContext, base: float = 1.0) -> list[float]:
    """C_{Y,1..m} built by repeated best_recursion from C_{Y,1} = base."""
    table = [base]
    for j in range(2, m + 1):
        table.append(best_recursion(j, ctx, table)[1])
    return table


def _complex_bh_product(m: int) -> float:
    # log-space; the j = 1 factor is Gamma(1)^(...) = 1
    return math.exp(sum(j / (2.0 - 2.0 * j) * math.lgamma(2.0 - 1.0 / j) for j in range(2, m + 1)))


def bh_constant_classic(m: int, field: str = "complex") -> float:
    """Upper bound for the scalar Bohnenblust--Hille constant C_{K,m}."""
    if int(m) != m or m < 1:
        raise DomainError("m must be a positive integer")
    if field == "complex":
        return _complex_bh_product(m)
    if field == "real":
        return bh_table(m, scalar_context("real"))[-1]
    raise DomainError(f"unknown field {field!r}")


def interpolated_constant(q_tuple: Sequence, ctx: VectorConstantContext, c_table: Sequence[float]) -> float:
    """prod_k ((C_q(Y) K_{s_k,2})^{m-k} C_{Y,k})^{theta_k} for a sorted balanced tuple.

    Factors whose weight theta_k vanishes are skipped, so their Kahane constant
    is never evaluated.
    """
    m = len(q_tuple)
    theta = theta_weights(m, ctx.r, ctx.q, q_tuple)
    if len(c_table) < m:
        raise DomainError(f"need C_{{Y,k}} for k = 1..{m}")
    value = 1.0
    for k, th in enumerate(theta, start=1):
        if th == 0:
            continue
        factor = c_table[k - 1]
        if k < m:
            factor = bh_recursion(m, k, ctx, factor)
        value *= factor ** float(th)
    return value


def touches_complex_p1(q_tuple: Sequence) -> bool:
    """True when the k = 1 factor (Khintchine at p = 1) carries nonzero weight."""
    if len(q_tuple) < 2:
        return False
    return recip(parse_exponent(q_tuple[0])) != recip(parse_exponent(q_tuple[1]))


def mixed_exponent_constant(q_tuple: Sequence, field: str = "complex", a_c1: float | None = None) -> float:
    """Constant for the multiple-exponent scalar inequality, sum 1/q_k = (m+1)/2."""
    qt = tuple(parse_exponent(x) for x in q_tuple)
    m = len(qt)
    if m < 1:
        raise DomainError("empty exponent tuple")
    if any(not 1 <= x <= 2 for x in qt):
        raise DomainError("entries must lie in [1, 2]")
    if sum((recip(x) for x in qt), Fraction(0)) != Fraction(m + 1, 2):
        raise DomainError("unbalanced tuple: sum 1/q_k != (m+1)/2")
    if m == 1:
        return 1.0
    ctx = scalar_context(field, a_c1)
    table = [bh_constant_classic(k, field) for k in range(1, m + 1)]
    return interpolated_constant(qt, ctx, table)


def c_qs(s, q):
    """Target exponent c_{qs} of the inclusion used for the constant: q, 2 or s."""
    s, q = parse_exponent(s), parse_exponent(q)
    if s > q:
        raise DomainError("need s <= q")
    if q <= 2:
        return q
    if s <= 2:
        return Fraction(2)
    return s
