"""Exact exponent calculus for Hardy--Littlewood type inequalities.

Exponents are either :class:`fractions.Fraction` values or ``math.inf``.
Everything that decides a regime boundary is done in rational arithmetic;
floats only enter when a caller passes one, and are then converted exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from hllab.errors import DomainError

Exponent = Union[Fraction, float]

INF = math.inf
HALF = Fraction(1, 2)


def parse_exponent(value) -> Exponent:
    """Accept ``"4/3"``, ``"1.5"``, ``"inf"``, ints, floats or Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "+inf", "oo"):
            return INF
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse exponent {value!r}") from exc
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        if math.isnan(value) or math.isinf(value):
            raise DomainError(f"invalid exponent {value!r}")
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    raise DomainError(f"cannot parse exponent {value!r}")


def parse_exponent_list(text: str) -> tuple[Exponent, ...]:
    return tuple(parse_exponent(tok) for tok in text.split(",") if tok.strip())


def format_exponent(value) -> str:
    if value is None:
        return "none"
    if value == INF:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def recip(p: Exponent) -> Fraction:
    """1/p with 1/inf = 0."""
    if p == INF:
        return Fraction(0)
    return 1 / Fraction(p)


def from_recip(r: Fraction) -> Exponent:
    """Inverse of :func:`recip`: 0 maps to inf."""
    if r == 0:
        return INF
    return 1 / Fraction(r)


def _check_exponent(p, lo=1, name="exponent") -> Exponent:
    p = parse_exponent(p)
    if p != INF and p < lo:
        raise DomainError(f"{name} must be >= {lo}, got {format_exponent(p)}")
    return p


def harmonic_sum(p: Sequence) -> Fraction:
    """|1/p| = sum of 1/p_i, with 1/inf = 0."""
    return sum((recip(_check_exponent(pi, name="p_i")) for pi in p), Fraction(0))


@dataclass(frozen=True)
class SpaceSignature:
    """Problem data: m-linear maps X_{p_1} x ... x X_{p_m} -> X_s, coefficients in l_q."""

    m: int
    p: tuple
    s: Exponent
    q: Exponent
    field: str = "real"

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m}")
        p = tuple(_check_exponent(pi, name="p_i") for pi in self.p)
        if len(p) != self.m:
            raise DomainError(f"expected {self.m} domain exponents, got {len(p)}")
        s = _check_exponent(self.s, name="s")
        q = _check_exponent(self.q, name="q")
        if s == INF:
            raise DomainError("codomain exponent s must be finite")
        if q < s:
            raise DomainError("need s <= q")
        if self.field not in ("real", "complex"):
            raise DomainError(f"field must be 'real' or 'complex', got {self.field!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "q", q)

    @classmethod
    def uniform(cls, m, p, s, q, field="real"):
        return cls(m, (p,) * m, s, q, field)

    @property
    def harmonic(self) -> Fraction:
        return harmonic_sum(self.p)


class Regime(str, enum.Enum):
    R1 = "R1"  # s <= q <= 2, lambda < 2
    R2 = "R2"  # s <= q <= 2, lambda >= 2, |1/p| <= 1/2
    R3 = "R3"  # s <= 2 <= q, lambda < 2
    R4 = "R4"  # s <= 2 <= q, lambda >= 2
    R5 = "R5"  # 2 <= s <= q
    GAP = "GAP"
    INFEASIBLE = "INFEASIBLE"


OPTIMAL_REGIMES = (Regime.R1, Regime.R2, Regime.R3, Regime.R4, Regime.R5)


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    lam: Exponent | None = None
    rho_optimal: Exponent | None = None
    rho_sufficient: Exponent | None = None
    rho_necessary_bound: Exponent | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "lambda": format_exponent(self.lam) if self.lam is not None else None,
            "rho": format_exponent(self.rho_optimal) if self.rho_optimal is not None else None,
            "rho_sufficient": (
                format_exponent(self.rho_sufficient) if self.rho_sufficient is not None else None
            ),
            "rho_necessary_bound": (
                format_exponent(self.rho_necessary_bound)
                if self.rho_necessary_bound is not None
                else None
            ),
            "note": self.note,
        }


def inv_lambda(sig: SpaceSignature) -> Fraction:
    """1/2 + 1/s - 1/min(q,2) - |1/p|, not truncated at zero."""
    return HALF + recip(sig.s) - recip(min(sig.q, 2)) - sig.harmonic


def lambda_of(sig: SpaceSignature) -> Fraction | None:
    v = inv_lambda(sig)
    if v <= 0:
        return None
    return 1 / v


def unified_inv_rho(m: int, lam: Fraction, s: Exponent) -> Fraction:
    """(1/lambda + (m-1)/max(lambda, s, 2)) / m."""
    cap = max(lam, s, 2)
    return (1 / Fraction(lam) + (m - 1) * recip(cap)) / m


def table_inv_rho(sig: SpaceSignature, regime: Regime) -> Fraction:
    """Row formula of the optimal-exponent table for 1/rho."""
    m, h = sig.m, sig.harmonic
    rs, rq = recip(sig.s), recip(sig.q)
    if regime is Regime.R1:
        return HALF + rs / m - rq / m - h / m
    if regime is Regime.R2:
        return HALF + rs - rq - h
    if regime is Regime.R3:
        return Fraction(m - 1, 2 * m) + rs / m - h / m
    if regime in (Regime.R4, Regime.R5):
        return rs - h
    raise DomainError(f"no table row for regime {regime.value}")


def gap_inv_rho_sufficient(s: Exponent, q: Exponent, h: Fraction) -> Fraction:
    """Interpolated sufficient bound in the gap region, (1/s-1/q)(1/s-h)/(1/s-1/2)."""
    rs, rq = recip(s), recip(q)
    if s == 1:
        return 2 * (1 - h) * (1 - rq)
    return (rs - rq) * (rs - h) / (rs - HALF)


def gap_inv_rho_necessary(s: Exponent, q: Exponent, h: Fraction) -> Fraction:
    rs, rq = recip(s), recip(q)
    bound = 2 * (1 - h) * (rs - rq)
    if 1 < s < 2:
        bound = min(bound, rs - h)
    return bound


def classify(sig: SpaceSignature) -> RegimeReport:
    """Place ``sig`` in the optimal-exponent table and fill in the exponents."""
    h = sig.harmonic
    rs = recip(sig.s)
    lam = lambda_of(sig)

    if h >= rs:
        # diagonal map: bounded, yet n coefficients of l_q-norm 1
        return RegimeReport(Regime.INFEASIBLE, lam, note="|1/p| >= 1/s: diagonal map obstructs every rho")

    if sig.q <= 2 and h > HALF:
        if sig.s == sig.q:
            return RegimeReport(Regime.INFEASIBLE, lam, note="s = q: necessary bound forces 1/rho <= 0")
        suff = gap_inv_rho_sufficient(sig.s, sig.q, h)
        necc = gap_inv_rho_necessary(sig.s, sig.q, h)
        return RegimeReport(
            Regime.GAP,
            lam,
            rho_sufficient=from_recip(suff),
            rho_necessary_bound=from_recip(necc),
            note="exact when s = 1" if sig.s == 1 else "sufficient and necessary bounds differ",
        )

    if lam is None:
        return RegimeReport(Regime.INFEASIBLE, None, note="1/lambda <= 0")

    if sig.q <= 2:
        regime = Regime.R1 if lam < 2 else Regime.R2
    elif sig.s <= 2:
        regime = Regime.R3 if lam < 2 else Regime.R4
    else:
        regime = Regime.R5
    rho = from_recip(unified_inv_rho(sig.m, lam, sig.s))
    return RegimeReport(regime, lam, rho, rho, rho)


@dataclass(frozen=True)
class TupleCheck:
    ok: bool
    slack: Fraction
    budget: Fraction
    interval: tuple
    violations: list = field(default_factory=list)


def check_tuple(sig: SpaceSignature, t: Sequence) -> TupleCheck:
    """Is ``t`` an admissible mixed exponent for ``sig``? ``slack`` = budget - sum 1/t_i."""
    lam = lambda_of(sig)
    if lam is None:
        raise DomainError("no admissible tuples: 1/lambda <= 0")
    t = tuple(_check_exponent(ti, name="t_i") for ti in t)
    if len(t) != sig.m:
        raise DomainError(f"expected {sig.m} exponents, got {len(t)}")
    cap = max(lam, sig.s, Fraction(2))
    budget = 1 / lam + (sig.m - 1) * recip(cap)
    slack = budget - sum((recip(ti) for ti in t), Fraction(0))
    violations = []
    for i, ti in enumerate(t):
        if ti < lam or ti > cap:
            violations.append(f"t_{i + 1}={format_exponent(ti)} outside [{format_exponent(lam)}, {format_exponent(cap)}]")
    if slack < 0:
        violations.append(f"sum of 1/t_i exceeds budget by {format_exponent(-slack)}")
    return TupleCheck(not violations, slack, budget, (lam, cap), violations)


def generic_tuple_bound(m: int, r, q_cotype, p: Sequence) -> tuple[Fraction, Exponent, Fraction]:
    """(lambda, max(lambda, q), budget) for an (r,1)-summing v into a cotype-q space."""
    r = _check_exponent(r, name="r")
    q_cotype = _check_exponent(q_cotype, lo=2, name="cotype q")
    if r > q_cotype:
        raise DomainError("need r <= q")
    if len(p) != m:
        raise DomainError(f"expected {m} domain exponents, got {len(p)}")
    inv = recip(r) - harmonic_sum(p)
    if inv <= 0:
        raise DomainError("lambda undefined: 1/r <= |1/p|")
    lam = 1 / inv
    cap = max(lam, q_cotype)
    return lam, cap, inv + (m - 1) * recip(cap)


def bennett_carl_r(s, q) -> Exponent:
    """Optimal r with l_s -> l_q (r,1)-summing: 1/r = 1/2 + 1/s - 1/min(2,q)."""
    s = _check_exponent(s, name="s")
    q = _check_exponent(q, name="q")
    if s > q:
        raise DomainError("need s <= q")
    return from_recip(HALF + recip(s) - recip(min(q, 2)))


def cotype_rho(m: int, p: Sequence, q_x) -> Exponent | None:
    """rho with 1/rho = 1/q_X - |1/p|, or None when that is not positive."""
    q_x = _check_exponent(q_x, lo=2, name="q_X")
    p = tuple(_check_exponent(pi, name="p_i") for pi in p)
    if len(p) != m:
        raise DomainError(f"expected {m} domain exponents, got {len(p)}")
    if any(pi < 2 for pi in p):
        raise DomainError("cotype criterion needs every p_i >= 2")
    inv = recip(q_x) - harmonic_sum(p)
    if inv <= 0:
        return None
    return 1 / inv


def cotype_strict_sufficient(m: int, p: Sequence, q_x, rho) -> bool:
    """m/rho < 1/q_X - |1/p|: sufficient when X need not attain its cotype."""
    q_x = _check_exponent(q_x, lo=2, name="q_X")
    rho = _check_exponent(rho, name="rho")
    return m * recip(rho) < recip(q_x) - harmonic_sum(p)


def interpolate_tuples(corners: Sequence[Sequence], weights: Sequence) -> tuple:
    if not corners:
        raise DomainError("need at least one corner")
    if len(corners) != len(weights):
        raise DomainError("one weight per corner")
    m = len(corners[0])
    if any(len(c) != m for c in corners):
        raise DomainError("corner length mismatch")
    w = [Fraction(x) for x in weights]
    if any(x < 0 for x in w):
        raise DomainError("negative weight")
    if sum(w) != 1:
        raise DomainError(f"weights sum to {format_exponent(sum(w))}, not 1")
    out = []
    for j in range(m):
        out.append(from_recip(sum((wk * recip(parse_exponent(c[j])) for wk, c in zip(w, corners)), Fraction(0))))
    return tuple(out)


def permuted_corners(m: int, lam, q) -> list[tuple]:
    """(lam, q, ..., q), (q, lam, q, ..., q), ..., (q, ..., q, lam)."""
    lam, q = parse_exponent(lam), parse_exponent(q)
    return [tuple(lam if j == k else q for j in range(m)) for k in range(m)]


def bh_exponent(k: int, r, q) -> Exponent:
    """s_k = kqr / (q + (k-1)r), i.e. 1/s_k = (1/r + (k-1)/q) / k."""
    return from_recip((recip(parse_exponent(r)) + (k - 1) * recip(parse_exponent(q))) / k)


def staircase_corners(m: int, r, q) -> list[tuple]:
    """alpha_k = (s_k repeated k times, then q); theta-weights interpolate between them."""
    q = parse_exponent(q)
    return [tuple(bh_exponent(k, r, q) if j < k else q for j in range(m)) for k in range(1, m + 1)]


def theta_weights(m: int, r, q, q_tuple: Sequence) -> list[Fraction]:
    r, q = parse_exponent(r), parse_exponent(q)
    if not r < q:
        raise DomainError("need r < q")
    qt = tuple(parse_exponent(x) for x in q_tuple)
    if len(qt) != m:
        raise DomainError(f"expected {m} exponents, got {len(qt)}")
    if any(b < a for a, b in zip(qt, qt[1:])):
        raise DomainError("q_tuple must be sorted ascending")
    if any(x < r or x > q for x in qt):
        raise DomainError("q_tuple entries must lie in [r, q]")
    if sum((recip(x) for x in qt), Fraction(0)) != recip(r) + (m - 1) * recip(q):
        raise DomainError("q_tuple is not balanced: sum 1/q_k != 1/r + (m-1)/q")
    scale = 1 / (recip(r) - recip(q))
    theta = [k * scale * (recip(qt[k - 1]) - recip(qt[k])) for k in range(1, m)]
    theta.append(m * scale * (recip(qt[-1]) - recip(q)))
    return theta
