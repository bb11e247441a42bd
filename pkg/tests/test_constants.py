import math
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hllab import constants as C
from hllab.errors import DomainError
from hllab.exponents import INF

mpmath.mp.dps = 30


def mp_bh_complex(m):
    out = mpmath.mpf(1)
    for j in range(2, m + 1):
        out *= mpmath.gamma(2 - mpmath.mpf(1) / j) ** (mpmath.mpf(j) / (2 - 2 * j))
    return float(out)


def mp_khintchine(p, field):
    p = mpmath.mpf(p)
    if field == "complex":
        return float(mpmath.gamma((1 + p) / 2) ** (-1 / p))
    low = mpmath.mpf(2) ** (1 / p - mpmath.mpf(1) / 2)
    high = (mpmath.gamma((1 + p) / 2) / mpmath.sqrt(mpmath.pi)) ** (-1 / p) / mpmath.sqrt(2)
    return float(low if p <= C.khintchine_crossover() else high)


# -- Khintchine ------------------------------------------------------------------


def test_khintchine_examples():
    assert C.khintchine(1, "real") == pytest.approx(math.sqrt(2), rel=1e-15)
    assert C.khintchine(2, "real") == pytest.approx(1.0, rel=1e-15)
    assert C.khintchine(2, "complex") == pytest.approx(1.062251, abs=1e-6)


@pytest.mark.parametrize("p", [0.25, 0.5, 1.0, 1.3, 1.8, 1.85, 1.9, 1.99, 2.0])
def test_khintchine_real_oracle(p):
    assert C.khintchine(p, "real") == pytest.approx(mp_khintchine(p, "real"), rel=1e-12)


@pytest.mark.parametrize("p", [1.01, 1.2, 4 / 3, 1.5, 1.9, 2.0])
def test_khintchine_complex_oracle(p):
    assert C.khintchine(p, "complex") == pytest.approx(mp_khintchine(p, "complex"), rel=1e-12)


def test_crossover():
    p0 = C.khintchine_crossover()
    assert abs(p0 - C.P0_PRINTED) < 1e-3
    assert abs(C._real_low(p0) - C._real_high(p0)) < 1e-9
    # continuity across the branch switch
    eps = 1e-9
    assert abs(C.khintchine(p0 - eps) - C.khintchine(p0 + eps)) < 1e-6


@pytest.mark.parametrize("p, field", [(0, "real"), (2.5, "real"), (1, "complex"), (2.1, "complex"), (1.5, "quaternion")])
def test_khintchine_domain(p, field):
    with pytest.raises(DomainError):
        C.khintchine(p, field)


def test_khintchine_at_least_one_and_real_monotone():
    ps = np.linspace(0.05, 2.0, 400)
    real = [C.khintchine(p, "real") for p in ps]
    assert min(real) >= 1 - 1e-15
    assert all(b <= a + 1e-14 for a, b in zip(real, real[1:]))
    cplx = [C.khintchine(p, "complex") for p in np.linspace(1.001, 2.0, 200)]
    assert min(cplx) >= 1


# -- recursions ----------------------------------------------------------------------


def test_theorem61():
    ctx = C.VectorConstantContext(q=2, C_qY=1.0, pi_r1=3.5, r=1, kahane=lambda p, q: 1.0)
    assert C.theorem61_constant(1, ctx) == 3.5
    ctx = C.VectorConstantContext(q=2, C_qY=1.0, pi_r1=1.0, r=1, kahane=lambda p, q: 1.0)
    assert C.theorem61_constant(3, ctx) == pytest.approx(2.0, rel=1e-15)
    ctx = C.VectorConstantContext(q=2, C_qY=math.sqrt(2), pi_r1=2.0, r=1, kahane=lambda p, q: 1.0)
    assert C.theorem61_constant(2, ctx) == pytest.approx(4.0, rel=1e-15)


def test_context_invariants():
    with pytest.raises(DomainError):
        C.VectorConstantContext(q=2, C_qY=0.5, pi_r1=1.0, r=1, kahane=lambda p, q: 1.0)
    with pytest.raises(DomainError):
        C.VectorConstantContext(q=2, C_qY=1.0, pi_r1=0.0, r=1, kahane=lambda p, q: 1.0)
    with pytest.raises(DomainError):
        C.VectorConstantContext(q=2, C_qY=1.0, pi_r1=1.0, r=3, kahane=lambda p, q: 1.0)


def test_s_k_formula():
    ctx = C.scalar_context("real")
    # s_k = qrk / (q + (k-1) r) with r = 1, q = 2
    for k in range(1, 10):
        assert ctx.s_k(k) == F(2 * k, k + 1)


def test_recursion_real_first_step():
    # s_1 = 1, so the factor is the real Khintchine constant at p = 1
    assert C.bh_recursion(2, 1, C.scalar_context("real"), 1.0) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_recursion_complex_first_step_needs_a_c1():
    with pytest.raises(DomainError):
        C.bh_recursion(2, 1, C.scalar_context("complex"), 1.0)
    assert C.bh_recursion(2, 1, C.scalar_context("complex", a_c1=1.25), 1.0) == 1.25


def test_recursion_unit_factor():
    ctx = C.VectorConstantContext(q=2, C_qY=1.0, pi_r1=1.0, r=1, kahane=lambda p, q: 1.0)
    for m in range(2, 7):
        for k in range(1, m):
            assert C.bh_recursion(m, k, ctx, 2.75) == 2.75


def test_recursion_beats_naive():
    ctx = C.scalar_context("complex")
    value = C.bh_recursion(4, 2, ctx, C.bh_constant_classic(2, "complex"))
    assert value <= math.sqrt(2) ** 3


@pytest.mark.parametrize("k, m", [(0, 3), (3, 3), (4, 3)])
def test_recursion_domain(k, m):
    with pytest.raises(DomainError):
        C.bh_recursion(m, k, C.scalar_context("real"), 1.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10), st.integers(0, 10), st.floats(1.0, 5.0), st.floats(1.0, 3.0))
def test_recursion_composes_at_fixed_split(k, a, b, c_k, cq):
    ctx = C.VectorConstantContext(q=2, C_qY=cq, pi_r1=1.0, r=1, kahane=lambda p, q: C.khintchine(p, "real"))
    if a + b == 0:
        return
    whole = C.bh_recursion(k + a + b, k, ctx, c_k)
    inner = C.bh_recursion(k + a, k, ctx, c_k) if a else c_k
    nested = C.bh_recursion(k + b, k, ctx, inner) if b else inner
    assert nested == pytest.approx(whole, rel=1e-12)


@pytest.mark.parametrize("m", [2, 4, 6, 8])
def test_recursion_even_split_equals_two_halves(m):
    ctx = C.scalar_context("real")
    k = m // 2
    c_k = C.bh_constant_classic(k, "real")
    half = C.bh_recursion(k + k // 2, k, ctx, c_k) if k // 2 else c_k
    two = C.bh_recursion(m, k, ctx, c_k)
    rest = m - (k + k // 2)
    nested = C.bh_recursion(k + rest, k, ctx, half)
    assert nested == pytest.approx(two, rel=1e-12)


def test_best_recursion_picks_minimum():
    ctx = C.scalar_context("real")
    table = C.bh_table(6, ctx)
    k, v = C.best_recursion(6, ctx, table)
    assert v == min(C.bh_recursion(6, j, ctx, table[j - 1]) for j in range(1, 6))
    assert table[5] == v


# -- BH constants ---------------------------------------------------------------------


def test_bh_complex_examples():
    assert C.bh_constant_classic(1, "complex") == 1.0
    assert C.bh_constant_classic(2, "complex") == pytest.approx(2 / math.sqrt(math.pi), rel=1e-14)
    assert C.bh_constant_classic(3, "complex") == pytest.approx(mp_bh_complex(3), rel=1e-13)


@pytest.mark.parametrize("m", [4, 10, 33, 64])
def test_bh_complex_oracle(m):
    assert C.bh_constant_classic(m, "complex") == pytest.approx(mp_bh_complex(m), rel=1e-12)


def test_bh_complex_growth():
    values = [C.bh_constant_classic(m, "complex") for m in range(1, 66)]
    ratios = [b / a for a, b in zip(values, values[1:])]
    assert max(ratios) <= 2
    assert all(r >= 1 for r in ratios)


def test_bh_real():
    assert C.bh_constant_classic(1, "real") == 1.0
    assert C.bh_constant_classic(2, "real") == pytest.approx(math.sqrt(2), rel=1e-15)
    values = [C.bh_constant_classic(m, "real") for m in range(1, 20)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    # never worse than the naive (sqrt 2)^(m-1)
    assert all(v <= math.sqrt(2) ** (m - 1) + 1e-12 for m, v in enumerate(values, start=1))


@pytest.mark.parametrize("m, field", [(0, "complex"), (2, "other"), (1.5, "real")])
def test_bh_domain(m, field):
    with pytest.raises(DomainError):
        C.bh_constant_classic(m, field)


# -- mixed-exponent constant ------------------------------------------------------------------


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("field", ["real", "complex"])
def test_uniform_tuple_collapses(m, field):
    qt = (F(2 * m, m + 1),) * m
    assert C.mixed_exponent_constant(qt, field) == C.bh_constant_classic(m, field)


def test_mixed_examples():
    assert C.mixed_exponent_constant((F(4, 3), F(4, 3)), "complex") == pytest.approx(2 / math.sqrt(math.pi), rel=1e-15)
    # (1, 2): theta = (1, 0), value A_{K,1} C_{K,1}
    assert C.mixed_exponent_constant((1, 2), "real") == pytest.approx(math.sqrt(2), rel=1e-15)
    assert C.mixed_exponent_constant((1, 2), "complex", a_c1=1.2) == pytest.approx(1.2, rel=1e-15)


def test_mixed_a_c1_extension_point():
    assert C.touches_complex_p1((1, 2))
    assert not C.touches_complex_p1((F(4, 3), F(4, 3)))
    with pytest.raises(DomainError):
        C.mixed_exponent_constant((1, 2), "complex")
    # the interpolated value is monotone in the supplied constant
    lo = C.mixed_exponent_constant((F(8, 7), F(8, 5)), "complex", a_c1=1.0)
    hi = C.mixed_exponent_constant((F(8, 7), F(8, 5)), "complex", a_c1=1.5)
    assert lo < hi


def test_mixed_interpolates_geometrically():
    # theta = (1/2, 1/2): geometric mean of the two corner constants
    ctx = C.scalar_context("real")
    c1 = C.bh_recursion(2, 1, ctx, 1.0)
    c2 = C.bh_constant_classic(2, "real")
    assert C.mixed_exponent_constant((F(8, 7), F(8, 5)), "real") == pytest.approx(math.sqrt(c1 * c2), rel=1e-14)


@pytest.mark.parametrize("qt", [(F(4, 3), F(3, 2)), (F(8, 5), F(8, 7)), (F(1, 2), 2), (1, INF)])
def test_mixed_domain(qt):
    with pytest.raises(DomainError):
        C.mixed_exponent_constant(qt, "real")


@pytest.mark.parametrize("s, q, c", [(1, F(3, 2), F(3, 2)), (1, 4, 2), (3, 5, 3), (2, 2, 2), (1, INF, 2)])
def test_c_qs(s, q, c):
    assert C.c_qs(s, q) == c


def test_c_qs_order():
    with pytest.raises(DomainError):
        C.c_qs(3, 2)
