"""Acceptance gate: ten criteria, each printing one PASS/FAIL line.

The lines are also collected into the "acceptance criteria" section of the
pytest terminal summary.
"""

import math
import random
import time
from fractions import Fraction as F

import mpmath

from hllab import constants as C
from hllab.constructions import build_bennett, build_case2, build_case3, build_fullsign, build_littlewood2x2
from hllab.exponents import (
    INF,
    OPTIMAL_REGIMES,
    Regime,
    SpaceSignature,
    classify,
    from_recip,
    lambda_of,
    recip,
    table_inv_rho,
    theta_weights,
)
from hllab.harness.scan import diagonal_closed_form, fit_records, littlewood_check, littlewood_ratio, scan
from hllab.norms import NormProblem, norm_ascent, norm_vertex_exact
from hllab.tensorlab import MixedNormSpec, mixed_norm

SLOPE_TOL = 0.15
SCAN_NS = [4, 6, 8, 12, 16, 24, 32]


def spread(m, h):
    """Domain exponents with harmonic sum h, split evenly."""
    return (from_recip(F(h) / m),) * m


def test_criterion_01_exponent_golden_values(acceptance):
    t0 = time.perf_counter()
    failures = []
    if classify(SpaceSignature(2, (INF, INF), 1, 2)).rho_optimal != F(4, 3):
        failures.append("littlewood")
    for m in range(2, 11):
        if classify(SpaceSignature.uniform(m, INF, 1, 2)).rho_optimal != F(2 * m, m + 1):
            failures.append(f"bh m={m}")
    grid = 0
    for m in range(1, 9):
        for den in range(1, 13):
            for num in range(0, den // 2 + 1):
                h = F(num, den)
                if h > F(m, 1):
                    continue
                got = classify(SpaceSignature(m, spread(m, h), 1, 2)).rho_optimal
                grid += 1
                if got != F(2 * m) / (m + 1 - 2 * h):
                    failures.append(f"m={m} h={h}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 1.0
    acceptance(1, "exponent golden values", ok, f"{grid} grid points, {elapsed:.3f}s, failures={failures[:3]}")
    assert ok


def _random_exponent(rng, lo=1, allow_inf=True):
    if allow_inf and rng.random() < 0.15:
        return INF
    return F(lo) + F(rng.randint(0, 40), rng.randint(1, 12))


def test_criterion_02_table_unified_consistency(acceptance):
    t0 = time.perf_counter()
    rng = random.Random(20240101)
    checked, mismatches = 0, 0
    seen = set()
    while checked < 1000:
        m = rng.randint(1, 10)
        s = _random_exponent(rng, allow_inf=False)
        q = s + _random_exponent(rng, lo=0) if rng.random() < 0.9 else INF
        # harmonic sums biased towards the interesting band [0, 1]
        p = tuple(from_recip(F(rng.randint(0, 12), rng.randint(12, 12 * m + 12))) for _ in range(m))
        sig = SpaceSignature(m, p, s, q)
        rep = classify(sig)
        if rep.regime not in OPTIMAL_REGIMES:
            continue
        lam = lambda_of(sig)
        unified = (1 / lam + (m - 1) * recip(max(lam, s, 2))) / m
        checked += 1
        seen.add(rep.regime)
        mismatches += table_inv_rho(sig, rep.regime) != unified or recip(rep.rho_optimal) != unified
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 5.0 and seen == set(OPTIMAL_REGIMES)
    regimes = ",".join(sorted(r.value for r in seen))
    acceptance(2, "table/unified consistency", ok, f"{checked} signatures over {regimes}, {mismatches} mismatches, {elapsed:.2f}s")
    assert ok


def test_criterion_03_gap_coincidence_s1(acceptance):
    bad, total = [], 0
    for qn in range(1, 21):
        q = 1 + F(qn, 20)
        for hn in range(1, 40):
            h = F(1, 2) + F(hn, 80)
            rep = classify(SpaceSignature(2, spread(2, h), 1, q))
            total += 1
            if rep.regime is not Regime.GAP or rep.rho_sufficient != rep.rho_necessary_bound:
                bad.append((q, h))
    ok = not bad
    acceptance(3, "GAP coincidence at s=1", ok, f"{total} grid points, {len(bad)} mismatches")
    assert ok


def test_criterion_04_theta_identity(acceptance):
    rng = random.Random(7)
    bad = 0
    for _ in range(1000):
        m = rng.randint(1, 8)
        r = F(1) + F(rng.randint(0, 6), 8)
        q = rng.choice([F(2), F(5, 2), F(3), F(4), INF])
        span = 1 / r - recip(q)
        raw = [rng.randint(0, 20) for _ in range(m)]
        if sum(raw) == 0:
            raw[0] = 1
        xs = sorted((F(a, sum(raw)) * span for a in raw), reverse=True)
        qt = tuple(from_recip(x + recip(q)) for x in xs)
        th = theta_weights(m, r, q, qt)
        bad += sum(th) != 1 or any(x < 0 for x in th)
    ok = bad == 0
    acceptance(4, "theta-weight identity", ok, f"1000 tuples, {bad} violations")
    assert ok


def test_criterion_05_constants(acceptance):
    t0 = time.perf_counter()
    mpmath.mp.dps = 30
    errs = {
        "A_R1": abs(C.khintchine(1, "real") - float(mpmath.sqrt(2))),
        "A_C2": abs(C.khintchine(2, "complex") - float(mpmath.gamma(mpmath.mpf(3) / 2) ** mpmath.mpf(-0.5))),
        "C_C2": abs(C.bh_constant_classic(2, "complex") - float(2 / mpmath.sqrt(mpmath.pi))),
    }
    elapsed = time.perf_counter() - t0
    ok = max(errs.values()) <= 1e-9 and elapsed < 1.0
    acceptance(5, "Khintchine and BH constants", ok, ", ".join(f"{k} err {v:.1e}" for k, v in errs.items()) + f", {elapsed:.3f}s")
    assert ok


def test_criterion_06_norm_oracle_equivalence(acceptance):
    t0 = time.perf_counter()
    matches, above = 0, 0
    for k in range(100):
        m = 2 + k % 2
        n = 2 + (k // 2) % 2
        A = build_fullsign(m, n, seed=1000 + k)
        prob = NormProblem(A, (INF,) * m, 1)
        exact = norm_vertex_exact(prob).value
        lb = norm_ascent(prob, restarts=32, seed=k).value
        matches += abs(lb - exact) <= 1e-9
        above += lb > exact + 1e-9
    elapsed = time.perf_counter() - t0
    ok = matches >= 95 and above == 0 and elapsed < 30.0
    acceptance(6, "norm oracle equivalence", ok, f"{matches}/100 match, {above} above exact, {elapsed:.1f}s")
    assert ok


def test_criterion_07_littlewood_ratio(acceptance):
    t0 = time.perf_counter()
    ratio, exact = littlewood_ratio(build_littlewood2x2())
    rep = littlewood_check(4, 200, "real", seed=0)
    elapsed = time.perf_counter() - t0
    ok = exact and abs(ratio - math.sqrt(2)) <= 1e-9 and rep.exact and rep.max_ratio <= math.sqrt(2) + 1e-9 and elapsed < 60
    acceptance(7, "Littlewood ratio", ok, f"2x2 ratio {ratio:.12f}, max over {rep.instances} forms {rep.max_ratio:.12f}, {elapsed:.1f}s")
    assert ok


def test_criterion_08_mixed_norm_identities(acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    t_vals = [F(1), F(4, 3), F(3, 2), F(2), F(3)]
    q_vals = [F(1), F(3, 2), F(2), F(4)]
    for n in (1, 2, 3, 5, 8, 13, 21, 32):
        for m in (2, 3):
            for t in t_vals:
                for q in q_vals:
                    got = mixed_norm(build_case2(m, n, seed=n), MixedNormSpec.uniform(m, t, q))
                    worst = max(worst, abs(got / n ** float(1 / q + 1 / t) - 1))
        for t1 in t_vals:
            for t2 in t_vals:
                got = mixed_norm(build_case3(2, n, seed=n), MixedNormSpec((t1, t2), 2))
                worst = max(worst, abs(got / n ** float(1 / t1 + 1 / t2) - 1))
        got = mixed_norm(build_case3(3, n, seed=n), MixedNormSpec((1, F(3, 2), 2), 2))
        worst = max(worst, abs(got / n ** float(1 + F(2, 3) + F(1, 2)) - 1))
        for d in (1, 4, 9, 17, 32):
            for t in t_vals:
                for q in q_vals:
                    got = mixed_norm(build_bennett(2, n, d, seed=d), MixedNormSpec.uniform(2, t, q))
                    worst = max(worst, abs(got / (n ** float(1 / t) * d ** float(1 / q)) - 1))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 5.0
    acceptance(8, "deterministic mixed-norm identities", ok, f"max rel err {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_09_chevet_scaling(acceptance):
    t0 = time.perf_counter()
    sig = SpaceSignature(2, (INF, INF), 1, 2)
    recs = scan("fullsign", sig, MixedNormSpec.uniform(2, F(4, 3), 2), SCAN_NS, trials=20, seed=0, exact="never")
    fit = fit_records(recs, "norm_lb")
    elapsed = time.perf_counter() - t0
    ok = abs(fit.slope - 1.5) <= SLOPE_TOL and elapsed < 300
    acceptance(9, "sign-form norm scaling", ok, f"slope {fit.slope:.3f} (target 1.5 +- {SLOPE_TOL}), r2 {fit.r_squared:.4f}, {elapsed:.1f}s")
    assert ok


def test_criterion_10_optimality_signal(acceptance):
    t0 = time.perf_counter()
    sig = SpaceSignature(2, (INF, INF), 1, 2)
    below = scan("case2", sig, MixedNormSpec.uniform(2, F(5, 4), 2), SCAN_NS, trials=20, seed=0)
    slope_below = fit_records(below, "ratio").slope
    rho = classify(sig).rho_optimal
    closed = diagonal_closed_form(sig, MixedNormSpec.uniform(2, rho, 2), SCAN_NS)
    slope_at = fit_records(closed, "ratio").slope
    elapsed = time.perf_counter() - t0
    part_a = slope_below >= 0.05
    part_b = slope_at <= 1e-12
    ok = part_a and part_b and elapsed < 300
    acceptance(
        10,
        "optimality signal",
        ok,
        f"case2 t=5/4 ratio slope {slope_below:.3f} (need >= 0.05), diagonal t=rho closed-form slope {slope_at:.3f} (need <= 0), {elapsed:.1f}s",
    )
    assert part_b, "diagonal closed-form ratio grows at the optimal exponent"
    assert part_a, f"case2 ratio slope {slope_below:.3f} below +0.05 at t = 5/4"
    assert elapsed < 300
