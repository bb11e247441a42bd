"""Operator norm of a coefficient tensor viewed as l_{p_1} x ... x l_{p_m} -> l_s.

``norm_ascent`` maximises the (m+1)-linear pairing <A(x^(1), ..., x^(m)), y>
over the product of unit balls (y in the dual ball of l_s) by exact
coordinate-block maximisation.  Every value it reports is attained by feasible
vectors, hence a certified lower bound.  ``norm_vertex_exact`` enumerates sign
vectors and is exact whenever it applies.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from hllab.errors import DomainError, NumericError
from hllab.exponents import INF, format_exponent, harmonic_sum, parse_exponent, recip
from hllab.tensorlab import CoeffTensor

logger = logging.getLogger(__name__)

MAX_SIGN_BITS = 24


def conjugate(u) -> float:
    u = float(u)
    if u == 1.0:
        return math.inf
    if math.isinf(u):
        return 1.0
    return u / (u - 1.0)


@dataclass(frozen=True)
class NormProblem:
    A: CoeffTensor
    p: tuple
    s: object

    def __post_init__(self):
        p = tuple(parse_exponent(x) for x in self.p)
        s = parse_exponent(self.s)
        if len(p) != self.A.m:
            raise DomainError(f"need {self.A.m} domain exponents, got {len(p)}")
        if any(x != INF and x < 1 for x in p + (s,)):
            raise DomainError("norm exponents must be >= 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    exact: bool
    restarts_used: int
    iterations: int
    residual: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "exact": self.exact,
            "restarts_used": self.restarts_used,
            "iterations": self.iterations,
            "residual": self.residual,
        }


def _phase(c: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(c):
        mod = np.abs(c)
        return np.where(mod > 0, np.conj(c) / np.where(mod > 0, mod, 1.0), 1.0 + 0j)
    return np.where(c < 0, -1.0, 1.0)


def dual_maximizer(c: np.ndarray, u: float) -> np.ndarray:
    """x in the unit ball of l_u maximising Re sum c_i x_i (value ||c||_{u*}).

    u = 1 ties go to the lowest index. Returns None for c = 0.
    """
    mod = np.abs(c)
    peak = mod.max()
    if peak == 0:
        return None
    u = float(u)
    if math.isinf(u):
        return _phase(c)
    if u == 1.0:
        i = int(np.argmax(mod))
        x = np.zeros_like(c)
        x[i] = _phase(c[i : i + 1])[0]
        return x
    ustar = u / (u - 1.0)
    w = (mod / peak) ** (ustar - 1.0)
    norm = np.sum((mod / peak) ** ustar) ** (1.0 / u)  # = ||c/peak||_{u*}^{u*-1}
    return _phase(c) * (w / norm)


def _contract_except(data: np.ndarray, vecs: Sequence[np.ndarray], skip: int) -> np.ndarray:
    """Contract every axis of ``data`` with ``vecs`` except axis ``skip``."""
    out = data
    for axis in range(len(vecs) - 1, -1, -1):
        if axis == skip:
            continue
        out = np.tensordot(out, vecs[axis], axes=([axis], [0]))
    return out


def _pairing(c: np.ndarray, x: np.ndarray) -> float:
    return float(np.real(np.dot(c, x)))


def _initial_vector(rng: np.random.Generator, n: int, u: float, complex_field: bool) -> np.ndarray:
    if complex_field:
        v = np.exp(2j * np.pi * rng.random(n))
    else:
        v = rng.choice([-1.0, 1.0], size=n)
    if math.isinf(u):
        return v
    # random magnitudes: flat starts are fixed points of the update when p < s
    mag = rng.random(n) + 1e-3
    return v * mag / np.sum(mag**u) ** (1.0 / u)


def _one_restart(prob: NormProblem, restart: int, seed: int, max_iter: int, tol: float, trace):
    A = prob.A
    data = A.data
    m = A.m
    complex_field = A.field == "complex"
    exps = [float(x) for x in prob.p] + [conjugate(prob.s)]
    rng = np.random.default_rng([seed, restart])
    vecs = [_initial_vector(rng, A.dims[k], exps[k], complex_field) for k in range(m)]
    vecs.append(np.zeros(A.n_out, dtype=data.dtype))

    def update(k):
        c = _contract_except(data, vecs, k)
        x = dual_maximizer(c, exps[k])
        if x is not None:
            vecs[k] = x.astype(data.dtype, copy=False)
        return _pairing(c, vecs[k])

    value = update(m)
    if not math.isfinite(value):
        raise NumericError("non-finite objective", restart)
    if value == 0.0:
        y = dual_maximizer(np.ones(A.n_out, dtype=data.dtype), exps[m])
        vecs[m] = y.astype(data.dtype, copy=False)
    residual = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        start = value
        for k in list(range(m)) + [m]:
            new = update(k)
            if not math.isfinite(new):
                raise NumericError("non-finite objective", restart)
            if new < value - 1e-12 * max(1.0, abs(value)):
                raise NumericError(f"ascent decreased objective from {value!r} to {new!r}", restart)
            value = max(value, new)
            if trace is not None:
                trace(restart, iterations, k, value, vecs)
        residual = value - start
        if residual < tol:
            break
    return value, iterations, residual


def _worker_count(requested: int | None) -> int:
    if requested is None:
        requested = int(os.environ.get("HL_LAB_THREADS", "1") or 1)
    if requested <= 0:
        requested = os.cpu_count() or 1
    return requested


def norm_ascent(
    prob: NormProblem,
    restarts: int = 32,
    max_iter: int = 500,
    tol: float = 1e-10,
    seed: int = 0,
    workers: int | None = None,
    trace: Callable | None = None,
) -> NormEstimate:
    """Multi-start alternating maximisation; the value is a lower bound on ||A||."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    if not np.any(prob.A.data):
        return NormEstimate(0.0, False, 0, 0, 0.0)

    run = lambda r: _one_restart(prob, r, seed, max_iter, tol, trace)
    n_workers = 1 if trace is not None else min(_worker_count(workers), restarts)
    if n_workers > 1:
        with ThreadPoolExecutor(n_workers) as pool:
            results = list(pool.map(run, range(restarts)))
    else:
        results = [run(r) for r in range(restarts)]
    best = max(range(restarts), key=lambda r: (results[r][0], -r))
    value, _, residual = results[best]
    return NormEstimate(float(value), False, restarts, sum(r[1] for r in results), float(residual))


def vertex_sign_bits(prob: NormProblem) -> int:
    """Sign bits enumerated by :func:`norm_vertex_exact` (after eliminating one slot)."""
    sizes = list(prob.A.dims[:-1])
    if prob.A.n_out > 1:
        sizes.append(prob.A.n_out)
    sizes.sort()
    return sum(n - 1 for n in sizes[:-1])


def vertex_applicable(prob: NormProblem) -> bool:
    A = prob.A
    return (
        A.field == "real"
        and all(x == INF for x in prob.p)
        and (A.n_out == 1 or prob.s == 1)
        and vertex_sign_bits(prob) <= MAX_SIGN_BITS
    )


def _sign_rows(bits: np.ndarray, n: int) -> np.ndarray:
    """Sign vectors with first coordinate +1; row b encodes the other n-1 signs in ``bits``."""
    shifts = np.arange(n - 1, dtype=np.int64)
    rest = np.where((bits[:, None] >> shifts) & 1, -1.0, 1.0)
    return np.concatenate([np.ones((len(bits), 1)), rest], axis=1)


def norm_vertex_exact(prob: NormProblem, chunk: int = 1 << 14) -> NormEstimate:
    """Exhaustive maximum over sign vectors; valid for real forms on l_inf domains.

    The output is either scalar or measured in l_1 (then it is one more l_inf slot
    by duality). The largest slot is maximised in closed form as an l_1 norm, and
    each remaining slot has its first sign fixed, since flipping a whole slot only
    changes the sign of the pairing.
    """
    A = prob.A
    if A.field != "real" or any(x != INF for x in prob.p) or not (A.n_out == 1 or prob.s == 1):
        raise DomainError("vertex enumeration inapplicable: needs a real form, l_inf domains, scalar or l_1 output")
    bits = vertex_sign_bits(prob)
    if bits > MAX_SIGN_BITS:
        raise DomainError(f"vertex enumeration inapplicable: {bits} sign bits exceed {MAX_SIGN_BITS}")

    data = A.data if A.n_out > 1 else A.data[..., 0]
    order = np.argsort(data.shape, kind="stable")
    last = int(order[-1])
    data = np.moveaxis(data, last, -1)
    sizes = data.shape[:-1]
    if not sizes:
        return NormEstimate(float(np.abs(data).sum()), True, 0, 0, 0.0)

    widths = [n - 1 for n in sizes]
    total = 1 << sum(widths)
    best = 0.0
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        shift = 0
        r = None
        for n, w in zip(sizes, widths):
            signs = _sign_rows((idx >> shift) & ((1 << w) - 1), n)
            shift += w
            if r is None:
                r = signs @ data.reshape(n, -1)
            else:
                r = np.einsum("bi,bir->br", signs, r.reshape(len(idx), n, -1))
        best = max(best, float(np.abs(r).sum(axis=1).max()))
    return NormEstimate(best, True, 0, total, 0.0)


def operator_norm(prob: NormProblem, exact: str = "auto", **ascent_kwargs) -> NormEstimate:
    """Vertex enumeration when ``exact`` is 'always' or 'auto' and it applies, else ascent."""
    if exact not in ("auto", "always", "never"):
        raise DomainError(f"exact must be auto, always or never, got {exact!r}")
    if exact == "always" or (exact == "auto" and vertex_applicable(prob)):
        return norm_vertex_exact(prob)
    return norm_ascent(prob, **ascent_kwargs)


# -- predicted growth exponents ------------------------------------------------


@dataclass(frozen=True)
class TheoryBound:
    exponent: Fraction
    description: str


def alpha(u) -> Fraction:
    """1/2 - 1/u for u >= 2, else 0."""
    u = parse_exponent(u)
    return Fraction(1, 2) - recip(u) if u >= 2 else Fraction(0)


def _conj_exp(u):
    u = parse_exponent(u)
    if u == 1:
        return INF
    if u == INF:
        return Fraction(1)
    return u / (u - 1)


def theory_norm_bound(kind: str, **params) -> TheoryBound:
    """Growth exponent in n of the norm bound for a construction (constants omitted).

    chevet:   p (d domain exponents), s (codomain; omit for a scalar form)
    case2:    p, s
    case3:    p, s
    bennett:  p, s, d_exponent (d = n^d_exponent; default couples d^{1/2} = n^{1-1/p})
    diagonal: p, s
    """
    p = tuple(parse_exponent(x) for x in params.get("p", ()))
    s = params.get("s")
    s = None if s is None else parse_exponent(s)
    h = harmonic_sum(p)
    if kind == "chevet":
        if s is None:
            # scalar form: the last slot plays the dual of the codomain
            e = Fraction(1, 2) + sum((alpha(x) for x in p), Fraction(0))
        else:
            e = Fraction(1, 2) + sum((alpha(x) for x in p), Fraction(0)) + alpha(_conj_exp(s))
        return TheoryBound(e, "random sign tensor, n^(1/2 + sum alpha(p_i) + alpha(s*))")
    if s is None:
        raise DomainError(f"{kind} bound needs the codomain exponent s")
    if kind == "case2":
        return TheoryBound(Fraction(1, 2) + recip(s) - h, "diagonal inputs, sign matrix output: n^(1/2 + 1/s - |1/p|)")
    if kind == "case3":
        m = len(p)
        return TheoryBound(Fraction(m - 1, 2) - h + recip(s), "n^((m-1)/2 - |1/p| + 1/s)")
    if kind == "bennett":
        inv_p = h
        gamma = params.get("d_exponent")
        gamma = 2 * (1 - inv_p) if gamma is None else Fraction(gamma)
        first = gamma * recip(s)
        second = (1 - inv_p) + gamma * (recip(s) - Fraction(1, 2))
        return TheoryBound(
            max(first, second),
            f"max(d^(1/s), n^(1-1/p) d^(1/s-1/2)) with d = n^{format_exponent(gamma)}",
        )
    if kind == "diagonal":
        return TheoryBound(max(Fraction(0), recip(s) - h), "diagonal map, Holder: n^max(0, 1/s - |1/p|)")
    raise DomainError(f"unknown construction kind {kind!r}")


def diagonal_norm(m: int, n: int, p: Sequence, s) -> float:
    """Exact norm of sum_i x_i^(1)...x_i^(m) e_i from l_{p_1} x ... x l_{p_m} to l_s^n."""
    if len(p) != m:
        raise DomainError(f"need {m} domain exponents")
    e = recip(parse_exponent(s)) - harmonic_sum(p)
    return float(n) ** float(max(e, Fraction(0)))

