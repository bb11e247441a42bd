"""Extremal and near-extremal multilinear maps, parameterised by dimension.

Random signs come from :mod:`hllab.rng`, keyed by (seed, construction) and the
flat index of the sign, so the same spec always yields the same tensor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hllab.errors import DomainError
from hllab.exponents import from_recip, harmonic_sum, parse_exponent, recip
from hllab.rng import rademacher, stream_id
from hllab.tensorlab import CoeffTensor

KINDS = ("diagonal", "case2", "case3", "bennett", "chevet", "littlewood2x2", "fullsign")


def _positive(name, value):
    if int(value) != value or value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value}")
    return int(value)


def _diag_index(m: int, n: int):
    i = np.arange(n)
    return (i,) * m


def build_diagonal(m: int, n: int, field: str = "real") -> CoeffTensor:
    """sum_i x_i^(1) ... x_i^(m) e_i."""
    m, n = _positive("m", m), _positive("n", n)
    a = np.zeros((n,) * (m + 1))
    a[_diag_index(m + 1, n)] = 1.0
    return CoeffTensor(a, field)


def build_case2(m: int, n: int, seed: int = 0, field: str = "real") -> CoeffTensor:
    """sum_{i,j} eps_{ij} x_i^(1) ... x_i^(m) e_j: a sign matrix fed by the diagonal."""
    m, n = _positive("m", m), _positive("n", n)
    eps = rademacher(seed, (n, n), stream_id("case2"))
    a = np.zeros((n,) * (m + 1))
    a[_diag_index(m, n)] = eps
    return CoeffTensor(a, field)


def build_case3(m: int, n: int, seed: int = 0, field: str = "real") -> CoeffTensor:
    """sum eps_{i_1..i_m} x_{i_1}^(1) ... x_{i_m}^(m) e_{i_m}."""
    m, n = _positive("m", m), _positive("n", n)
    if m < 2:
        raise DomainError("case3 needs m >= 2")
    eps = rademacher(seed, (n,) * m, stream_id("case3"))
    a = np.zeros((n,) * (m + 1))
    idx = np.arange(n)
    # output coordinate equals the last input index
    a[..., idx, idx] = eps
    return CoeffTensor(a, field)


def build_bennett(m: int, n: int, d: int, seed: int = 0, field: str = "real") -> CoeffTensor:
    """sum_{i,j} eps_{ij} x_j^(1) ... x_j^(m) e_i with n input coordinates, d outputs.

    Each of the n diagonal coefficients is a sign vector in l_q^d, so the equal-exponent
    mixed norm is n^{1/t} d^{1/q}.
    """
    m, n, d = _positive("m", m), _positive("n", n), _positive("d", d)
    eps = rademacher(seed, (n, d), stream_id("bennett"))
    a = np.zeros((n,) * m + (d,))
    a[_diag_index(m, n)] = eps
    return CoeffTensor(a, field)


def bennett_coupling(n: int, p) -> int:
    """d with d^{1/2} = n^{1 - 1/p}, rounded to the nearest integer (at least 1)."""
    e = 2 * (1 - recip(parse_exponent(p)))
    return max(1, int(round(float(n) ** float(e))))


def build_chevet(d: int, dims, seed: int = 0, field: str = "real") -> CoeffTensor:
    """Fully dense iid sign tensor of a d-linear map; ``dims`` has d+1 entries."""
    d = _positive("d", d)
    dims = tuple(_positive("dim", x) for x in dims)
    if len(dims) != d + 1:
        raise DomainError(f"chevet needs d+1 = {d + 1} dims, got {len(dims)}")
    return CoeffTensor(rademacher(seed, dims, stream_id("chevet")), field)


def build_fullsign(m: int, n: int, seed: int = 0, field: str = "real") -> CoeffTensor:
    """Random sign m-linear form on K^n x ... x K^n (scalar output)."""
    return build_chevet(m, (n,) * m + (1,), seed, field)


def build_littlewood2x2(field: str = "real") -> CoeffTensor:
    return CoeffTensor(np.array([[1.0, 1.0], [1.0, -1.0]])[..., None], field)


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    m: int = 2
    n: int = 1
    d: int | None = None
    p: tuple = ()
    s: object = 1
    field: str = "real"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown construction kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind == "case3" and self.m < 2:
            raise DomainError("case3 needs m >= 2")
        if self.kind == "bennett" and self.d is not None and self.d < 1:
            raise DomainError("bennett needs d >= 1")

    def metadata(self) -> dict:
        """Analysis-only exponents; the generators never read them."""
        meta = {}
        if self.kind == "case3" and self.p:
            # 1/p = 1/p_m + 1/s*
            meta["p_recip"] = recip(parse_exponent(self.p[-1])) + 1 - recip(parse_exponent(self.s))
        if self.kind == "bennett" and self.p:
            meta["p_recip"] = harmonic_sum(self.p)
        return meta


def build(spec: ConstructionSpec) -> CoeffTensor:
    k = spec.kind
    if k == "diagonal":
        return build_diagonal(spec.m, spec.n, spec.field)
    if k == "case2":
        return build_case2(spec.m, spec.n, spec.seed, spec.field)
    if k == "case3":
        return build_case3(spec.m, spec.n, spec.seed, spec.field)
    if k == "bennett":
        d = spec.d
        if d is None:
            if not spec.p:
                raise DomainError("bennett needs d or the domain exponents p for the coupling")
            d = bennett_coupling(spec.n, from_recip(harmonic_sum(spec.p)))
        return build_bennett(spec.m, spec.n, d, spec.seed, spec.field)
    if k == "chevet":
        return build_chevet(spec.m, (spec.n,) * (spec.m + 1), spec.seed, spec.field)
    if k == "fullsign":
        return build_fullsign(spec.m, spec.n, spec.seed, spec.field)
    return build_littlewood2x2(spec.field)

