"""Coefficient tensors of vector-valued multilinear maps and their mixed norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hllab.errors import DomainError
from hllab.exponents import INF, parse_exponent

MAX_ENTRIES = 10**8


class CoeffTensor:
    """Dense coefficient array ``a[i_1, ..., i_m, j]`` of an m-linear map.

    The last axis is the codomain coordinate; scalar forms have ``n_out == 1``.
    The array is copied and frozen on construction.
    """

    __slots__ = ("data", "field")

    def __init__(self, data, field: str | None = None):
        arr = np.asarray(data)
        if arr.ndim < 2:
            raise DomainError("coefficient tensor needs at least one input axis and the output axis")
        if field is None:
            field = "complex" if np.iscomplexobj(arr) else "real"
        if field not in ("real", "complex"):
            raise DomainError(f"unknown field {field!r}")
        if field == "real" and np.iscomplexobj(arr):
            raise DomainError("real tensor with complex entries")
        if arr.size > MAX_ENTRIES:
            raise DomainError(f"tensor has {arr.size} entries, limit is {MAX_ENTRIES}")
        arr = np.array(arr, dtype=np.complex128 if field == "complex" else np.float64)
        if not np.all(np.isfinite(arr)):
            raise DomainError("tensor entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("CoeffTensor is immutable")

    @property
    def m(self) -> int:
        return self.data.ndim - 1

    @property
    def dims(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def n_out(self) -> int:
        return self.data.shape[-1]

    def scaled(self, alpha) -> "CoeffTensor":
        field = "complex" if (self.field == "complex" or isinstance(alpha, complex)) else "real"
        return CoeffTensor(self.data * alpha, field)

    def support_size(self) -> int:
        return int(np.count_nonzero(self.data))

    def __eq__(self, other):
        if not isinstance(other, CoeffTensor):
            return NotImplemented
        return self.field == other.field and self.dims == other.dims and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.field, self.dims, self.data.tobytes()))

    def __repr__(self):
        return f"CoeffTensor(m={self.m}, dims={self.dims}, field={self.field!r})"


def apply(A: CoeffTensor, xs: Sequence) -> np.ndarray:
    """Evaluate A(x^(1), ..., x^(m)) as a vector of length n_out."""
    if len(xs) != A.m:
        raise DomainError(f"expected {A.m} vectors, got {len(xs)}")
    out = A.data
    for k, x in enumerate(xs):
        x = np.asarray(x)
        if x.shape != (A.dims[k],):
            raise DomainError(f"vector {k + 1} has shape {x.shape}, expected ({A.dims[k]},)")
        out = np.tensordot(x, out, axes=([0], [0]))
    return out


def _exponent_float(u) -> float:
    u = parse_exponent(u)
    if u != INF and u < 1:
        raise DomainError(f"norm exponent must be >= 1, got {u}")
    return float(u)


def _kahan_sum_last(a: np.ndarray) -> np.ndarray:
    """Compensated (Neumaier) sum over the last axis, vectorised over the rest."""
    total = np.zeros(a.shape[:-1])
    comp = np.zeros(a.shape[:-1])
    for j in range(a.shape[-1]):
        v = a[..., j]
        t = total + v
        big = np.abs(total) >= np.abs(v)
        comp += np.where(big, (total - t) + v, (v - t) + total)
        total = t
    return total + comp


def _fold_last(mod: np.ndarray, u: float, compensated: bool = False) -> np.ndarray:
    """l_u norm over the last axis of a nonnegative array."""
    if mod.shape[-1] == 0:
        return np.zeros(mod.shape[:-1])
    peak = mod.max(axis=-1)
    if math.isinf(u):
        return peak
    safe = np.where(peak > 0, peak, 1.0)
    ratio = (mod / safe[..., None]) ** u
    summed = _kahan_sum_last(ratio) if compensated else ratio.sum(axis=-1)
    return np.where(peak > 0, safe * summed ** (1.0 / u), 0.0)


def p_norm(x, u) -> float:
    """Standard l_u norm; u = inf is the max modulus."""
    x = np.abs(np.asarray(x, dtype=complex if np.iscomplexobj(x) else float)).reshape(1, -1)
    return float(_fold_last(x, _exponent_float(u), compensated=True)[0])


@dataclass(frozen=True)
class MixedNormSpec:
    """Outer exponents t_1..t_m (folded from t_m inwards) and the inner codomain exponent."""

    t: tuple
    inner_q: object = 2

    def __post_init__(self):
        t = tuple(parse_exponent(x) for x in self.t)
        for x in t + (parse_exponent(self.inner_q),):
            _exponent_float(x)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "inner_q", parse_exponent(self.inner_q))

    @classmethod
    def uniform(cls, m: int, t, inner_q=2) -> "MixedNormSpec":
        return cls((t,) * m, inner_q)


def coefficient_norms(A: CoeffTensor, inner_q) -> np.ndarray:
    """||A(e_{i_1}, ..., e_{i_m})||_{l_q}, shape dims[:m]."""
    return _fold_last(np.abs(A.data), _exponent_float(inner_q), compensated=True)


def mixed_norm(A: CoeffTensor, spec: MixedNormSpec) -> float:
    if len(spec.t) != A.m:
        raise DomainError(f"need {A.m} outer exponents, got {len(spec.t)}")
    vals = coefficient_norms(A, spec.inner_q)
    for t in reversed(spec.t):
        vals = _fold_last(vals, float(t))
    return float(vals)
