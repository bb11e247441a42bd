"""Scaling experiments: mixed norm against operator norm as the dimension grows."""

from __future__ import annotations

import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from hllab.constructions import ConstructionSpec, bennett_coupling, build, build_fullsign, build_littlewood2x2
from hllab.errors import DomainError
from hllab.exponents import INF, SpaceSignature, from_recip, recip
from hllab.norms import NormProblem, diagonal_norm, operator_norm
from hllab.rng import derive_seed
from hllab.tensorlab import MixedNormSpec, mixed_norm

SCAN_KINDS = ("diagonal", "case2", "case3", "bennett", "chevet", "fullsign")


@dataclass(frozen=True)
class ScanRecord:
    kind: str
    n: int
    d: int | None
    norm_lb: float
    norm_exact: bool
    mixed: float
    ratio: float
    trials: int
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    n_range: tuple


def _threads() -> int:
    n = int(os.environ.get("HL_LAB_THREADS", "0") or 0)
    return n if n > 0 else min(8, os.cpu_count() or 1)


def _check_kind(kind: str, sig: SpaceSignature, spec: MixedNormSpec):
    if kind not in SCAN_KINDS:
        raise DomainError(f"cannot scan kind {kind!r}; expected one of {', '.join(SCAN_KINDS)}")
    if len(spec.t) != sig.m:
        raise DomainError(f"mixed-norm spec has {len(spec.t)} exponents for m = {sig.m}")
    if kind == "case3" and sig.m < 2:
        raise DomainError("case3 needs m >= 2")
    if kind == "bennett" and sig.harmonic == 0:
        raise DomainError("bennett coupling needs |1/p| > 0")


def scan(
    kind: str,
    sig: SpaceSignature,
    spec: MixedNormSpec,
    n_list: Sequence[int],
    trials: int = 1,
    seed: int = 0,
    restarts: int = 32,
    exact: str = "auto",
    max_iter: int = 500,
    tol: float = 1e-10,
    workers: int | None = None,
) -> list[ScanRecord]:
    """One record per n holding medians over ``trials`` independent constructions.

    Trial ``k`` at dimension ``n`` is seeded with ``derive_seed(seed, n, k)``, so the
    output does not depend on scheduling.
    """
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise DomainError("n_list is empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])) or n_list[0] < 1:
        raise DomainError("n_list must be positive and strictly ascending")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    _check_kind(kind, sig, spec)

    def one(n, d, trial):
        tseed = derive_seed(seed, n, trial)
        cspec = ConstructionSpec(kind, sig.m, n, d, sig.p, sig.s, sig.field, tseed)
        A = build(cspec)
        est = operator_norm(
            NormProblem(A, sig.p, sig.s), exact, restarts=restarts, max_iter=max_iter, tol=tol, seed=tseed, workers=1
        )
        return mixed_norm(A, spec), est

    records = []
    n_workers = workers if workers is not None else _threads()
    with ThreadPoolExecutor(max(1, n_workers)) as pool:
        for n in n_list:
            d = bennett_coupling(n, from_recip(sig.harmonic)) if kind == "bennett" else None
            results = list(pool.map(lambda k: one(n, d, k), range(trials)))
            mixed = statistics.median(r[0] for r in results)
            norm = statistics.median(r[1].value for r in results)
            if norm <= 0:
                raise DomainError(f"zero operator norm at n = {n}")
            records.append(
                ScanRecord(kind, n, d, float(norm), all(r[1].exact for r in results), float(mixed), float(mixed / norm), trials, seed)
            )
    return records


def fit_loglog(ns: Sequence[float], values: Sequence[float]) -> FitResult:
    """Least-squares line through (log n, log value)."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(ns) != len(values) or len(ns) < 3:
        raise DomainError("need at least 3 (n, value) pairs")
    if np.any(ns <= 0) or np.any(values <= 0):
        raise DomainError("log-log fit needs positive n and values")
    x, y = np.log(ns), np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(float(slope), float(intercept), r2, (float(ns.min()), float(ns.max())))


def fit_records(records: Sequence[ScanRecord], column: str = "ratio") -> FitResult:
    return fit_loglog([r.n for r in records], [getattr(r, column) for r in records])


# -- closed forms -------------------------------------------------------------


def diagonal_ratio_exponent(sig: SpaceSignature, t: Sequence) -> Fraction:
    """Exact growth exponent of mixed/norm for the diagonal map.

    Only diagonal multi-indices carry a (unit) coefficient, so the nested norm is
    n^{1/t_1}; the norm is n^{max(0, 1/s - |1/p|)}.
    """
    return recip(t[0]) - max(Fraction(0), recip(sig.s) - sig.harmonic)


def diagonal_closed_form(sig: SpaceSignature, spec: MixedNormSpec, n_list: Sequence[int]) -> list[ScanRecord]:
    out = []
    for n in n_list:
        mixed = float(n) ** float(recip(spec.t[0]))
        norm = diagonal_norm(sig.m, n, sig.p, sig.s)
        out.append(ScanRecord("diagonal", int(n), None, norm, True, mixed, mixed / norm, 0, 0))
    return out


# -- Littlewood's 4/3 inequality -----------------------------------------------

LITTLEWOOD_T = Fraction(4, 3)


@dataclass
class LittlewoodReport:
    field: str
    n_max: int
    instances: int
    exact: bool
    max_ratio: float
    bound: float = math.sqrt(2.0)
    ratios: list = field(default_factory=list, repr=False)
    caveat: str = ""

    @property
    def within_bound(self) -> bool:
        return self.max_ratio <= self.bound + 1e-9

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "n_max": self.n_max,
            "instances": self.instances,
            "exact": self.exact,
            "max_ratio": self.max_ratio,
            "bound": self.bound,
            "within_bound": self.within_bound,
            "caveat": self.caveat,
        }


def littlewood_ratio(A, restarts: int = 32, seed: int = 0, tol: float = 1e-10):
    """(sum |a_ij|^{4/3})^{3/4} / ||A|| on l_inf x l_inf; exact norm when the field is real."""
    mixed = mixed_norm(A, MixedNormSpec((LITTLEWOOD_T, LITTLEWOOD_T), 2))
    est = operator_norm(NormProblem(A, (INF, INF), 1), "auto", restarts=restarts, seed=seed, tol=tol)
    return mixed / est.value, est.exact


def littlewood_check(
    n_max: int, trials: int, field: str = "real", seed: int = 0, restarts: int = 32, tol: float = 1e-10
) -> LittlewoodReport:
    """Random sign bilinear forms with n cycling through 1..n_max, plus the 2x2 extremal form."""
    if n_max < 1 or trials < 1:
        raise DomainError("n_max and trials must be >= 1")
    if field == "real" and n_max > 4:
        raise DomainError("exact real norms are limited to n_max <= 4")
    forms = [build_littlewood2x2(field)]
    for k in range(trials):
        n = 1 + k % n_max
        forms.append(build_fullsign(2, n, derive_seed(seed, n, k), field))
    ratios, exact = [], True
    for k, A in enumerate(forms):
        r, ex = littlewood_ratio(A, restarts=restarts, seed=derive_seed(seed, k), tol=tol)
        ratios.append(r)
        exact = exact and ex
    caveat = "" if exact else "norms are ascent lower bounds, so ratios over-estimate"
    return LittlewoodReport(field, n_max, len(forms), exact, max(ratios), ratios=ratios, caveat=caveat)
