"""Shifted-prime interval sets and character sums over them.

An interval set holds the primes p in (lo, hi] with gcd(p-1, m) = 1
together with the residue count vector c[b] = #{p : p-1 = b (mod m)},
so every character sum S(chi) = sum_p chi(p-1) costs O(m) instead of
O(|I|).  The canonical triple uses bounds m^(1+1/k), m, m^(1/k).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .arith import log_integral_between
from .characters import (
    DirichletCharacter,
    UnitGroupContext,
    all_characters,
    primitive_inducing,
)
from .errors import ConsistencyError, DomainError
from .sieve import SieveTables

PARSEVAL_REL_TOL = 1e-6


class SmallKWarning(UserWarning):
    """k below 10 only weakens the asymptotics, not the identities."""


@dataclass(frozen=True)
class PrimeIntervalSet:
    """Primes p in (lo, hi] with gcd(p-1, m) = 1, plus residue counts."""

    index: int | None
    lo: float
    hi: float
    modulus: int
    primes: np.ndarray = field(repr=False)
    count_vector: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.primes.size)

    def overlaps(self, other: "PrimeIntervalSet") -> bool:
        return max(self.lo, other.lo) < min(self.hi, other.hi)


def _snap_root(m: int, num: int, den: int) -> float:
    """m**(num/den) with exact integer k-th roots snapped to the integer,
    so boundary primes are classified correctly."""
    x = float(m) ** (num / den)
    r = round(x)
    if r > 0 and r**den == m**num:
        return float(r)
    return x


def interval_bounds(j: int, m: int, k: int) -> tuple[float, float]:
    """(0.5*f_j(m), f_j(m)) with f_1, f_2, f_3 = m^(1+1/k), m, m^(1/k)."""
    if j == 1:
        hi = _snap_root(m, k + 1, k)
    elif j == 2:
        hi = float(m)
    elif j == 3:
        hi = _snap_root(m, 1, k)
    else:
        raise DomainError(f"interval index must be 1, 2 or 3, got {j}")
    return 0.5 * hi, hi


def _make_interval(
    index: int | None, lo: float, hi: float, m: int, tables: SieveTables
) -> PrimeIntervalSet:
    if m < 1 or m % 2 == 0:
        raise DomainError(f"modulus must be odd and positive, got {m}")
    if lo >= hi:
        primes = np.empty(0, dtype=np.int64)
    else:
        primes = tables.primes_in(lo, hi)
        shifted = (primes - 1) % m
        primes = primes[np.gcd(shifted, m) == 1]
    counts = np.bincount((primes - 1) % m, minlength=m).astype(np.int64)
    return PrimeIntervalSet(
        index=index, lo=lo, hi=hi, modulus=m, primes=primes, count_vector=counts
    )


def build_interval(j: int, m: int, k: int, tables: SieveTables) -> PrimeIntervalSet:
    """Canonical interval set I_j for modulus m and parameter k >= 2."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    if k < 10:
        warnings.warn(
            f"k={k} below 10: asymptotic exponents degrade, identities are unaffected",
            SmallKWarning,
            stacklevel=2,
        )
    lo, hi = interval_bounds(j, m, k)
    return _make_interval(j, lo, hi, m, tables)


def build_custom_interval(
    lo: float, hi: float, m: int, tables: SieveTables
) -> PrimeIntervalSet:
    """Interval set over explicit bounds (lo, hi]."""
    return _make_interval(None, lo, hi, m, tables)


def _prime_divisors(m: int) -> list[int]:
    out = []
    t, q = 2, m
    while t * t <= q:
        if q % t == 0:
            out.append(t)
            while q % t == 0:
                q //= t
        t += 1
    if q > 1:
        out.append(q)
    return out


def cardinality_prediction(j: int, m: int, k: int) -> float:
    """Main-term estimate of |I_j|:

        [Li(f_j(m)) - Li(0.5 f_j(m))] * prod_{p | m} (1 - 1/(p-1)),

    with Li endpoints clamped up to 2 (Li starts at 2 by convention).
    """
    if m < 3:
        raise DomainError(f"m must be >= 3, got {m}")
    lo, hi = interval_bounds(j, m, k)
    lo, hi = max(2.0, lo), max(2.0, hi)
    if hi <= lo:
        return 0.0
    prod = 1.0
    for p in _prime_divisors(m):
        prod *= 1.0 - 1.0 / (p - 1)
    return log_integral_between(lo, hi) * prod


def character_sum(chi: DirichletCharacter, interval: PrimeIntervalSet) -> complex:
    """S(chi) = sum_{p in I} chi(p-1), computed from the count vector."""
    if chi.context.modulus != interval.modulus:
        raise DomainError(
            f"character mod {chi.context.modulus} vs interval mod {interval.modulus}"
        )
    return complex(np.dot(chi.value_vector(), interval.count_vector))


def character_sums_all(
    ctx: UnitGroupContext, interval: PrimeIntervalSet
) -> np.ndarray:
    """S(chi) for every character at once (all_characters order)."""
    if ctx.modulus != interval.modulus:
        raise DomainError("context and interval moduli differ")
    return ctx.value_matrix() @ interval.count_vector


def rho_definition(chi_d: DirichletCharacter) -> complex:
    """The shifted-unit average sum_{v mod d} chi_0(v) chi_d(v-1) / phi(d),
    evaluated directly from its defining sum."""
    d = _require_primitive(chi_d)
    vals = chi_d.value_vector()
    units = chi_d.context.units()
    return complex(vals[(units - 1) % d].sum()) / chi_d.context.phi


def rho_closed_form(chi_d: DirichletCharacter) -> complex:
    """Closed form mu(d) * chi_d(-1) * prod_{p | d} (p-1)^(-1)."""
    d = _require_primitive(chi_d)
    comps = chi_d.context.components
    if any(c.alpha >= 2 for c in comps):
        return 0j
    mu = -1 if len(comps) % 2 else 1
    prod = 1.0
    for c in comps:
        prod /= c.prime - 1
    return mu * chi_d(-1) * prod


def _require_primitive(chi_d: DirichletCharacter) -> int:
    d = chi_d.context.modulus
    if d <= 1:
        raise DomainError("rho is defined for conductors d > 1")
    if not chi_d.is_primitive():
        raise DomainError(f"character mod {d} is not primitive")
    return d


def main_term_prediction(
    chi: DirichletCharacter, interval: PrimeIntervalSet, ctx: UnitGroupContext
) -> complex:
    """Predicted main term of S(chi):

        |I_j| * prod_{p | conductor} (1 + 1/(p-2)) * rho,

    using the closed form for rho.  For the principal character the
    conductor-1 convention rho = 1 makes this |I_j|.
    """
    if chi.context != ctx:
        raise DomainError("character does not belong to the given context")
    if chi.context.modulus != interval.modulus:
        raise DomainError("character and interval moduli differ")
    d = chi.conductor()
    if d == 1:
        return complex(interval.size)
    chi_d = primitive_inducing(chi)
    factor = 1.0
    for p in _prime_divisors(d):
        if p <= 2:
            raise DomainError(f"conductor prime {p} <= 2 makes 1/(p-2) singular")
        factor *= 1.0 + 1.0 / (p - 2)
    return interval.size * factor * rho_closed_form(chi_d)


def parseval_sum(interval: PrimeIntervalSet, ctx: UnitGroupContext) -> float:
    """sum_chi |S(chi)|^2, asserted equal to phi(m) * sum_b c[b]^2."""
    sums = character_sums_all(ctx, interval)
    total = float(np.sum(np.abs(sums) ** 2))
    exact = ctx.phi * float(np.sum(interval.count_vector.astype(np.float64) ** 2))
    if not math.isclose(total, exact, rel_tol=PARSEVAL_REL_TOL, abs_tol=1e-9):
        raise ConsistencyError(
            f"Parseval identity violated: {total} vs {exact} (m={interval.modulus})"
        )
    return total


# -- export -------------------------------------------------------------

CHARACTER_SUMS_FIELDS = (
    "character_index",
    "conductor",
    "abs_S1",
    "abs_S2",
    "abs_S3",
    "predicted_main_term",
    "deviation",
)


def write_character_sums(
    ctx: UnitGroupContext,
    intervals: tuple[PrimeIntervalSet, PrimeIntervalSet, PrimeIntervalSet],
    out: TextIO,
) -> None:
    """CSV of |S_j(chi)| with the main-term prediction and the worst
    relative deviation |S_j - predicted_j| / |I_j| across j."""
    sums = [character_sums_all(ctx, iv) for iv in intervals]
    chars = all_characters(ctx)
    conductors = ctx.conductors()
    w = csv.DictWriter(out, fieldnames=CHARACTER_SUMS_FIELDS, lineterminator="\n")
    w.writeheader()
    for i, chi in enumerate(chars):
        devs, preds = [], []
        for j, iv in enumerate(intervals):
            pred = main_term_prediction(chi, iv, ctx)
            preds.append(abs(pred))
            if iv.size:
                devs.append(abs(sums[j][i] - pred) / iv.size)
        w.writerow(
            {
                "character_index": i,
                "conductor": int(conductors[i]),
                "abs_S1": f"{abs(sums[0][i]):.9g}",
                "abs_S2": f"{abs(sums[1][i]):.9g}",
                "abs_S3": f"{abs(sums[2][i]):.9g}",
                "predicted_main_term": f"{max(preds):.9g}" if preds else "",
                "deviation": f"{max(devs):.9g}" if devs else "",
            }
        )
