"""Dirichlet characters modulo an odd integer m.

The unit group (Z/mZ)* is represented through its prime-power components
p^a || m, each cyclic with a least primitive root (m odd), so a character
is just a vector of exponents on the component generators.  Values are
roots of unity exp(2*pi*i * t / T) with T = lcm of the component orders;
the numerator t is kept as an exact integer, which makes conductors and
primitive induction exact, and only the final evaluation is floating
point.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .arith import factorize, primitive_root
from .errors import ConsistencyError, DomainError, EvenModulusError
from .sieve import SieveTables


@dataclass(frozen=True)
class Component:
    """One cyclic factor of (Z/mZ)*: units mod prime^alpha."""

    prime: int
    alpha: int
    prime_power: int
    generator: int
    order: int


class UnitGroupContext:
    """Generators, orders, and discrete-log tables for (Z/mZ)*, m odd.

    Immutable after construction; safe to share across workers.
    """

    def __init__(self, modulus: int, components: Sequence[Component]):
        self.modulus = modulus
        self.components = tuple(components)
        self.orders = tuple(c.order for c in self.components)
        self.phi = math.prod(self.orders)
        self.value_order = math.lcm(*self.orders) if self.orders else 1
        self._build_tables()
        self._value_matrix: np.ndarray | None = None
        self._conductors: np.ndarray | None = None

    def _build_tables(self) -> None:
        m = self.modulus
        residues = np.arange(max(m, 1), dtype=np.int64)
        unit_mask = np.ones(max(m, 1), dtype=bool)
        dlogs = np.zeros((len(self.components), max(m, 1)), dtype=np.int64)
        component_dlogs = []
        for i, comp in enumerate(self.components):
            table = np.full(comp.prime_power, -1, dtype=np.int64)
            cur = 1
            for j in range(comp.order):
                table[cur] = j
                cur = cur * comp.generator % comp.prime_power
            component_dlogs.append(table)
            local = table[residues % comp.prime_power]
            unit_mask &= local >= 0
            dlogs[i] = local
        dlogs[:, ~unit_mask] = 0
        self.unit_mask = unit_mask
        self.dlogs = dlogs
        self.component_dlogs = tuple(component_dlogs)
        T = self.value_order
        self.roots = np.exp(2j * np.pi * np.arange(T) / T)

    def units(self) -> np.ndarray:
        """Ascending unit residues (for m = 1 this is [0])."""
        return np.nonzero(self.unit_mask)[0]

    def value_matrix(self) -> np.ndarray:
        """Rows = characters in all_characters order, columns = residues."""
        if self._value_matrix is None:
            self._value_matrix = np.vstack(
                [chi.value_vector() for chi in all_characters(self)]
            )
        return self._value_matrix

    def conductors(self) -> np.ndarray:
        """Conductor of each character, in all_characters order."""
        if self._conductors is None:
            self._conductors = np.array(
                [chi.conductor() for chi in all_characters(self)], dtype=np.int64
            )
        return self._conductors

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UnitGroupContext) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(("UnitGroupContext", self.modulus))

    def __repr__(self) -> str:
        comps = [(c.prime_power, c.generator, c.order) for c in self.components]
        return f"UnitGroupContext(modulus={self.modulus}, components={comps})"


def _context_from_prime_powers(m: int, factors: Iterable[tuple[int, int]]) -> UnitGroupContext:
    comps = []
    for p, a in factors:
        pp = p**a
        g = primitive_root(p, a)
        comps.append(
            Component(prime=p, alpha=a, prime_power=pp, generator=g, order=pp - pp // p)
        )
    return UnitGroupContext(m, comps)


def build_unit_group(m: int, tables: SieveTables) -> UnitGroupContext:
    """Unit-group context for odd m >= 1 (m = 1 gives the trivial group)."""
    if m < 1:
        raise DomainError(f"modulus must be positive, got {m}")
    if m % 2 == 0:
        raise EvenModulusError(
            f"modulus {m} is even; for even m only the class 1 (mod m) "
            "contains a totient, so odd m is required here"
        )
    return _context_from_prime_powers(m, factorize(m, tables).factors)


class DirichletCharacter:
    """A character mod m, stored as exponents on the component generators.

    chi(x) = exp(2*pi*i * sum_i e_i * dlog_i(x) / order_i) on units,
    0 off units.  Multiplication, conjugation, and conductor are exact
    integer operations on the exponent vector.
    """

    __slots__ = ("context", "exponents", "_conductor")

    def __init__(self, context: UnitGroupContext, exponents: Sequence[int]):
        if len(exponents) != len(context.components):
            raise DomainError("exponent vector length mismatch")
        self.context = context
        self.exponents = tuple(
            e % o for e, o in zip(exponents, context.orders)
        )
        self._conductor: int | None = None

    # -- exact layer ----------------------------------------------------

    def angle_numerator(self, x: int) -> int | None:
        """t with chi(x) = exp(2*pi*i*t/T), or None when gcd(x, m) > 1."""
        ctx = self.context
        r = x % ctx.modulus if ctx.modulus > 1 else 0
        if not ctx.unit_mask[r]:
            return None
        T = ctx.value_order
        t = 0
        for e, o, dlog in zip(self.exponents, ctx.orders, ctx.dlogs):
            t += e * int(dlog[r]) * (T // o)
        return t % T

    # -- numeric layer --------------------------------------------------

    def __call__(self, x: int) -> complex:
        t = self.angle_numerator(x)
        return 0j if t is None else complex(self.context.roots[t])

    def value_vector(self) -> np.ndarray:
        """chi on residues 0..m-1 as a complex array."""
        ctx = self.context
        T = ctx.value_order
        t = np.zeros(max(ctx.modulus, 1), dtype=np.int64)
        for e, o, dlog in zip(self.exponents, ctx.orders, ctx.dlogs):
            t += e * (T // o) * dlog
        vals = ctx.roots[t % T]
        return np.where(ctx.unit_mask, vals, 0j)

    # -- group structure ------------------------------------------------

    def is_principal(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if self.context != other.context:
            raise DomainError("characters live on different moduli")
        return DirichletCharacter(
            self.context,
            [a + b for a, b in zip(self.exponents, other.exponents)],
        )

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.context, [-e for e in self.exponents])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and other.context.modulus == self.context.modulus
            and other.exponents == self.exponents
        )

    def __hash__(self) -> int:
        return hash((self.context.modulus, self.exponents))

    def __repr__(self) -> str:
        return f"DirichletCharacter(mod {self.context.modulus}, exponents={self.exponents})"

    def order(self) -> int:
        return math.lcm(
            *(o // math.gcd(e, o) for e, o in zip(self.exponents, self.context.orders))
        ) if self.exponents else 1

    # -- conductor ------------------------------------------------------

    def conductor(self) -> int:
        """Least d | m with chi trivial on every unit = 1 (mod d).

        Computed per component by direct triviality testing on the kernel
        filtration (units = 1 mod p^beta), multiplicative across components.
        """
        if self._conductor is None:
            cond = 1
            for comp, dlog, e in zip(
                self.context.components,
                self.context.component_dlogs,
                self.exponents,
            ):
                cond *= _component_conductor(comp, dlog, e)
            self._conductor = cond
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor() == self.context.modulus


def _component_conductor(comp: Component, dlog: np.ndarray, e: int) -> int:
    """Least p^beta such that the exponent-e character on this component
    is trivial on units congruent to 1 mod p^beta (kernel filtration)."""
    if e % comp.order == 0:
        return 1
    pp, order = comp.prime_power, comp.order
    for beta in range(1, comp.alpha + 1):
        pb = comp.prime**beta
        if all((e * int(dlog[u])) % order == 0 for u in range(1, pp, pb)):
            return pb
    return pp


def all_characters(ctx: UnitGroupContext) -> list[DirichletCharacter]:
    """All phi(m) characters, ordered lexicographically by exponent
    vector; the principal character comes first."""
    return [
        DirichletCharacter(ctx, exps)
        for exps in itertools.product(*(range(o) for o in ctx.orders))
    ]


def principal_character(ctx: UnitGroupContext) -> DirichletCharacter:
    return DirichletCharacter(ctx, [0] * len(ctx.components))


def psi_character(ctx: UnitGroupContext) -> DirichletCharacter:
    """The character mod m induced by the nontrivial character mod 3:
    +1 on x = 1 (mod 3), -1 on x = 2 (mod 3), 0 off units.  Defined only
    when 3 | m; it is the unique character of conductor 3."""
    if ctx.modulus % 3 != 0:
        raise DomainError(f"3 does not divide {ctx.modulus}")
    exps = [
        comp.order // 2 if comp.prime == 3 else 0 for comp in ctx.components
    ]
    return DirichletCharacter(ctx, exps)


def primitive_inducing(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character mod conductor(chi) that induces chi.

    Agrees with chi on every unit coprime to m; for the principal
    character this is the trivial character mod 1.
    """
    ctx = chi.context
    f = chi.conductor()
    if f == ctx.modulus:
        return chi
    kept = []
    for comp, dlog, e in zip(ctx.components, ctx.component_dlogs, chi.exponents):
        c = _component_conductor(comp, dlog, e)
        if c > 1:
            kept.append((comp.prime, round(math.log(c, comp.prime))))
    new_ctx = _context_from_prime_powers(f, kept)
    T = ctx.value_order
    exps = []
    for comp in new_ctx.components:
        lift = _lift_unit(comp.generator, comp.prime, ctx)
        t = chi.angle_numerator(lift)
        if t is None:
            raise ConsistencyError("lift of a unit is not a unit")
        num = t * comp.order
        if num % T:
            raise ConsistencyError("induced character value is not exact")
        exps.append(num // T)
    return DirichletCharacter(new_ctx, exps)


def _lift_unit(x: int, keep_prime: int, ctx: UnitGroupContext) -> int:
    """Unit mod m congruent to x mod keep_prime^alpha and 1 elsewhere."""
    lift, mod = 0, 1
    for comp in ctx.components:
        r = x % comp.prime_power if comp.prime == keep_prime else 1
        t = (r - lift) * pow(mod, -1, comp.prime_power) % comp.prime_power
        lift += mod * t
        mod *= comp.prime_power
    return lift % max(mod, 1)


# -- export -------------------------------------------------------------

CHARACTER_TABLE_FIELDS = (
    "character_index",
    "exponents",
    "conductor",
    "is_primitive",
    "order",
)


def character_table_rows(ctx: UnitGroupContext) -> list[dict]:
    rows = []
    for i, chi in enumerate(all_characters(ctx)):
        rows.append(
            {
                "character_index": i,
                "exponents": ";".join(str(e) for e in chi.exponents),
                "conductor": chi.conductor(),
                "is_primitive": chi.is_primitive(),
                "order": chi.order(),
            }
        )
    return rows


def write_character_table(ctx: UnitGroupContext, out: TextIO) -> None:
    """CSV table of every character mod m with conductor and order."""
    w = csv.DictWriter(out, fieldnames=CHARACTER_TABLE_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in character_table_rows(ctx):
        w.writerow(row)
