"""Elementary arithmetic: factorization, multiplicative functions, CRT,
discrete logarithms, and the logarithmic integral Li(x) = int_2^x dt/log t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, DomainError
from .sieve import SieveTables

# Deterministic Miller-Rabin witness set, valid for n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Canonical factorization: (prime, exponent) pairs, primes increasing."""

    factors: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def validate(self) -> None:
        prev = 1
        for p, e in self.factors:
            if p <= prev or e < 1 or not is_prime(p):
                raise DomainError(f"invalid factorization entry ({p}, {e})")
            prev = p


def factorize(n: int, tables: SieveTables) -> Factorization:
    """Factor n >= 1.  Uses the SPF table when it covers n, otherwise
    trial division by the stored primes with a primality test on the
    cofactor."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    if n == 1:
        return Factorization(())
    out = []
    if n <= tables.spf_limit:
        spf = tables.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return Factorization(tuple(out))
    for p in tables.primes:
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        if not is_prime(n):
            raise BoundsError(
                f"cofactor {n} not certified prime; sieve limit too small"
            )
        out.append((n, 1))
    return Factorization(tuple(out))


def euler_phi(f: Factorization) -> int:
    out = 1
    for p, e in f.factors:
        out *= p ** (e - 1) * (p - 1)
    return out


def moebius(f: Factorization) -> int:
    if any(e >= 2 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def infty_quotient(r: int, d: int) -> int:
    """Largest divisor of r coprime to d: delete from r every prime it
    shares with d, to full multiplicity."""
    if r < 1 or d < 1:
        raise DomainError("arguments must be positive")
    q = r
    while True:
        g = math.gcd(q, d)
        if g == 1:
            return q
        q //= g


def crt_combine(residues: list[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences x = r_i (mod m_i) with pairwise coprime moduli.

    Returns (x, prod m_i) with 0 <= x < prod m_i.
    """
    x, mod = 0, 1
    for r, m in residues:
        if m < 1:
            raise DomainError(f"modulus {m} must be positive")
        if math.gcd(mod, m) != 1:
            raise DomainError(f"moduli not pairwise coprime at {m}")
        # x' = x (mod mod), x' = r (mod m)
        t = (r - x) * pow(mod, -1, m) % m if m > 1 else 0
        x += mod * t
        mod *= m
    return x % mod, mod


def primitive_root(p: int, alpha: int = 1) -> int:
    """Least primitive root modulo p^alpha, for odd prime p."""
    if p % 2 == 0 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")
    if alpha < 1:
        raise DomainError("alpha must be >= 1")
    order = p ** (alpha - 1) * (p - 1)
    q = order
    prime_parts = []
    t = 2
    while t * t <= q:
        if q % t == 0:
            prime_parts.append(t)
            while q % t == 0:
                q //= t
        t += 1
    if q > 1:
        prime_parts.append(q)
    mod = p**alpha
    for g in range(2, mod):
        if g % p == 0:
            continue
        if all(pow(g, order // l, mod) != 1 for l in prime_parts):
            return g
    raise DomainError(f"no primitive root found mod {p}^{alpha}")  # unreachable


def _bsgs(base: int, target: int, order: int, mod: int) -> int:
    """x with base^x = target (mod mod), 0 <= x < order (order of base)."""
    m = math.isqrt(order - 1) + 1
    table = {}
    cur = 1
    for j in range(m):
        table.setdefault(cur, j)
        cur = cur * base % mod
    # giant step: base^{-m}
    step = pow(base, (order - m) % order, mod)
    cur = target
    for i in range(m):
        j = table.get(cur)
        if j is not None:
            return (i * m + j) % order
        cur = cur * step % mod
    raise DomainError("target not in the cyclic subgroup")


def discrete_log(g: int, x: int, p: int, alpha: int = 1) -> int:
    """Exponent k with g^k = x (mod p^alpha) via Pohlig-Hellman, with
    baby-step/giant-step inside each prime-power block of the group order.
    """
    mod = p**alpha
    if math.gcd(x, p) != 1:
        raise DomainError(f"{x} is not a unit mod {p}^{alpha}")
    n = p ** (alpha - 1) * (p - 1)
    x %= mod
    # factor the group order by trial division (n is small here)
    parts = []
    t, q = 2, n
    while t * t <= q:
        if q % t == 0:
            e = 0
            while q % t == 0:
                q //= t
                e += 1
            parts.append((t, e))
        t += 1
    if q > 1:
        parts.append((q, 1))
    congruences = []
    for l, e in parts:
        le = l**e
        g_l = pow(g, n // le, mod)  # order l^e
        h_l = pow(x, n // le, mod)
        gamma = pow(g_l, l ** (e - 1), mod)  # order l
        y = 0
        for j in range(e):
            h_j = pow(h_l * pow(g_l, -y, mod) % mod, l ** (e - 1 - j), mod)
            d = _bsgs(gamma, h_j, l, mod)
            y += d * l**j
        congruences.append((y, le))
    return crt_combine(congruences)[0]


# 32-point Gauss-Legendre nodes; exact to machine precision for 1/log t
# on the geometric subintervals used below.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def log_integral_between(a: float, b: float) -> float:
    """int_a^b dt/log t for 2 <= a <= b, by composite Gauss-Legendre on
    geometrically split subintervals (ratio <= 2)."""
    if a < 2:
        raise DomainError(f"lower endpoint {a} below 2")
    if b <= a:
        if b < a:
            raise DomainError("endpoints out of order")
        return 0.0
    total = 0.0
    lo = a
    while lo < b:
        hi = min(2.0 * lo, b)
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        t = mid + half * _GL_NODES
        total += half * float(np.sum(_GL_WEIGHTS / np.log(t)))
        lo = hi
    return total


def log_integral(x: float) -> float:
    """Li(x) = int_2^x dt/log t."""
    if x < 2:
        raise DomainError(f"Li undefined below 2, got {x}")
    return log_integral_between(2.0, x)
