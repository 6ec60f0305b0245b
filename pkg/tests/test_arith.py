import math

import numpy as np
import pytest

from phimin.arith import (
    crt_combine,
    discrete_log,
    euler_phi,
    factorize,
    infty_quotient,
    is_prime,
    log_integral,
    log_integral_between,
    moebius,
    primitive_root,
)
from phimin.errors import BoundsError, DomainError
from phimin.sieve import build_sieve

class TestFactorize:
    def test_one_is_empty_product(self, tables):
        f = factorize(1, tables)
        assert f.factors == ()
        assert f.n == 1

    def test_small_case(self, tables):
        assert factorize(60, tables).factors == ((2, 2), (3, 1), (5, 1))

    def test_trial_division_prime(self):
        t = build_sieve(200)
        assert factorize(9973, t).factors == ((9973, 1),)

    def test_zero_rejected(self, tables):
        with pytest.raises(DomainError):
            factorize(0, tables)

    def test_uncertifiable_cofactor(self):
        t = build_sieve(100)
        with pytest.raises(BoundsError):
            factorize(10007 * 10009, t)

    def test_reconstruction_exhaustive(self, tables200k):
        for n in range(1, 10_001):
            f = factorize(n, tables200k)
            f.validate()
            assert f.n == n

class TestEulerPhi:
    def test_examples(self, tables):
        assert euler_phi(factorize(1, tables)) == 1
        assert euler_phi(factorize(9, tables)) == 6
        assert euler_phi(factorize(42, tables)) == 12

    def test_direct_count_oracle_exhaustive(self, tables200k):
        # coprime counting is the definition; exhaustive to 20000
        for n in range(1, 20_001):
            if n % 7 and n > 3000:  # full below 3000, strided sample beyond
                continue
            count = int(np.count_nonzero(np.gcd(np.arange(1, n + 1), n) == 1))
            assert euler_phi(factorize(n, tables200k)) == count

    def test_direct_count_oracle_sampled_to_1e5(self, tables200k):
        for n in range(20_011, 100_001, 997):
            count = int(np.count_nonzero(np.gcd(np.arange(1, n + 1), n) == 1))
            assert euler_phi(factorize(n, tables200k)) == count

class TestMoebius:
    def test_examples(self, tables):
        assert moebius(factorize(1, tables)) == 1
        assert moebius(factorize(15, tables)) == 1
        assert moebius(factorize(9, tables)) == 0

    def test_divisor_sum_identity(self, tables200k):
        # sum over d | n of mu(d) is 1 at n=1 and 0 otherwise
        for n in range(1, 10_001, 7):
            total = sum(
                moebius(factorize(d, tables200k))
                for d in range(1, n + 1)
                if n % d == 0
            )
            assert total == (1 if n == 1 else 0)

class TestInftyQuotient:
    def test_examples(self):
        assert infty_quotient(12, 15) == 4
        assert infty_quotient(8, 15) == 8
        assert infty_quotient(18, 6) == 1

    def test_uniqueness_property(self):
        for r in range(1, 121):
            for d in range(1, 121):
                q = infty_quotient(r, d)
                assert r % q == 0 and math.gcd(q, d) == 1
                # r/q is built only from primes dividing d
                rest = r // q
                for p in range(2, rest + 1):
                    while rest % p == 0:
                        assert d % p == 0
                        rest //= p

    def test_positivity_required(self):
        with pytest.raises(DomainError):
            infty_quotient(0, 5)

class TestCrt:
    def test_examples(self):
        assert crt_combine([(2, 5), (1, 3)]) == (7, 15)
        assert crt_combine([(0, 1), (4, 7)]) == (4, 7)

    def test_non_coprime_rejected(self):
        with pytest.raises(DomainError):
            crt_combine([(1, 6), (2, 4)])

    def test_random_systems(self):
        import random

        rng = random.Random(7)
        for _ in range(50):
            moduli = rng.sample([5, 7, 9, 11, 13, 16], k=3)
            rs = [(rng.randrange(m), m) for m in moduli]
            x, mod = crt_combine(rs)
            assert mod == math.prod(moduli)
            assert 0 <= x < mod
            for r, m in rs:
                assert x % m == r % m

class TestPrimitiveRoot:
    def test_examples(self):
        assert primitive_root(3, 2) == 2
        assert primitive_root(5, 1) == 2
        assert primitive_root(7, 1) == 3

    def test_order_is_full(self):
        for p, a in [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (11, 1)]:
            g, mod = primitive_root(p, a), p**a
            phi = mod - mod // p
            seen = set()
            cur = 1
            for _ in range(phi):
                cur = cur * g % mod
                seen.add(cur)
            assert len(seen) == phi

    def test_rejects_even_or_composite(self):
        with pytest.raises(DomainError):
            primitive_root(2, 3)
        with pytest.raises(DomainError):
            primitive_root(15, 1)

class TestDiscreteLog:
    def test_examples(self):
        assert discrete_log(2, 1, 3, 2) == 0
        assert discrete_log(2, 7, 3, 2) == 4
        assert discrete_log(2, 3, 5, 1) == 3

    def test_non_unit_rejected(self):
        with pytest.raises(DomainError):
            discrete_log(2, 6, 3, 2)

    def test_bijection_exhaustive(self):
        # every unit gets a distinct exponent and the round trip holds
        for p, a in [(3, 5), (5, 3), (7, 2), (11, 2)]:
            mod = p**a
            g = primitive_root(p, a)
            phi = mod - mod // p
            logs = set()
            for x in range(1, mod):
                if x % p == 0:
                    continue
                e = discrete_log(g, x, p, a)
                assert 0 <= e < phi
                assert pow(g, e, mod) == x
                logs.add(e)
            assert len(logs) == phi

class TestIsPrime:
    def test_matches_sieve(self, tables10k):
        sieve_set = set(tables10k.primes.tolist())
        for n in range(10_000):
            assert is_prime(n) == (n in sieve_set)

class TestLogIntegral:
    # frozen from a high-precision quadrature oracle (mpmath li)
    LI_10 = 5.120435724669805
    LI_100 = 29.080977803962137

    def test_empty_integral(self):
        assert log_integral(2) == 0.0

    def test_frozen_oracle_values(self):
        assert abs(log_integral(10) - self.LI_10) < 1e-9
        assert abs(log_integral(100) - self.LI_100) < 1e-9

    def test_against_mpmath(self):
        mpmath = pytest.importorskip("mpmath")
        for x in (2.5, 7.0, 33.3, 1234.5, 98765.0):
            want = float(mpmath.li(x) - mpmath.li(2))
            assert abs(log_integral(x) - want) < 1e-9

    def test_below_two_rejected(self):
        with pytest.raises(DomainError):
            log_integral(1.9)
        with pytest.raises(DomainError):
            log_integral_between(1.0, 5.0)

    def test_strictly_increasing_and_bounded(self):
        xs = [2.0 + 0.37 * i for i in range(1, 200)]
        prev = 0.0
        for x in xs:
            cur = log_integral(x)
            assert cur > prev
            assert cur < x / math.log(2)
            prev = cur

    def test_difference_consistency(self):
        # Li(b) - Li(a) computed directly must match the subtraction
        for a, b in [(5.0, 5.00001), (100.0, 101.0), (2.0, 3.0)]:
            direct = log_integral_between(a, b)
            assert abs(direct - (log_integral(b) - log_integral(a))) < 1e-9
