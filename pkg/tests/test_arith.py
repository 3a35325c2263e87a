"""Oracle tests for the elementary arithmetic layer.

Every nontrivial function is checked against an independently written
oracle: sieves for multiplicative functions, the Dirichlet character-sum
formula for class numbers, and brute-force power walks for orders.
"""

from __future__ import annotations

import math
import random
from math import gcd, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cycjac.arith import (
    class_number,
    divisors,
    euler_phi,
    f_bound,
    f_bound_sign,
    factorize,
    h_bound,
    h_bound_sign_vs,
    is_prime,
    multiplicative_order,
    prime_to_part,
    primes_up_to,
    sigma0,
)

BOUND = 10_000


def _spf_table(bound: int) -> list[int]:
    """Smallest-prime-factor sieve, the oracle backbone."""
    spf = list(range(bound + 1))
    for p in range(2, int(bound**0.5) + 1):
        if spf[p] == p:
            for m in range(p * p, bound + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


SPF = _spf_table(BOUND)


def _oracle_factor(n: int, spf=None) -> dict[int, int]:
    spf = SPF if spf is None else spf
    out: dict[int, int] = {}
    while n > 1:
        p = spf[n]
        out[p] = out.get(p, 0) + 1
        n //= p
    return out


def test_factorize_against_sieve():
    for n in range(1, BOUND + 1):
        assert dict(factorize(n)) == _oracle_factor(n)


def test_factorize_rejects_nonpositive():
    for bad in (0, -5):
        with pytest.raises(ValueError):
            factorize(bad)
    with pytest.raises(ValueError):
        factorize(True)


def test_sigma0_and_phi_against_sieve():
    for n in range(1, BOUND + 1):
        f = _oracle_factor(n)
        assert sigma0(n) == prod(e + 1 for e in f.values())
        phi = n
        for p in f:
            phi = phi // p * (p - 1)
        assert euler_phi(n) == phi


def test_sigma0_and_phi_sampled_large():
    rng = random.Random(20260822)
    big_spf = _spf_table(10**6)
    for _ in range(5000):
        n = rng.randint(1, 10**6)
        f = _oracle_factor(n, big_spf)
        assert sigma0(n) == prod(e + 1 for e in f.values())
        phi = n
        for p in f:
            phi = phi // p * (p - 1)
        assert euler_phi(n) == phi


def test_divisors_brute():
    for n in range(1, 3000):
        assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


def test_primes_and_is_prime():
    sieve = [True] * (BOUND + 1)
    sieve[0] = sieve[1] = False
    for p in range(2, int(BOUND**0.5) + 1):
        if sieve[p]:
            for m in range(p * p, BOUND + 1, p):
                sieve[m] = False
    assert primes_up_to(BOUND) == [n for n in range(BOUND + 1) if sieve[n]]
    for n in range(BOUND + 1):
        assert is_prime(n) == sieve[n]
    assert primes_up_to(1) == []


def test_multiplicative_order_brute():
    for n in range(1, 120):
        for a in range(1, n + 1):
            if gcd(a, n) != 1:
                with pytest.raises(ValueError):
                    multiplicative_order(a, n)
                continue
            k, x = 1, a % n
            while x != 1 % n:
                x = x * a % n
                k += 1
            assert multiplicative_order(a, n) == k


def test_prime_to_part():
    assert prime_to_part(48, 2) == 3
    assert prime_to_part(48, 3) == 16
    assert prime_to_part(35, 2) == 35
    assert prime_to_part(1, 7) == 1


@given(st.integers(1, 4000), st.integers(1, 4000))
def test_multiplicativity(a, b):
    if gcd(a, b) == 1:
        assert sigma0(a * b) == sigma0(a) * sigma0(b)
        assert euler_phi(a * b) == euler_phi(a) * euler_phi(b)


@given(st.integers(2, 5000))
def test_phi_divisor_sum(n):
    assert sum(euler_phi(d) for d in divisors(n)) == n


# -- class numbers -----------------------------------------------------------


def _jacobi(a: int, n: int) -> int:
    assert n > 0 and n % 2 == 1
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def _kronecker(D: int, t: int) -> int:
    assert t > 0
    twos = 0
    while t % 2 == 0:
        t //= 2
        twos += 1
    if twos and D % 2 == 0:
        return 0
    s = 1
    if twos and D % 8 in (3, 5):
        s = (-1) ** twos
    return s * (_jacobi(D % t, t) if t > 1 else 1)


def _dirichlet_h(D: int) -> int:
    """h(D) for fundamental D < -4 via the weighted character sum."""
    aD = -D
    total = sum(t * _kronecker(D, t) for t in range(1, aD))
    assert total % aD == 0
    return abs(total) // aD


def test_class_number_fundamental_oracle():
    checked = 0
    for p in primes_up_to(300):
        if p % 4 == 3 and p > 3:
            assert class_number(-p) == _dirichlet_h(-p)
            checked += 1
        if p % 4 == 1:
            assert class_number(-4 * p) == _dirichlet_h(-4 * p)
            checked += 1
    assert checked > 50


def test_class_number_nonmaximal_order_relation():
    # h(-4p) = h(-p) * (2 - (-p/2)) for p > 3, p = 3 mod 4
    for p in primes_up_to(300):
        if p % 4 == 3 and p > 3:
            factor = 1 if p % 8 == 7 else 3
            assert class_number(-4 * p) == factor * class_number(-p)


def test_class_number_pins():
    known = {
        -3: 1,
        -7: 1,
        -8: 1,
        -11: 1,
        -12: 1,
        -19: 1,
        -20: 2,
        -23: 3,
        -43: 1,
        -47: 5,
        -67: 1,
        -68: 4,
        -148: 2,
        -163: 1,
    }
    for D, h in known.items():
        assert class_number(D) == h, D


def test_class_number_rejects_bad_discriminants():
    for bad in (5, 0, -1, -2, -6, -10, -21):
        with pytest.raises(ValueError):
            class_number(bad)
    with pytest.raises(ValueError):
        class_number(-36)  # 4 * 9, not 4 * prime


# -- analytic bounds ---------------------------------------------------------


def test_h_bound_matches_direct_formula():
    for x in (10**4, 123456, 10**8):
        expect = (x - 5 * x**0.5 + 4) / 24 - (x**0.5 / math.pi) * (math.log(16 * x) + 2)
        assert abs(float(h_bound(x)) - expect) < 1e-6 * max(1.0, abs(expect))


def test_f_bound_signs():
    assert f_bound_sign(1) == -1
    assert f_bound(1) < 0
    # f is increasing from 2 on and already positive there; the r = 7
    # value is the one the seed-set argument leans on
    for r in range(2, 10):
        assert f_bound_sign(r) == 1
        assert f_bound(r) > 0
    assert f_bound_sign(7) == 1


def test_f_bound_increasing_from_two():
    vals = [f_bound(r) for r in range(2, 10)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_h_strictly_increasing_geometric_grid():
    lo, hi, npts = 10**4, 10**10, 1000
    ratio = (hi / lo) ** (1 / (npts - 1))
    xs = [lo * ratio**i for i in range(npts)]
    vals = [h_bound(x) for x in xs]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_h_sign_vs_threshold():
    assert h_bound_sign_vs(10**4, 1) == -1
    assert h_bound_sign_vs(10**5, 1) == 1
    assert h_bound_sign_vs(100, 1) == -1
    # the threshold-1 crossing lives between 12000 and 14000
    assert h_bound_sign_vs(12000, 1) == -1
    assert h_bound_sign_vs(14000, 1) == 1


def test_bounds_reject_bad_input():
    for fn in (h_bound, lambda x: h_bound_sign_vs(x, 1)):
        with pytest.raises(ValueError):
            fn(0)
    with pytest.raises(ValueError):
        f_bound(0)
    with pytest.raises(ValueError):
        f_bound_sign(0)
