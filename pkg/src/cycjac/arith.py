"""Exact elementary arithmetic: divisor counts, totients, orders,
class numbers of imaginary quadratic discriminants, and the two analytic
lower-bound functions used by the seed-set machinery.

Everything except the two bound functions is integer arithmetic.  The
bounds are evaluated with mpmath at >= 96 bits of working precision and
sign questions are settled by interval arithmetic that widens precision
until the sign is certain.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

import mpmath


def _check_positive(n: int, name: str = "n") -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"{name} must be an int, got {n!r}")
    if n < 1:
        raise ValueError(f"{name} must be >= 1, got {n}")


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n as ((p, e), ...), ascending primes."""
    _check_positive(n)
    out = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    # wheel over 6k +- 1
    p = 5
    while p * p <= m:
        for q in (p, p + 2):
            if m % q == 0:
                e = 0
                while m % q == 0:
                    m //= q
                    e += 1
                out.append((q, e))
        p += 6
    if m > 1:
        out.append((m, 1))
    out.sort()
    return tuple(out)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = factorize(n)
    return len(f) == 1 and f[0][1] == 1


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound by sieve."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, flag in enumerate(sieve) if flag]


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n."""
    _check_positive(n)
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def sigma0(n: int) -> int:
    """Number of positive divisors of n."""
    _check_positive(n)
    out = 1
    for _, e in factorize(n):
        out *= e + 1
    return out


def euler_phi(n: int) -> int:
    """Euler totient."""
    _check_positive(n)
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Order of a in (Z/n)^*.  Requires gcd(a, n) = 1."""
    _check_positive(n)
    a %= n
    if n == 1:
        return 1
    if gcd(a, n) != 1:
        raise ValueError(f"gcd({a}, {n}) != 1, order undefined")
    # order divides phi(n); walk divisors of phi ascending
    for d in divisors(euler_phi(n)):
        if pow(a, d, n) == 1:
            return d
    raise AssertionError("unreachable: order must divide phi(n)")


def prime_to_part(n: int, p: int) -> int:
    """Largest divisor of n coprime to p."""
    _check_positive(n)
    while n % p == 0:
        n //= p
    return n


def class_number(disc: int) -> int:
    """Class number h(D) for D = -p or D = -4p, p prime, by counting
    reduced binary quadratic forms (a, b, c):

        b^2 - 4ac = D,  |b| <= a <= c,  and b >= 0 if |b| = a or a = c.

    Only the discriminant shapes the genus formula needs are accepted;
    anything else is rejected rather than silently mishandled.
    """
    if disc >= 0:
        raise ValueError(f"discriminant must be negative, got {disc}")
    if disc % 4 not in (0, 1):
        raise ValueError(f"{disc} is not a discriminant (need 0 or 1 mod 4)")
    absd = -disc
    if not (is_prime(absd) or (absd % 4 == 0 and is_prime(absd // 4))):
        raise ValueError(f"class_number restricted to D = -p or -4p, got {disc}")
    count = 0
    a = 1
    while 4 * a * a <= 3 * absd:  # reduced forms have a <= sqrt(|D|/3)
        for b in range(-a, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == -b or a == c):
                continue
            if gcd(gcd(a, b), c) != 1:  # primitive forms only
                continue
            count += 1
        a += 1
    return count


# -- analytic bounds ---------------------------------------------------------

_MIN_PREC = 96  # bits; values stay far below 2^32, leaving > 64 fractional bits


def _h_interval(x: int | float, prec: int):
    """h(x) as an mpmath interval at the given working precision."""
    iv = mpmath.iv
    old = iv.prec
    try:
        iv.prec = prec
        xi = iv.mpf(x)
        s = iv.sqrt(xi)
        return (xi - 5 * s + 4) / 24 - (s / iv.pi) * (iv.log(16 * xi) + 2)
    finally:
        iv.prec = old


def h_bound(x: int | float) -> mpmath.mpf:
    """h(x) = (x - 5 sqrt(x) + 4)/24 - (sqrt(x)/pi) (log(16x) + 2),
    rounded to nearest at 96-bit working precision."""
    if x <= 0:
        raise ValueError(f"h_bound needs x > 0, got {x}")
    with mpmath.workprec(_MIN_PREC):
        xm = mpmath.mpf(x)
        s = mpmath.sqrt(xm)
        return (xm - 5 * s + 4) / 24 - (s / mpmath.pi) * (mpmath.log(16 * xm) + 2)


def f_bound(r: int) -> mpmath.mpf:
    """f(r) = h(180^r) - r, same precision contract as h_bound."""
    if r < 1:
        raise ValueError(f"f_bound needs r >= 1, got {r}")
    with mpmath.workprec(_MIN_PREC):
        return h_bound(180**r) - r


def f_bound_sign(r: int) -> int:
    """Certified sign of f(r): +1, -1, or 0 is never returned -- precision
    is widened until the interval enclosure of f(r) excludes zero."""
    if r < 1:
        raise ValueError(f"f_bound_sign needs r >= 1, got {r}")
    x = 180**r
    prec = _MIN_PREC
    while prec <= 4096:
        enc = _h_interval(x, prec) - r
        if enc.a > 0:
            return 1
        if enc.b < 0:
            return -1
        prec *= 2
    raise ArithmeticError(f"sign of f({r}) still ambiguous at 4096 bits")


def h_bound_sign_vs(x: int | float, threshold: int) -> int:
    """Certified sign of h(x) - threshold by the same widening scheme."""
    if x <= 0:
        raise ValueError(f"need x > 0, got {x}")
    prec = _MIN_PREC
    while prec <= 4096:
        enc = _h_interval(x, prec) - threshold
        if enc.a > 0:
            return 1
        if enc.b < 0:
            return -1
        prec *= 2
    raise ArithmeticError(f"sign of h({x}) - {threshold} still ambiguous at 4096 bits")
