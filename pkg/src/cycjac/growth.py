"""Genus arithmetic, rank lower bounds, and the seed sets S_r.

Everything here rides on two exact quantities: the genus of X_0(N), an
integer formula in the divisor structure of N, and the genus of the
Fricke quotient X_0^+(p), which drops out of class numbers of imaginary
quadratic orders counted by reduced binary forms.  Under BSD the plus
genus bounds the rank of J_0(p)(Q) from below, which caps the levels of
any given rank: S_r collects every level not excluded for rank r, built
from the rank-zero list S_0 by a prime genus scan plus a divisor-closure
pass over composites.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .arith import (
    class_number,
    divisors,
    euler_phi,
    factorize,
    h_bound_sign_vs,
    is_prime,
    prime_to_part,
    primes_up_to,
    sigma0,
)
from .decomposition import decompose_J0
from .errors import CycjacError
from .rank import Provenance
from .store import Snapshot


def genus_X0(N: int) -> int:
    """Genus of X_0(N) by the index/elliptic-point/cusp count."""
    if N < 1:
        raise ValueError("level must be positive")
    fac = factorize(N)
    mu = 1
    for p, e in fac:
        mu *= p**e + p ** (e - 1)
    if N % 4 == 0:
        nu2 = 0
    else:
        nu2 = 1
        for p, _ in fac:
            if p != 2:
                nu2 *= 1 + (1 if p % 4 == 1 else -1)
    if N % 9 == 0:
        nu3 = 0
    else:
        nu3 = 1
        for p, _ in fac:
            if p != 3:
                nu3 *= 1 + (1 if p % 3 == 1 else -1)
    cusps = sum(euler_phi(gcd(d, N // d)) for d in divisors(N))
    twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps
    if twelve_g % 12 or twelve_g < 0:
        raise ArithmeticError(f"genus bookkeeping fails at level {N}")
    return twelve_g // 12


def class_numbers_batch(d_max: int) -> list[int]:
    """h[d] = class number of discriminant -d for every d up to d_max.

    One sweep over reduced primitive forms (a, b, c): each contributes to
    d = 4ac - b^2, weight 2 when (a, b, c) and (a, -b, c) are distinct
    reduced forms.  Entries at d not congruent to 0 or 3 mod 4 stay 0.
    """
    if d_max < 3:
        return [0] * (d_max + 1)
    h = [0] * (d_max + 1)
    for a in range(1, isqrt(d_max // 3) + 1):
        four_a = 4 * a
        for b in range(a + 1):
            g_ab = gcd(a, b)
            c_top = (b * b + d_max) // four_a
            for c in range(a, c_top + 1):
                if gcd(g_ab, c) != 1:
                    continue
                d = four_a * c - b * b
                h[d] += 2 if 0 < b < a < c else 1
    return h


def genus_X0plus(p: int, h_table: list[int] | None = None) -> int:
    """Genus of the Fricke quotient X_0^+(p) for a prime p.

    The quotient map has nu fixed points counted by class numbers, and
    2(g_0 + 1) - nu must be divisible by 4; a failure there means the
    class number input is wrong, so it is a hard error, never rounded.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        return 0

    def h(d: int) -> int:
        if h_table is not None:
            return h_table[d]
        return class_number(-d)

    nu = h(4 * p)
    if p % 4 == 3:
        nu += h(p)
    num = 2 * (genus_X0(p) + 1) - nu
    if num % 4 or num < 0:
        raise ArithmeticError(f"fixed-point count {nu} inconsistent at prime {p}")
    return num // 4


def _is_square(n: int) -> bool:
    r = isqrt(n)
    return r * r == n


def genus_X0plus_composite(N: int, snapshot: Snapshot) -> int:
    """Genus of X_0^+(N) from Fricke eigenvalue bookkeeping on old blocks.

    The block of a level-N_f orbit inside S_2(Gamma_0(N)) has one copy
    per divisor d of t = N/N_f, and the Fricke involution swaps d with
    t/d, twisted by the orbit's own Fricke sign.  Off-diagonal pairs
    contribute half the block; the diagonal d = sqrt(t) copy survives
    exactly when the sign is +1.  Validated against direct fixed-space
    dimensions when the snapshot was generated.
    """
    if N < 1:
        raise ValueError("level must be positive")
    total = 0
    for orb in snapshot.query(N, 1):
        t = N // orb.level
        s = 1 if _is_square(t) else 0
        fixed = (sigma0(t) - s) // 2
        if s:
            fixed += (1 + orb.fricke_sign()) // 2
        total += fixed * orb.dimension
    return total


def fricke_dimension(p: int, snapshot: Snapshot) -> int:
    """Dimension of the Fricke-fixed subspace at prime level, from stored signs."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return sum(
        orb.dimension
        for orb in snapshot.query(p, 1)
        if orb.level == p and orb.fricke_sign() == 1
    )


@dataclass(frozen=True)
class RankBound:
    """A lower bound on rank J_0(level)(Q) with its provenance."""

    level: int
    value: int
    provenance: Provenance


def rank_lower_bound_prime(
    p: int, snapshot: Snapshot | None = None, bsd: bool = True
) -> RankBound:
    """rank J_0(p)(Q) >= g_0^+(p), conditional on BSD.

    The Fricke-fixed subspace has odd-order L-zeros, so under BSD each
    fixed orbit carries positive rank and the plus genus bounds the total
    from below.  Without BSD only the trivial bound 0 is certified.  When
    a snapshot covers p, the stored data is audited: a Fricke sign of +1
    must come with a vanishing central value and an odd certified
    analytic rank, and -1 with an even one.
    """
    if not is_prime(p):
        raise ValueError(f"level {p} is not prime; the plus-genus bound needs a prime")
    if snapshot is not None and snapshot.coverage_mode(p) is not None:
        for orb in snapshot.query(p, 1):
            if orb.level != p:
                continue
            w = orb.fricke_sign()
            ar = orb.analytic_rank
            if w == 1 and not orb.lval_vanishes:
                raise CycjacError(
                    f"{orb.label}: Fricke sign +1 with nonvanishing L-value"
                )
            if ar is not None and (-1) ** ar != -w:
                raise CycjacError(
                    f"{orb.label}: Fricke sign {w:+d} inconsistent with "
                    f"analytic rank {ar}"
                )
    if not bsd:
        return RankBound(level=p, value=0, provenance=Provenance.UNCONDITIONAL_ZERO)
    return RankBound(
        level=p, value=genus_X0plus(p), provenance=Provenance.BSD_CONDITIONAL
    )


def multiplicity_identity_check(N: int, p: int, e: int) -> bool:
    """Old-factor multiplicities split along N = M p^e as they must.

    For every divisor d of M = N / p^e, sigma_0(N/d) has to equal
    sigma_0(M/d) + e * sigma_0(m) with m the prime-to-p part of M/d.
    """
    if e < 1 or not is_prime(p):
        raise ValueError("need a prime p and e >= 1")
    pe = p**e
    if N % pe:
        raise ValueError(f"{p}^{e} does not divide {N}")
    M = N // pe
    return all(
        sigma0(N // d) == sigma0(M // d) + e * sigma0(prime_to_part(M // d, p))
        for d in divisors(M)
    )


def multiplicity_identity_all_splits(N: int) -> bool:
    return all(
        multiplicity_identity_check(N, p, e)
        for p, v in factorize(N)
        for e in range(1, v + 1)
    )


def containment_coprime(M1: int, M2: int, snapshot: Snapshot) -> bool:
    """J_0(M1)^sigma_0(M2) x J_0(M2)^sigma_0(M1) sits inside J_0(M1 M2).

    Checked on factor multisets: every orbit of the small Jacobians must
    appear in the product with at least the stacked multiplicity.
    """
    if M1 < 2 or M2 < 2:
        raise ValueError("both factors must exceed 1")
    if gcd(M1, M2) != 1:
        raise ValueError(f"{M1} and {M2} are not coprime")
    big = decompose_J0(M1 * M2, snapshot)
    for small, other in ((M1, M2), (M2, M1)):
        stack = sigma0(other)
        for label, mult in decompose_J0(small, snapshot).as_multiset().items():
            if big.multiplicity(label) < mult * stack:
                return False
    return True


def check_lower_bound(N: int, rank: int) -> bool:
    """N <= 180^(rank + 1), the level cap implied by the rank. Exact integers."""
    if N < 1 or rank < 0:
        raise ValueError("need N >= 1 and rank >= 0")
    return N <= 180 ** (rank + 1)


def prime_cutoff(r: int) -> int:
    """Smallest x with the analytic genus bound certifying g_0^+(p) > r
    for every prime p >= x.

    Bisects for the first integer past 10^4 where the bound function
    exceeds r, with every sign interval-certified; monotonicity past 10^4
    then covers all larger primes.
    """
    if r < 1:
        raise ValueError("cutoff is defined for r >= 1")
    lo = 10**4
    if h_bound_sign_vs(lo, r) != -1:
        raise ArithmeticError("bound function unexpectedly positive at 10^4")
    hi = 2 * 10**4
    while h_bound_sign_vs(hi, r) != 1:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if h_bound_sign_vs(mid, r) == 1:
            hi = mid
        else:
            lo = mid
    return hi


# Levels N with rank J_0(N)(Q) = 0; the base of the S_r induction.
S0: tuple[int, ...] = (
    *range(1, 37),
    *range(38, 43),
    *range(44, 53),
    54, 55, 56, 59, 60, 62, 63, 64, 66,
    *range(68, 73),
    75, 76, 78, 80, 81, 84, 87, 90, 94, 95, 96, 98, 100, 104, 105, 108, 110,
    119, 120, 126, 132, 140, 144, 150, 168, 180,
)

# Sharper prime cap for small r: g_0^+(p) <= r forces p <= 180^r, known
# for r up to 6.
_EXPLICIT_PRIME_CAP_MAX_R = 6


@dataclass(frozen=True)
class SeedSet:
    """S_r: every level whose Jacobian can have rank exactly r.

    For r >= 1 the members are the primes with g_0^+ at most r together
    with the composites all of whose proper divisors landed in earlier
    sets.  The cutoffs record how far the prime scan had to look:
    h_cutoff from the certified analytic bound, explicit_cutoff from the
    known 180^r cap when r is small.
    """

    r: int
    members: tuple[int, ...]
    h_cutoff: int | None = None
    explicit_cutoff: int | None = None

    @property
    def scan_cutoff(self) -> int | None:
        cuts = [c for c in (self.h_cutoff, self.explicit_cutoff) if c is not None]
        return min(cuts) if cuts else None

    def __contains__(self, n: int) -> bool:
        return n in set(self.members)


def _audit_rank_zero_levels(snapshot: Snapshot) -> None:
    """Covered S_0 levels must show no vanishing trivial-character orbit."""
    for n in S0:
        if not all(snapshot.coverage_mode(d) is not None for d in divisors(n)):
            continue
        for orb in snapshot.query(n, 1):
            if orb.lval_vanishes:
                raise CycjacError(
                    f"level {n} is on the rank-zero list but {orb.label} "
                    "has a vanishing central L-value"
                )


def build_seed_sets(
    r_max: int, snapshot: Snapshot | None = None, bsd: bool = False
) -> list[SeedSet]:
    """S_0 through S_r_max.

    S_0 is the frozen rank-zero list (audited against the snapshot when
    one is given).  Each later set scans primes up to the certified
    cutoff with the exact plus-genus and closes over composites whose
    proper divisors all appeared earlier; candidate composites are
    products u * q of an earlier member with an earlier prime, which
    exhausts them.  The bsd flag only names the interpretation in
    rendered output; the construction itself is genus arithmetic.
    """
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    if snapshot is not None:
        _audit_rank_zero_levels(snapshot)
    sets = [SeedSet(r=0, members=S0)]
    for r in range(1, r_max + 1):
        earlier: set[int] = set()
        for s in sets:
            earlier.update(s.members)
        h_cut = prime_cutoff(r)
        explicit = 180**r if r <= _EXPLICIT_PRIME_CAP_MAX_R else None
        scan = min(h_cut, explicit) if explicit is not None else h_cut
        h_table = class_numbers_batch(4 * scan)
        members = {
            p for p in primes_up_to(scan) if genus_X0plus(p, h_table) <= r
        }
        earlier_primes = [q for q in sorted(earlier) if is_prime(q)]
        for u in earlier:
            for q in earlier_primes:
                n = u * q
                if n < 4 or is_prime(n):
                    continue
                if all(d in earlier for d in divisors(n)[:-1]):
                    members.add(n)
        sets.append(
            SeedSet(
                r=r,
                members=tuple(sorted(members)),
                h_cutoff=h_cut,
                explicit_cutoff=explicit,
            )
        )
    return sets


def render_seed_sets(sets: list[SeedSet], bsd: bool = False) -> str:
    """Headers naming r, member count, and scan cutoffs; members one set per line."""
    out = []
    for s in sets:
        head = f"# S_{s.r} ({len(s.members)} members"
        if s.r == 0:
            head += "; rank-zero base list"
        else:
            head += f"; prime scan to {s.scan_cutoff}"
            head += f"; h cutoff {s.h_cutoff}"
            if s.explicit_cutoff is not None:
                head += f"; explicit cutoff {s.explicit_cutoff}"
        if bsd and s.r >= 1:
            head += "; membership necessary for rank (BSD)"
        head += ")"
        out.append(head)
        out.append(" ".join(str(n) for n in s.members))
    return "\n".join(out) + "\n"
