"""Isogeny decompositions of modular Jacobians into newform abelian varieties.

J_1(M, MN) over Q(zeta_M) restricts, by stacking its Galois-conjugate
pieces, to the Jacobian J_Delta of the quotient of X_1(M^2 N) by the
congruence kernel Delta, and J_Delta decomposes up to isogeny as a product
of A_f over the set NF(M, N) of weight-2 newforms whose level divides
M^2 N and whose character conductor divides MN, with A_f occurring
sigma_0(M^2 N / N_f) times.  This module materializes those factor lists
from a snapshot; the membership filter on (level, conductor) is the whole
representation of Delta, no subgroup arithmetic needed.

J_0 and J_1 of a single level are the familiar special cases: trivial
character only, or every character.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import sigma0
from .store import NewformOrbit, Snapshot


@dataclass(frozen=True)
class NFSet:
    """The orbit set NF(M, N): level dividing M^2 N, conductor dividing MN."""

    M: int
    N: int
    orbits: tuple[NewformOrbit, ...]

    @property
    def level_bound(self) -> int:
        return self.M * self.M * self.N

    @property
    def conductor_bound(self) -> int:
        return self.M * self.N

    def labels(self) -> list[str]:
        return [orb.label for orb in self.orbits]


@dataclass(frozen=True)
class IsogenyDecomposition:
    """A Jacobian as a multiset of newform orbit factors.

    factors pairs each orbit with its multiplicity; dimension is the total
    abelian-variety dimension sum(multiplicity * orbit.dimension).
    """

    description: str
    factors: tuple[tuple[NewformOrbit, int], ...]

    def __post_init__(self):
        if any(mult < 1 for _, mult in self.factors):
            raise ValueError(f"{self.description}: nonpositive multiplicity")
        labels = [orb.label for orb, _ in self.factors]
        if len(set(labels)) != len(labels):
            raise ValueError(f"{self.description}: repeated factor")

    @property
    def dimension(self) -> int:
        return sum(mult * orb.dimension for orb, mult in self.factors)

    def multiplicity(self, label: str) -> int:
        for orb, mult in self.factors:
            if orb.label == label:
                return mult
        return 0

    def as_multiset(self) -> dict[str, int]:
        return {orb.label: mult for orb, mult in self.factors}


def nf_set(M: int, N: int, snapshot: Snapshot) -> NFSet:
    """NF(M, N), coverage-checked at every divisor of M^2 N."""
    if M < 1 or N < 1:
        raise ValueError("M and N must be positive")
    orbits = snapshot.query(M * M * N, M * N)
    return NFSet(M=M, N=N, orbits=tuple(orbits))


def decompose_JDelta(M: int, N: int, snapshot: Snapshot) -> IsogenyDecomposition:
    """J_Delta ~ prod over NF(M,N) of A_f^(sigma_0(M^2 N / N_f))."""
    nf = nf_set(M, N, snapshot)
    level = nf.level_bound
    factors = tuple((orb, sigma0(level // orb.level)) for orb in nf.orbits)
    return IsogenyDecomposition(description=f"JDelta({M},{N})", factors=factors)


def decompose_J0(level: int, snapshot: Snapshot) -> IsogenyDecomposition:
    """J_0(level) ~ prod over trivial-character orbits of level dividing it."""
    if level < 1:
        raise ValueError("level must be positive")
    orbits = snapshot.query(level, 1)
    factors = tuple((orb, sigma0(level // orb.level)) for orb in orbits)
    return IsogenyDecomposition(description=f"J0({level})", factors=factors)


def decompose_J1(level: int, snapshot: Snapshot) -> IsogenyDecomposition:
    """J_1(level) ~ prod over all orbits of level dividing it."""
    if level < 1:
        raise ValueError("level must be positive")
    orbits = snapshot.query(level)
    factors = tuple((orb, sigma0(level // orb.level)) for orb in orbits)
    return IsogenyDecomposition(description=f"J1({level})", factors=factors)


def dimension_check(M: int, N: int, snapshot: Snapshot) -> bool:
    """Factor dimensions against independently recorded space dimensions.

    The decomposition's total dimension must equal the dimension of the
    cusp form space S_2(Gamma_1(M^2 N), eps) summed over character orbits
    eps with conductor dividing MN.  The right side comes from space
    records the generator measured directly, not from orbit sums, so the
    two routes are independent.
    """
    level = M * M * N
    want = decompose_JDelta(M, N, snapshot).dimension
    have = sum(
        sp.dim_total
        for sp in snapshot.spaces_at(level)
        if (M * N) % sp.char_conductor == 0
    )
    return want == have


def factor_containment(inner: IsogenyDecomposition, outer: IsogenyDecomposition) -> bool:
    """Every factor of inner occurs in outer with at least its multiplicity."""
    outer_counts = outer.as_multiset()
    return all(mult <= outer_counts.get(label, 0) for label, mult in inner.as_multiset().items())
