"""Mordell-Weil ranks of the Jacobians J_1(M, MN) over Q(zeta_M).

The Jacobian decomposes over Q(zeta_M) into newform abelian varieties
A_f for f in NF(M, N), and the rank splits along the characters mod M:
the chi-eigenspace of A_f(Q(zeta_M)) has dimension equal to the summed
rank contribution of the twisted orbit f tensor chi.  Summing over all
orbits and all phi(M) characters gives the total rank two ways, grouped
by source orbit (rank_cyclotomic) or by twist target
(rank_cyclotomic_crosscheck); the totals must agree and the double
bookkeeping is kept as a standing consistency check.

Rank knowledge is tiered.  Vanishing or not of L(f, 1) is exact data in
the snapshot; a nonvanishing central value forces rank zero
(Kato), an order-1 zero on a one-dimensional orbit forces rank one
(Gross-Zagier and Kolyvagin), and everything beyond that is conditional
on BSD or unknown.  Every reported number carries its provenance.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .arith import divisors, is_prime, multiplicative_order, sigma0
from .decomposition import nf_set
from .dirichlet import character_group, primitivize
from .errors import CoverageError, DataGapError
from .store import COVERAGE_ALL, COVERAGE_TRIVIAL, NewformOrbit, Snapshot
from .twist import act


class Provenance(Enum):
    UNCONDITIONAL_ZERO = "UNCONDITIONAL_ZERO"
    UNCONDITIONAL_POSITIVE = "UNCONDITIONAL_POSITIVE"
    BSD_CONDITIONAL = "BSD_CONDITIONAL"
    UNKNOWN = "UNKNOWN"

    @property
    def conditional(self) -> bool:
        return self is Provenance.BSD_CONDITIONAL

    def render(self) -> str:
        if self is Provenance.BSD_CONDITIONAL:
            return "(BSD)"
        if self is Provenance.UNKNOWN:
            return "(unknown)"
        return "(unconditional)"


@dataclass(frozen=True)
class RankValue:
    """Rank of A_f(Q) per unit of the Hecke field.

    k_dimension is the K_f-dimension of A_f(Q) tensor Q, so the absolute
    rank is k_dimension times the orbit dimension.  None means the value
    is not determined at the stated provenance.
    """

    k_dimension: int | None
    provenance: Provenance

    def __post_init__(self):
        k, p = self.k_dimension, self.provenance
        if p is Provenance.UNKNOWN:
            if k is not None:
                raise ValueError("unknown rank cannot carry a value")
        elif k is None:
            raise ValueError(f"{p.value} requires a value")
        elif p is Provenance.UNCONDITIONAL_ZERO and k != 0:
            raise ValueError("certified zero rank must be zero")
        elif p is not Provenance.UNCONDITIONAL_ZERO and k < 1:
            raise ValueError(f"{p.value} requires a positive value")

    def absolute(self, dimension: int) -> int | None:
        if self.k_dimension is None:
            return None
        return self.k_dimension * dimension


def assign_rank(orbit: NewformOrbit, bsd: bool = False) -> RankValue:
    """Best rank statement the L-value data supports for one orbit.

    Analytic rank 0 certifies rank zero; analytic rank 1 on a
    one-dimensional orbit certifies rank one.  Any other certified
    analytic rank transfers to the rank only under BSD, and an
    uncertified order of vanishing yields no value at all.
    """
    ar = orbit.analytic_rank
    if ar == 0:
        return RankValue(0, Provenance.UNCONDITIONAL_ZERO)
    if ar == 1 and orbit.dimension == 1:
        return RankValue(1, Provenance.UNCONDITIONAL_POSITIVE)
    if ar is not None and bsd:
        return RankValue(ar, Provenance.BSD_CONDITIONAL)
    return RankValue(None, Provenance.UNKNOWN)


def _combine(contributions) -> tuple[int | None, Provenance]:
    """Total and provenance of a sum of (value, provenance) contributions.

    Zero contributions never weaken the total; a conditional nonzero
    contribution makes the total conditional; any unknown value makes the
    total unknown.
    """
    items = list(contributions)
    if any(v is None for v, _ in items):
        return None, Provenance.UNKNOWN
    total = sum(v for v, _ in items)
    if total == 0:
        return 0, Provenance.UNCONDITIONAL_ZERO
    nonzero = {p for v, p in items if v != 0}
    if Provenance.BSD_CONDITIONAL in nonzero:
        return total, Provenance.BSD_CONDITIONAL
    return total, Provenance.UNCONDITIONAL_POSITIVE


def field_name(M: int) -> str:
    return "Q" if M == 1 else f"Q(zeta_{M})"


@dataclass(frozen=True)
class RankLine:
    """One orbit's share of the rank, grouped by source orbit.

    weight sums sigma_0(M^2 N / level) over all twist targets of the
    orbit across the full character group mod M, counted with member
    multiplicities; the contribution is weight times the orbit's
    k-dimension.  Zero-rank orbits contribute 0 without consulting twist
    data, so their weight is None.
    """

    label: str
    level: int
    dimension: int
    char_label: str
    weight: int | None
    weight_terms: tuple[tuple[int, int], ...]
    rank: RankValue
    contribution: int | None


@dataclass(frozen=True)
class RankReport:
    M: int
    N: int
    bsd: bool
    lines: tuple[RankLine, ...]
    gaps: tuple[str, ...]
    total: int | None
    provenance: Provenance

    @property
    def level(self) -> int:
        return self.M * self.M * self.N

    @property
    def field(self) -> str:
        return field_name(self.M)


def rank_cyclotomic(M: int, N: int, snapshot: Snapshot, bsd: bool = False) -> RankReport:
    """rank J_1(M, MN)(Q(zeta_M)) grouped by source orbit.

    Twist data is consulted only for orbits of nonzero or undetermined
    rank; a missing record there downgrades the total to unknown and is
    listed as a gap rather than raised.
    """
    nf = nf_set(M, N, snapshot)
    chars = character_group(M).characters()
    level = M * M * N
    lines: list[RankLine] = []
    gaps: list[str] = []
    for orb in nf.orbits:
        rv = assign_rank(orb, bsd)
        if rv.k_dimension == 0:
            lines.append(
                RankLine(
                    label=orb.label,
                    level=orb.level,
                    dimension=orb.dimension,
                    char_label=orb.char_label,
                    weight=None,
                    weight_terms=(),
                    rank=rv,
                    contribution=0,
                )
            )
            continue
        terms: dict[int, int] = {}
        missing: set[str] = set()
        for chi in chars:
            try:
                targets = act(orb, chi, snapshot)
            except DataGapError:
                missing.add(primitivize(chi).label)
                continue
            for t in targets:
                terms[t.level] = terms.get(t.level, 0) + t.multiplicity
        if missing:
            gaps.append(f"{orb.label}: no twist data for {', '.join(sorted(missing))}")
            weight = None
            weight_terms: tuple[tuple[int, int], ...] = ()
            contribution = None
        else:
            weight_terms = tuple(sorted(terms.items()))
            weight = sum(mult * sigma0(level // lvl) for lvl, mult in weight_terms)
            if rv.k_dimension is None:
                gaps.append(f"{orb.label}: analytic rank not certified")
                contribution = None
            else:
                contribution = weight * rv.k_dimension
        lines.append(
            RankLine(
                label=orb.label,
                level=orb.level,
                dimension=orb.dimension,
                char_label=orb.char_label,
                weight=weight,
                weight_terms=weight_terms,
                rank=rv,
                contribution=contribution,
            )
        )
    total, provenance = _combine((ln.contribution, ln.rank.provenance) for ln in lines)
    return RankReport(
        M=M,
        N=N,
        bsd=bsd,
        lines=tuple(lines),
        gaps=tuple(gaps),
        total=total,
        provenance=provenance,
    )


def cyclotomic_rank_of_orbit(
    orbit: NewformOrbit, M: int, snapshot: Snapshot, bsd: bool = False
) -> tuple[int | None, Provenance]:
    """Absolute rank of A_f(Q(zeta_M)) for one orbit.

    Sums, over every character mod M, the target multiplicities times the
    target orbits' k-dimensions.  Needs the orbit's full twist data;
    missing records raise DataGapError.
    """
    contributions = []
    for chi in character_group(M).characters():
        for t in act(orbit, chi, snapshot):
            if t.label is None:
                raise DataGapError(
                    f"twist of {orbit.label} leaves the snapshot (level {t.level})"
                )
            target = snapshot.orbit(t.label)
            rv = assign_rank(target, bsd)
            value = None if rv.k_dimension is None else t.multiplicity * rv.k_dimension
            contributions.append((value, rv.provenance))
    return _combine(contributions)


@dataclass(frozen=True)
class CrosscheckLine:
    """One orbit's share of the rank, grouped by twist target."""

    label: str
    level: int
    dimension: int
    multiplicity: int
    field_rank: int | None
    provenance: Provenance
    contribution: int | None


@dataclass(frozen=True)
class CrosscheckReport:
    M: int
    N: int
    bsd: bool
    lines: tuple[CrosscheckLine, ...]
    total: int | None
    provenance: Provenance

    @property
    def field(self) -> str:
        return field_name(self.M)


def rank_cyclotomic_crosscheck(
    M: int, N: int, snapshot: Snapshot, bsd: bool = False
) -> CrosscheckReport:
    """rank J_1(M, MN)(Q(zeta_M)) as sum of per-orbit cyclotomic ranks.

    Independent regrouping of the same total: each orbit's rank over
    Q(zeta_M) is weighted by its multiplicity sigma_0(M^2 N / N_f).
    Unlike rank_cyclotomic this consults twist data for every orbit.
    """
    nf = nf_set(M, N, snapshot)
    level = M * M * N
    lines = []
    for orb in nf.orbits:
        mult = sigma0(level // orb.level)
        value, prov = cyclotomic_rank_of_orbit(orb, M, snapshot, bsd)
        contribution = None if value is None else mult * value
        lines.append(
            CrosscheckLine(
                label=orb.label,
                level=orb.level,
                dimension=orb.dimension,
                multiplicity=mult,
                field_rank=value,
                provenance=prov,
                contribution=contribution,
            )
        )
    total, provenance = _combine((ln.contribution, ln.provenance) for ln in lines)
    return CrosscheckReport(
        M=M, N=N, bsd=bsd, lines=tuple(lines), total=total, provenance=provenance
    )


class RankZeroStatus(Enum):
    ZERO_UNCONDITIONAL = "ZERO_UNCONDITIONAL"
    ZERO_IFF_BSD_FAILS_IMPOSSIBLE = "ZERO_IFF_BSD_FAILS_IMPOSSIBLE"
    NONZERO = "NONZERO"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class RankZeroReport:
    """Is rank J_1(M, MN)(Q(zeta_M)) zero?

    status is the working answer: NONZERO as soon as some orbit in
    NF(M, N) has a vanishing central L-value, since the rank is then
    positive under BSD and believed positive outright.  strict_status
    keeps the unconditional bookkeeping apart: NONZERO only on a
    certified positive witness, ZERO_IFF_BSD_FAILS_IMPOSSIBLE when every
    witness is conditional.  Coverage gaps make both UNKNOWN, with the
    uncovered levels listed.
    """

    M: int
    N: int
    status: RankZeroStatus
    strict_status: RankZeroStatus
    witness: str | None
    missing: tuple[int, ...]


def rank_zero_status(M: int, N: int, snapshot: Snapshot) -> RankZeroReport:
    level = M * M * N
    mode = COVERAGE_ALL if M * N > 2 else COVERAGE_TRIVIAL
    missing = []
    for d in divisors(level):
        try:
            snapshot.require_coverage(d, mode)
        except CoverageError:
            missing.append(d)
    if missing:
        return RankZeroReport(
            M=M,
            N=N,
            status=RankZeroStatus.UNKNOWN,
            strict_status=RankZeroStatus.UNKNOWN,
            witness=None,
            missing=tuple(sorted(missing)),
        )
    orbits = snapshot.query(level, M * N)
    certified = [
        orb
        for orb in orbits
        if assign_rank(orb).provenance is Provenance.UNCONDITIONAL_POSITIVE
    ]
    vanishing = [orb for orb in orbits if orb.lval_vanishes]
    if certified:
        witness = certified[0].label
        return RankZeroReport(
            M=M,
            N=N,
            status=RankZeroStatus.NONZERO,
            strict_status=RankZeroStatus.NONZERO,
            witness=witness,
            missing=(),
        )
    if vanishing:
        return RankZeroReport(
            M=M,
            N=N,
            status=RankZeroStatus.NONZERO,
            strict_status=RankZeroStatus.ZERO_IFF_BSD_FAILS_IMPOSSIBLE,
            witness=vanishing[0].label,
            missing=(),
        )
    return RankZeroReport(
        M=M,
        N=N,
        status=RankZeroStatus.ZERO_UNCONDITIONAL,
        strict_status=RankZeroStatus.ZERO_UNCONDITIONAL,
        witness=None,
        missing=(),
    )


# The (M, N) pairs whose J_1(M, MN) has rank zero over Q(zeta_M).
MAIN_THEOREM_LISTS: dict[int, tuple[int, ...]] = {
    1: (
        *range(1, 37),
        *range(38, 43),
        *range(44, 53),
        54, 55, 56, 59, 60, 62, 64, 66,
        *range(68, 73),
        75, 76, 78, 81, 84, 87, 90, 94, 96, 98, 100,
        108, 110, 119, 120, 132, 140, 150, 168, 180,
    ),
    2: (*range(1, 22), 24, 25, 26, 27, 30, 33, 35, 42, 45),
    3: (*range(1, 11), 12, 14, 16, 20),
    4: tuple(range(1, 7)),
    5: (1, 2, 3, 4, 6),
    6: tuple(range(1, 6)),
    7: (1, 2),
    8: (1,),
    9: (1,),
    10: (1,),
    12: (1,),
}


@dataclass(frozen=True)
class TheoremRow:
    M: int
    N: int
    status: RankZeroStatus
    strict_status: RankZeroStatus
    witness: str | None
    missing: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.status is RankZeroStatus.ZERO_UNCONDITIONAL


@dataclass(frozen=True)
class TheoremReport:
    rows: tuple[TheoremRow, ...]
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_main_theorem(snapshot: Snapshot) -> TheoremReport:
    """Recheck every listed (M, N) pair for unconditional rank zero.

    Each pair must come out ZERO_UNCONDITIONAL from the snapshot's
    L-value data; anything else, including a coverage gap, is reported as
    a failure naming the pair and its witness.
    """
    rows = []
    failures = []
    for M in sorted(MAIN_THEOREM_LISTS):
        for N in MAIN_THEOREM_LISTS[M]:
            rep = rank_zero_status(M, N, snapshot)
            row = TheoremRow(
                M=M,
                N=N,
                status=rep.status,
                strict_status=rep.strict_status,
                witness=rep.witness,
                missing=rep.missing,
            )
            rows.append(row)
            if not row.ok:
                detail = rep.status.value
                if rep.witness:
                    detail += f", witness {rep.witness}"
                if rep.missing:
                    detail += f", missing levels {list(rep.missing)}"
                failures.append(f"({M},{N}): {detail}")
    return TheoremReport(rows=tuple(rows), failures=tuple(failures))


@dataclass(frozen=True)
class GoodPrime:
    """A prime power q = p^f suitable for torsion bounding at level N.

    p is an odd prime not dividing N, f the residue degree of p mod N,
    and q stays below (N - 1)^2 so that reduction mod a place above p
    keeps the relevant torsion faithful.
    """

    p: int
    residue_degree: int
    q: int


def good_prime_search(N: int) -> GoodPrime:
    """Smallest useful prime: split primes first, then general residue degree.

    Scans primes p = 1 mod N (residue degree 1) below (N - 1)^2; if none
    exists, falls back to any odd prime not dividing N whose full residue
    power p^ord_N(p) stays below the bound.
    """
    if N < 3:
        raise ValueError(f"no room below ({N} - 1)^2")
    bound = (N - 1) ** 2
    p = N + 1
    while p < bound:
        if is_prime(p):
            return GoodPrime(p=p, residue_degree=1, q=p)
        p += N
    best = None
    for p in range(3, bound, 2):
        if not is_prime(p) or N % p == 0:
            continue
        f = multiplicative_order(p, N)
        q = p**f
        if q < bound:
            best = GoodPrime(p=p, residue_degree=f, q=q)
            break
    if best is None:
        raise ArithmeticError(f"no good prime below ({N} - 1)^2 = {bound}")
    return best
