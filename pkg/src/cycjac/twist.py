"""Character twists acting on newform orbits.

Twisting by a Dirichlet character chi sends a newform f to the newform
underlying f tensor chi; on Galois orbits the action is a multiset map
because conjugate members can land in different target orbits.  Snapshot
twist records carry those multisets (and, when present, the exact
member-to-member maps), so the action here is pure lookup plus the
principal-character identity.  verify_action replays the group laws the
records must satisfy: targets stay inside NF(M, N), each character acts
bijectively on members, and acting by chi then psi lands where chi*psi
does.  The composition law is checked exactly through member maps when
stored, exactly on target multisets when every intermediate record has a
single target orbit, and as a support containment otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .decomposition import nf_set
from .dirichlet import DirichletCharacter, character_group, induce, primitivize
from .errors import DataGapError
from .store import NewformOrbit, Snapshot, TwistTarget


def twist_level_bound(level: int, char_conductor: int, twist_conductor: int) -> int:
    """Level of the twisted newform divides this (Atkin-Li)."""
    if level < 1 or char_conductor < 1 or twist_conductor < 1:
        raise ValueError("arguments must be positive")
    return lcm(level, char_conductor * twist_conductor, twist_conductor**2)


def act(orbit: NewformOrbit, chi: DirichletCharacter, snapshot: Snapshot) -> tuple[TwistTarget, ...]:
    """The twist of an orbit by chi as a multiset of target orbits.

    Only the primitive character underlying chi matters.  The principal
    character fixes every member, so it needs no stored record; any other
    character requires one and its absence raises DataGapError.
    """
    prim = primitivize(chi)
    if prim.conductor == 1:
        return (TwistTarget(label=orbit.label, level=orbit.level, multiplicity=orbit.dimension),)
    record = snapshot.twist(orbit.label, prim.label)
    return record.targets


@dataclass(frozen=True)
class TwistActionReport:
    """Outcome of replaying the character action on one NF(M, N)."""

    M: int
    N: int
    orbit_count: int
    char_count: int
    records_checked: int
    compositions_checked: int
    compositions_skipped: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def _nonprincipal_primitives(M: int) -> list[DirichletCharacter]:
    seen: dict[str, DirichletCharacter] = {}
    for chi in character_group(M).characters():
        prim = primitivize(chi)
        if prim.conductor > 1:
            seen.setdefault(prim.label, prim)
    return [seen[k] for k in sorted(seen)]


def verify_action(M: int, N: int, snapshot: Snapshot) -> TwistActionReport:
    """Check the full character group action on NF(M, N) for consistency.

    Per orbit and non-principal character: the record exists, its targets
    resolve inside NF(M, N), and their levels divide the twist level
    bound.  Per character: summed target multiplicities hit every orbit's
    dimension exactly once (the action permutes members).  Where member
    maps are stored, all pairwise compositions are checked against the
    product character's map, the product with the inverse checking that
    members return to themselves.
    """
    nf = nf_set(M, N, snapshot)
    in_nf = {orb.label: orb for orb in nf.orbits}
    prims = _nonprincipal_primitives(M)
    failures: list[str] = []
    records_checked = 0
    targets_of: dict[tuple[str, str], tuple[TwistTarget, ...] | None] = {}
    # (orbit label, primitive char label) -> member map i -> (target, j)
    member_maps: dict[tuple[str, str], dict[int, tuple[str, int]] | None] = {}
    target_counts: dict[str, dict[str, int]] = {p.label: {} for p in prims}

    for orb in nf.orbits:
        for prim in prims:
            key = (orb.label, prim.label)
            try:
                record = snapshot.twist(orb.label, prim.label)
            except DataGapError:
                failures.append(f"no twist record for {orb.label} x {prim.label}")
                targets_of[key] = None
                member_maps[key] = None
                continue
            records_checked += 1
            targets_of[key] = record.targets
            bound = twist_level_bound(orb.level, orb.char_conductor, prim.conductor)
            counts = target_counts[prim.label]
            member_total = 0
            for t in record.targets:
                member_total += t.multiplicity
                if t.label is None:
                    failures.append(
                        f"{orb.label} x {prim.label}: external target at level {t.level}"
                    )
                elif t.label not in in_nf:
                    failures.append(
                        f"{orb.label} x {prim.label}: target {t.label} escapes NF({M},{N})"
                    )
                else:
                    counts[t.label] = counts.get(t.label, 0) + t.multiplicity
                if bound % t.level:
                    failures.append(
                        f"{orb.label} x {prim.label}: target level {t.level} "
                        f"violates bound {bound}"
                    )
            if member_total != orb.dimension:
                failures.append(
                    f"{orb.label} x {prim.label}: target multiplicities sum to "
                    f"{member_total}, dimension is {orb.dimension}"
                )
            if record.members is None:
                member_maps[key] = None
            else:
                member_maps[key] = {i: (lbl, j) for i, lbl, j in record.members}

    for prim in prims:
        counts = target_counts[prim.label]
        for orb in nf.orbits:
            got = counts.get(orb.label, 0)
            if got != orb.dimension:
                failures.append(
                    f"character {prim.label} hits {orb.label} with multiplicity "
                    f"{got}, dimension is {orb.dimension}"
                )

    composed = 0
    skipped = 0
    lifted = {p.label: induce(p, M) for p in prims} if M > 1 else {}
    for a in prims:
        for b in prims:
            product = primitivize(lifted[a.label] * lifted[b.label])
            principal = product.conductor == 1
            for orb in nf.orbits:
                first = targets_of.get((orb.label, a.label))
                want_targets: tuple[TwistTarget, ...] | None = None
                if not principal:
                    want_targets = targets_of.get((orb.label, product.label))
                if first is None or (not principal and want_targets is None):
                    skipped += 1
                    continue
                if any(t.label is None or t.label not in in_nf for t in first):
                    skipped += 1
                    continue
                seconds = {t.label: targets_of.get((t.label, b.label)) for t in first}
                if any(ts is None for ts in seconds.values()):
                    skipped += 1
                    continue

                map_a = member_maps.get((orb.label, a.label))
                map_c = None if principal else member_maps.get((orb.label, product.label))
                chain: dict[int, tuple[str, int]] | None = None
                if map_a is not None and (principal or map_c is not None):
                    chain = {}
                    for i, (t_label, j) in map_a.items():
                        map_b = member_maps.get((t_label, b.label))
                        if map_b is None:
                            chain = None
                            break
                        chain[i] = map_b[j]
                if chain is not None:
                    composed += 1
                    want = {i: (orb.label, i) for i in chain} if principal else map_c
                    if chain != want:
                        failures.append(
                            f"composition {a.label} then {b.label} on {orb.label} "
                            f"disagrees with {product.label}"
                        )
                    continue

                # No member maps: the two-step multiset is still determined
                # when every intermediate orbit twists into a single target.
                if all(len(ts) == 1 and ts[0].label in in_nf for ts in seconds.values()):
                    composed += 1
                    final: dict[str, int] = {}
                    for t in first:
                        u = seconds[t.label][0].label
                        final[u] = final.get(u, 0) + t.multiplicity
                    if principal:
                        want_ms = {orb.label: orb.dimension}
                    else:
                        want_ms = {}
                        for t in want_targets:
                            if t.label is not None:
                                want_ms[t.label] = want_ms.get(t.label, 0) + t.multiplicity
                    if final != want_ms:
                        failures.append(
                            f"composition {a.label} then {b.label} on {orb.label} "
                            f"disagrees with {product.label}"
                        )
                    continue

                skipped += 1
                reach: set[str] = set()
                for ts in seconds.values():
                    reach |= {t.label for t in ts if t.label is not None}
                if principal:
                    want_support = {orb.label}
                else:
                    want_support = {t.label for t in want_targets if t.label is not None}
                if not want_support <= reach:
                    failures.append(
                        f"composition {a.label} then {b.label} on {orb.label}: "
                        f"targets of {product.label} escape the two-step image"
                    )

    return TwistActionReport(
        M=M,
        N=N,
        orbit_count=len(nf.orbits),
        char_count=len(prims),
        records_checked=records_checked,
        compositions_checked=composed,
        compositions_skipped=skipped,
        failures=tuple(failures),
    )
