"""Snapshot data model and checksummed persistence for newform orbit data.

Every arithmetic fact the engines consume about newforms (orbit dimensions,
analytic ranks, L-value vanishing, Atkin-Lehner signs, space dimensions,
twist tables) lives in a Snapshot: an immutable, offline, line-delimited
record set with a trailing SHA-256 checksum.  Nothing here computes modular
data; the module stores, validates, and serves what ingestion produced.

Orbit labels follow the familiar "level.weight.charorbit.isogeny" shape,
e.g. "121.2.a.b".  Character orbit letters are assigned locally (orbits
sorted by order, then least index; see dirichlet.galois_orbits) and agree
with the usual convention at least for trivial-character orbits, which
covers every label the tests pin by name.

Coverage is tracked per level: "all" means every even-character orbit at
that level is present, "trivial" means only trivial-character data is.
Queries refuse to answer from a snapshot whose coverage cannot support
them, so an empty result always means genuinely empty, never unseen.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .arith import divisors
from .dirichlet import letter_index
from .errors import ChecksumError, CoverageError, DataGapError, SnapshotFormatError

SNAPSHOT_VERSION = "1"

COVERAGE_ALL = "all"
COVERAGE_TRIVIAL = "trivial"
_COVERAGE_MODES = (COVERAGE_ALL, COVERAGE_TRIVIAL)

_DATA_DIR = Path(__file__).resolve().parent / "data"
DEFAULT_SNAPSHOT_NAME = "newforms.jsonl"


def parse_newform_label(label: str) -> tuple[int, int, str, str]:
    """Split "121.2.a.b" into (level, weight, char orbit code, isogeny code)."""
    parts = label.split(".")
    if len(parts) != 4:
        raise ValueError(f"orbit label {label!r} is not level.weight.char.iso")
    lvl_s, wt_s, char_code, iso_code = parts
    if not (lvl_s.isdigit() and wt_s.isdigit()):
        raise ValueError(f"orbit label {label!r} has non-numeric level or weight")
    level, weight = int(lvl_s), int(wt_s)
    if level < 1:
        raise ValueError(f"orbit label {label!r} has level < 1")
    # raises ValueError on anything outside a..z
    letter_index(char_code)
    letter_index(iso_code)
    return level, weight, char_code, iso_code


def _orbit_label_key(label: str) -> tuple[int, int, int]:
    level, _, char_code, iso_code = parse_newform_label(label)
    return level, letter_index(char_code), letter_index(iso_code)


def _char_label_key(label: str) -> tuple[int, int]:
    mod_s, _, idx_s = label.partition(".")
    return int(mod_s), int(idx_s)


@dataclass(frozen=True)
class NewformOrbit:
    """One Galois orbit of weight-2 newforms.

    dimension is [K_f : Q], the number of embeddings of the orbit, which is
    also the dimension of the associated abelian variety.  analytic_rank is
    the order of vanishing of L(f, s) at s = 1, constant across the orbit;
    None means the snapshot does not certify a value.  lval_vanishes records
    the outcome of the exact vanishing test for L(f, 1), which is
    Galois-stable and therefore meaningful even when analytic_rank is None.
    traces holds Tr_{K_f/Q}(a_n) for n = 1..len(traces).  atkin_lehner lists
    (prime, sign) for each prime dividing the level; trivial-character
    orbits only.
    """

    label: str
    level: int
    weight: int
    char_label: str
    char_conductor: int
    char_order: int
    dimension: int
    analytic_rank: int | None
    lval_vanishes: bool
    traces: tuple[int, ...] = ()
    atkin_lehner: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        level, weight, char_code, _ = parse_newform_label(self.label)
        if (level, weight) != (self.level, self.weight):
            raise ValueError(f"label {self.label!r} disagrees with level/weight fields")
        if self.weight != 2:
            raise ValueError(f"{self.label}: only weight 2 is stored")
        if self.char_label != f"{self.level}.{char_code}":
            raise ValueError(
                f"{self.label}: char_label {self.char_label!r} disagrees with the label's orbit code"
            )
        if self.char_conductor < 1 or self.level % self.char_conductor != 0:
            raise ValueError(
                f"{self.label}: character conductor {self.char_conductor} must divide level {self.level}"
            )
        if self.char_order < 1:
            raise ValueError(f"{self.label}: character order must be positive")
        if (self.char_order == 1) != (self.char_conductor == 1):
            raise ValueError(f"{self.label}: order-1 characters are exactly the conductor-1 ones")
        if self.dimension < 1:
            raise ValueError(f"{self.label}: dimension must be positive")
        if self.analytic_rank is not None:
            if self.analytic_rank < 0:
                raise ValueError(f"{self.label}: negative analytic rank")
            if (self.analytic_rank == 0) == self.lval_vanishes:
                raise ValueError(
                    f"{self.label}: analytic_rank {self.analytic_rank} contradicts "
                    f"lval_vanishes={self.lval_vanishes}"
                )
        if self.atkin_lehner is not None:
            if self.char_order != 1:
                raise ValueError(f"{self.label}: Atkin-Lehner signs only for trivial character")
            primes = tuple(p for p, _ in self.atkin_lehner)
            expect = tuple(p for p, _ in _factor_pairs(self.level))
            if primes != expect:
                raise ValueError(
                    f"{self.label}: Atkin-Lehner primes {primes} != prime divisors {expect}"
                )
            if any(s not in (-1, 1) for _, s in self.atkin_lehner):
                raise ValueError(f"{self.label}: Atkin-Lehner signs must be +-1")

    @property
    def char_orbit(self) -> str:
        return self.label.split(".")[2]

    @property
    def iso_code(self) -> str:
        return self.label.split(".")[3]

    @property
    def has_trivial_char(self) -> bool:
        return self.char_order == 1

    def al_sign(self, p: int) -> int:
        if self.atkin_lehner is None:
            raise DataGapError(f"{self.label}: no Atkin-Lehner data stored")
        for q, s in self.atkin_lehner:
            if q == p:
                return s
        raise ValueError(f"{self.label}: {p} does not divide the level")

    def fricke_sign(self) -> int:
        """Eigenvalue of the full involution W_N, the product of all local signs."""
        if self.atkin_lehner is None:
            raise DataGapError(f"{self.label}: no Atkin-Lehner data stored")
        sign = 1
        for _, s in self.atkin_lehner:
            sign *= s
        return sign

    def sort_key(self) -> tuple[int, int, int]:
        return _orbit_label_key(self.label)


def _factor_pairs(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class SpaceDim:
    """Q-dimension of one character-orbit block of S_2(Gamma_1(level), eps).

    Dimensions aggregate the whole Galois orbit of characters: dim_new is
    the sum of the orbit dimensions of the newform orbits at this pair, and
    dim_total additionally counts oldform copies.  Odd-character blocks are
    zero in weight 2 and get no record.
    """

    level: int
    char_label: str
    char_conductor: int
    char_order: int
    dim_new: int
    dim_total: int

    def __post_init__(self):
        mod, _ = _char_label_key(self.char_label)
        if mod != self.level:
            raise ValueError(f"space record char_label {self.char_label!r} is not mod {self.level}")
        if self.char_conductor < 1 or self.level % self.char_conductor != 0:
            raise ValueError(f"space record at level {self.level}: bad conductor {self.char_conductor}")
        if not 0 <= self.dim_new <= self.dim_total:
            raise ValueError(
                f"space record at level {self.level}: dim_new {self.dim_new} "
                f"exceeds dim_total {self.dim_total}"
            )


@dataclass(frozen=True)
class TwistTarget:
    """One aggregated twist target: multiplicity members of the source orbit
    land on this newform orbit.  label None flags a target outside the
    snapshot, recorded by level only."""

    label: str | None
    level: int
    multiplicity: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("twist target level must be positive")
        if self.multiplicity < 1:
            raise ValueError("twist target multiplicity must be positive")
        if self.label is not None and parse_newform_label(self.label)[0] != self.level:
            raise ValueError(f"twist target {self.label!r} disagrees with level {self.level}")

    @property
    def is_external(self) -> bool:
        return self.label is None


@dataclass(frozen=True)
class TwistRecord:
    """Twist-by-character data for one source orbit.

    targets lists the newforms attached to f x chi over the members f of the
    source orbit, as a multiset of (orbit, level) with multiplicities; the
    multiplicities sum to the source dimension.  members, when present,
    refines the multiset to an embedding-level map: (i, target_label, j)
    says the i-th member of the source orbit twists to the j-th member of
    the target orbit.  Member indices are internal to the snapshot that
    assigned them; they are consistent across its records, nothing more.
    """

    source: str
    char: str
    targets: tuple[TwistTarget, ...]
    members: tuple[tuple[int, str, int], ...] | None = None

    def __post_init__(self):
        parse_newform_label(self.source)
        mod, idx = _char_label_key(self.char)
        if mod < 1 or not 0 < idx <= mod or _gcd(idx, mod) != 1:
            raise ValueError(f"twist record has bad character label {self.char!r}")
        if not self.targets:
            raise ValueError(f"twist record {self.source} by {self.char} has no targets")
        seen = set()
        for t in self.targets:
            key = (t.label, t.level)
            if key in seen:
                raise ValueError(f"twist record {self.source} by {self.char} repeats target {key}")
            seen.add(key)

    @property
    def total_multiplicity(self) -> int:
        return sum(t.multiplicity for t in self.targets)

    def target_levels(self) -> list[tuple[int, int]]:
        """(level, multiplicity) pairs, the only data the rank formulas need."""
        return [(t.level, t.multiplicity) for t in self.targets]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class Snapshot:
    """Immutable bundle of newform data plus coverage bookkeeping.

    The checksum property is the SHA-256 of the canonical serialization and
    is computed on demand, so equal snapshots always agree on it and a
    freshly built snapshot never disagrees with its saved form.
    """

    version: str = SNAPSHOT_VERSION
    max_level: int = 0
    source: str = ""
    generated_on: str = ""
    notes: str = ""
    coverage: dict[int, str] = field(default_factory=dict)
    orbits: tuple[NewformOrbit, ...] = ()
    spaces: tuple[SpaceDim, ...] = ()
    twists: tuple[TwistRecord, ...] = ()

    def __post_init__(self):
        if self.version != SNAPSHOT_VERSION:
            raise SnapshotFormatError(
                f"unsupported snapshot version {self.version!r} (supported: {SNAPSHOT_VERSION!r})"
            )
        # normalize to canonical order so equality ignores construction order
        object.__setattr__(self, "orbits", tuple(sorted(self.orbits, key=NewformOrbit.sort_key)))
        object.__setattr__(
            self, "spaces", tuple(sorted(self.spaces, key=lambda s: _char_label_key(s.char_label)))
        )
        object.__setattr__(
            self,
            "twists",
            tuple(
                sorted(
                    self.twists,
                    key=lambda r: (_orbit_label_key(r.source), _char_label_key(r.char)),
                )
            ),
        )
        for level, mode in self.coverage.items():
            if level < 1 or level > max(self.max_level, 1):
                raise ValueError(f"coverage level {level} outside 1..max_level")
            if mode not in _COVERAGE_MODES:
                raise ValueError(f"coverage mode {mode!r} at level {level} not in {_COVERAGE_MODES}")

        by_label: dict[str, NewformOrbit] = {}
        for orb in self.orbits:
            if orb.label in by_label:
                raise ValueError(f"duplicate orbit label {orb.label}")
            by_label[orb.label] = orb
            mode = self.coverage.get(orb.level)
            if mode is None:
                raise ValueError(f"orbit {orb.label} at level {orb.level} outside coverage")
            if mode == COVERAGE_TRIVIAL and not orb.has_trivial_char:
                raise ValueError(
                    f"orbit {orb.label} has nontrivial character but level {orb.level} "
                    f"only has trivial-character coverage"
                )
        object.__setattr__(self, "_by_label", by_label)

        space_keys = set()
        for sp in self.spaces:
            key = (sp.level, sp.char_label)
            if key in space_keys:
                raise ValueError(f"duplicate space record {key}")
            space_keys.add(key)
            mode = self.coverage.get(sp.level)
            if mode is None:
                raise ValueError(f"space record at level {sp.level} outside coverage")
            if mode == COVERAGE_TRIVIAL and sp.char_order != 1:
                raise ValueError(
                    f"space record {key} has nontrivial character under trivial-only coverage"
                )

        twist_index: dict[tuple[str, str], TwistRecord] = {}
        for rec in self.twists:
            key = (rec.source, rec.char)
            if key in twist_index:
                raise ValueError(f"duplicate twist record for {key}")
            twist_index[key] = rec
            self._validate_twist(rec, by_label)
        object.__setattr__(self, "_twist_index", twist_index)
        object.__setattr__(self, "_checksum", None)

    def _validate_twist(self, rec: TwistRecord, by_label: dict[str, NewformOrbit]) -> None:
        src = by_label.get(rec.source)
        if src is None:
            raise ValueError(f"twist record source {rec.source} is not a stored orbit")
        if rec.total_multiplicity != src.dimension:
            raise ValueError(
                f"twist record {rec.source} by {rec.char}: multiplicities sum to "
                f"{rec.total_multiplicity}, source dimension is {src.dimension}"
            )
        for t in rec.targets:
            if t.label is not None and t.label not in by_label:
                raise ValueError(
                    f"twist record {rec.source} by {rec.char}: target {t.label} not stored "
                    f"and not flagged external"
                )
        if rec.members is None:
            return
        if any(t.label is None for t in rec.targets):
            raise ValueError(
                f"twist record {rec.source} by {rec.char}: member map cannot index external targets"
            )
        if len(rec.members) != src.dimension:
            raise ValueError(
                f"twist record {rec.source} by {rec.char}: {len(rec.members)} member rows "
                f"for dimension {src.dimension}"
            )
        if sorted(i for i, _, _ in rec.members) != list(range(src.dimension)):
            raise ValueError(
                f"twist record {rec.source} by {rec.char}: source member indices are not 0..dim-1"
            )
        counts: dict[str, list[int]] = {}
        for _, tgt_label, j in rec.members:
            counts.setdefault(tgt_label, []).append(j)
        agg = {t.label: t.multiplicity for t in rec.targets}
        if {k: len(v) for k, v in counts.items()} != agg:
            raise ValueError(
                f"twist record {rec.source} by {rec.char}: member rows disagree with the "
                f"aggregated multiset"
            )
        for tgt_label, js in counts.items():
            dim = by_label[tgt_label].dimension
            if len(set(js)) != len(js) or any(not 0 <= j < dim for j in js):
                raise ValueError(
                    f"twist record {rec.source} by {rec.char}: member indices into {tgt_label} "
                    f"are not distinct indices below {dim}"
                )

    # -- lookups ----------------------------------------------------------

    def orbit(self, label: str) -> NewformOrbit:
        try:
            return self._by_label[label]
        except KeyError:
            raise DataGapError(f"no orbit {label!r} in snapshot") from None

    def has_orbit(self, label: str) -> bool:
        return label in self._by_label

    def twist(self, source: str, char: str) -> TwistRecord:
        try:
            return self._twist_index[(source, char)]
        except KeyError:
            raise DataGapError(
                f"no twist record for {source} by {char}; twists are never recomputed"
            ) from None

    def has_twist(self, source: str, char: str) -> bool:
        return (source, char) in self._twist_index

    def coverage_mode(self, level: int) -> str | None:
        return self.coverage.get(level)

    def require_coverage(self, level: int, mode: str = COVERAGE_ALL) -> None:
        if mode not in _COVERAGE_MODES:
            raise ValueError(f"unknown coverage mode {mode!r}")
        have = self.coverage.get(level)
        if have is None or (mode == COVERAGE_ALL and have != COVERAGE_ALL):
            raise CoverageError(
                f"snapshot does not cover level {level} (need {mode!r}, have {have!r})",
                missing_level=level,
            )

    def query(self, level_dividing: int, char_conductor_dividing: int | None = None):
        """Orbits with level | L and character conductor | C, sorted by label.

        C = None places no character restriction.  Coverage is verified at
        every divisor of L first: conductors up to 2 only need
        trivial-character coverage (there is no conductor-2 character),
        anything else needs full coverage.
        """
        L, C = level_dividing, char_conductor_dividing
        if L < 1 or (C is not None and C < 1):
            raise ValueError("query bounds must be positive")
        need = COVERAGE_TRIVIAL if (C is not None and C <= 2) else COVERAGE_ALL
        for d in divisors(L):
            self.require_coverage(d, need)
        found = [
            orb
            for orb in self.orbits
            if L % orb.level == 0 and (C is None or C % orb.char_conductor == 0)
        ]
        return sorted(found, key=NewformOrbit.sort_key)

    def spaces_at(self, level: int) -> list[SpaceDim]:
        self.require_coverage(level, COVERAGE_TRIVIAL)
        found = [sp for sp in self.spaces if sp.level == level]
        return sorted(found, key=lambda sp: _char_label_key(sp.char_label))

    @property
    def checksum(self) -> str:
        cached = self._checksum
        if cached is None:
            cached = hashlib.sha256(_body_text(self).encode("utf-8")).hexdigest()
            object.__setattr__(self, "_checksum", cached)
        return cached


# -- canonical serialization ----------------------------------------------

_META_KEYS = frozenset({"kind", "version", "max_level", "source", "generated_on", "notes"})
_COVERAGE_KEYS = frozenset({"kind", "level", "mode"})
_SPACE_KEYS = frozenset(
    {"kind", "level", "char_label", "char_conductor", "char_order", "dim_new", "dim_total"}
)
_ORBIT_KEYS = frozenset(
    {
        "kind",
        "label",
        "level",
        "weight",
        "char_label",
        "char_conductor",
        "char_order",
        "dimension",
        "analytic_rank",
        "lval_vanishes",
        "traces",
        "atkin_lehner",
    }
)
_TWIST_KEYS = frozenset({"kind", "source", "char", "targets", "members"})
_CHECKSUM_KEYS = frozenset({"kind", "sha256"})


def _dump(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def snapshot_records(snapshot: Snapshot) -> list[dict]:
    """Canonical record sequence, checksum line excluded."""
    records = [
        {
            "kind": "meta",
            "version": snapshot.version,
            "max_level": snapshot.max_level,
            "source": snapshot.source,
            "generated_on": snapshot.generated_on,
            "notes": snapshot.notes,
        }
    ]
    for level in sorted(snapshot.coverage):
        records.append({"kind": "coverage", "level": level, "mode": snapshot.coverage[level]})
    for sp in snapshot.spaces:
        records.append(
            {
                "kind": "space",
                "level": sp.level,
                "char_label": sp.char_label,
                "char_conductor": sp.char_conductor,
                "char_order": sp.char_order,
                "dim_new": sp.dim_new,
                "dim_total": sp.dim_total,
            }
        )
    for orb in snapshot.orbits:
        records.append(
            {
                "kind": "orbit",
                "label": orb.label,
                "level": orb.level,
                "weight": orb.weight,
                "char_label": orb.char_label,
                "char_conductor": orb.char_conductor,
                "char_order": orb.char_order,
                "dimension": orb.dimension,
                "analytic_rank": orb.analytic_rank,
                "lval_vanishes": orb.lval_vanishes,
                "traces": list(orb.traces),
                "atkin_lehner": None
                if orb.atkin_lehner is None
                else [[p, s] for p, s in orb.atkin_lehner],
            }
        )
    for rec in snapshot.twists:
        records.append(
            {
                "kind": "twist",
                "source": rec.source,
                "char": rec.char,
                "targets": [[t.label, t.level, t.multiplicity] for t in rec.targets],
                "members": None if rec.members is None else [list(row) for row in rec.members],
            }
        )
    return records


def _body_text(snapshot: Snapshot) -> str:
    return "".join(_dump(r) + "\n" for r in snapshot_records(snapshot))


def save_snapshot(snapshot: Snapshot, path) -> str:
    """Write the canonical serialization plus checksum line; return the digest."""
    body = _body_text(snapshot)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    text = body + _dump({"kind": "checksum", "sha256": digest}) + "\n"
    Path(path).write_text(text, encoding="utf-8")
    return digest


def load_snapshot(path) -> Snapshot:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise DataGapError(f"cannot read snapshot {path}: {exc}") from exc
    return parse_snapshot_text(raw.decode("utf-8"), where=str(path))


def parse_snapshot_text(text: str, where: str = "<snapshot>") -> Snapshot:
    lines = text.splitlines(keepends=True)
    if not lines:
        raise SnapshotFormatError(f"{where}: empty file")
    try:
        tail = json_line(lines[-1], len(lines), where)
    except SnapshotFormatError:
        # a cut mid-line is an integrity failure, not a schema problem
        raise ChecksumError(f"{where}: snapshot ends mid-record (truncated?)") from None
    if tail.get("kind") != "checksum":
        raise ChecksumError(f"{where}: snapshot ends without a checksum record (truncated?)")
    _require_keys(tail, _CHECKSUM_KEYS, len(lines), where)
    body = "".join(lines[:-1])
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if digest != tail["sha256"]:
        raise ChecksumError(
            f"{where}: snapshot checksum mismatch (recorded {tail['sha256']}, computed {digest})"
        )

    meta = None
    coverage: dict[int, str] = {}
    spaces: list[SpaceDim] = []
    orbits: list[NewformOrbit] = []
    twists: list[TwistRecord] = []
    for lineno, line in enumerate(lines[:-1], start=1):
        record = json_line(line, lineno, where)
        kind = record.get("kind")
        if lineno == 1 and kind != "meta":
            raise SnapshotFormatError(f"{where}:1: first record must be meta, got {kind!r}")
        try:
            if kind == "meta":
                if meta is not None:
                    raise SnapshotFormatError(f"{where}:{lineno}: duplicate meta record")
                _require_keys(record, _META_KEYS, lineno, where)
                meta = record
            elif kind == "coverage":
                _require_keys(record, _COVERAGE_KEYS, lineno, where)
                level = _int_field(record, "level", lineno, where)
                if level in coverage:
                    raise SnapshotFormatError(f"{where}:{lineno}: duplicate coverage for level {level}")
                coverage[level] = record["mode"]
            elif kind == "space":
                _require_keys(record, _SPACE_KEYS, lineno, where)
                spaces.append(
                    SpaceDim(
                        level=_int_field(record, "level", lineno, where),
                        char_label=_str_field(record, "char_label", lineno, where),
                        char_conductor=_int_field(record, "char_conductor", lineno, where),
                        char_order=_int_field(record, "char_order", lineno, where),
                        dim_new=_int_field(record, "dim_new", lineno, where),
                        dim_total=_int_field(record, "dim_total", lineno, where),
                    )
                )
            elif kind == "orbit":
                _require_keys(record, _ORBIT_KEYS, lineno, where)
                orbits.append(_orbit_from_record(record, lineno, where))
            elif kind == "twist":
                _require_keys(record, _TWIST_KEYS, lineno, where)
                twists.append(_twist_from_record(record, lineno, where))
            else:
                raise SnapshotFormatError(f"{where}:{lineno}: unknown record kind {kind!r}")
        except (ValueError, TypeError) as exc:
            raise SnapshotFormatError(f"{where}:{lineno}: bad record: {exc}") from exc
    if meta is None:
        raise SnapshotFormatError(f"{where}: no meta record")

    try:
        return Snapshot(
            version=_str_field(meta, "version", 1, where),
            max_level=_int_field(meta, "max_level", 1, where),
            source=_str_field(meta, "source", 1, where),
            generated_on=_str_field(meta, "generated_on", 1, where),
            notes=_str_field(meta, "notes", 1, where),
            coverage=coverage,
            orbits=tuple(orbits),
            spaces=tuple(spaces),
            twists=tuple(twists),
        )
    except ValueError as exc:
        raise SnapshotFormatError(f"{where}: inconsistent snapshot: {exc}") from exc


def json_line(line: str, lineno: int, where: str) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SnapshotFormatError(f"{where}:{lineno}: not valid JSON: {exc}") from exc
    if not isinstance(record, dict):
        raise SnapshotFormatError(f"{where}:{lineno}: record is not an object")
    return record


def _require_keys(record: dict, keys: frozenset, lineno: int, where: str) -> None:
    have = set(record)
    missing = sorted(keys - have)
    extra = sorted(have - keys)
    if missing:
        raise SnapshotFormatError(f"{where}:{lineno}: record missing field(s) {missing}")
    if extra:
        raise SnapshotFormatError(f"{where}:{lineno}: record has unexpected field(s) {extra}")


def _int_field(record: dict, name: str, lineno: int, where: str) -> int:
    value = record[name]
    # bool is an int subclass; JSON true/false must not pass as numbers
    if not isinstance(value, int) or isinstance(value, bool):
        raise SnapshotFormatError(f"{where}:{lineno}: field {name!r} must be an integer")
    return value


def _str_field(record: dict, name: str, lineno: int, where: str) -> str:
    value = record[name]
    if not isinstance(value, str):
        raise SnapshotFormatError(f"{where}:{lineno}: field {name!r} must be a string")
    return value


def _orbit_from_record(record: dict, lineno: int, where: str) -> NewformOrbit:
    rank = record["analytic_rank"]
    if rank is not None and (not isinstance(rank, int) or isinstance(rank, bool)):
        raise SnapshotFormatError(f"{where}:{lineno}: analytic_rank must be an integer or null")
    vanishes = record["lval_vanishes"]
    if not isinstance(vanishes, bool):
        raise SnapshotFormatError(f"{where}:{lineno}: lval_vanishes must be a boolean")
    traces = record["traces"]
    if not isinstance(traces, list) or any(
        not isinstance(t, int) or isinstance(t, bool) for t in traces
    ):
        raise SnapshotFormatError(f"{where}:{lineno}: traces must be a list of integers")
    al = record["atkin_lehner"]
    if al is not None:
        if not isinstance(al, list) or any(
            not (isinstance(pair, list) and len(pair) == 2) for pair in al
        ):
            raise SnapshotFormatError(
                f"{where}:{lineno}: atkin_lehner must be null or a list of [prime, sign] pairs"
            )
        al = tuple((int(p), int(s)) for p, s in al)
    return NewformOrbit(
        label=_str_field(record, "label", lineno, where),
        level=_int_field(record, "level", lineno, where),
        weight=_int_field(record, "weight", lineno, where),
        char_label=_str_field(record, "char_label", lineno, where),
        char_conductor=_int_field(record, "char_conductor", lineno, where),
        char_order=_int_field(record, "char_order", lineno, where),
        dimension=_int_field(record, "dimension", lineno, where),
        analytic_rank=rank,
        lval_vanishes=vanishes,
        traces=tuple(traces),
        atkin_lehner=al,
    )


def _twist_from_record(record: dict, lineno: int, where: str) -> TwistRecord:
    raw_targets = record["targets"]
    if not isinstance(raw_targets, list):
        raise SnapshotFormatError(f"{where}:{lineno}: targets must be a list")
    targets = []
    for item in raw_targets:
        if not (isinstance(item, list) and len(item) == 3):
            raise SnapshotFormatError(
                f"{where}:{lineno}: each target must be [label_or_null, level, multiplicity]"
            )
        label, level, mult = item
        if label is not None and not isinstance(label, str):
            raise SnapshotFormatError(f"{where}:{lineno}: target label must be a string or null")
        targets.append(TwistTarget(label=label, level=int(level), multiplicity=int(mult)))
    raw_members = record["members"]
    members = None
    if raw_members is not None:
        if not isinstance(raw_members, list) or any(
            not (isinstance(row, list) and len(row) == 3) for row in raw_members
        ):
            raise SnapshotFormatError(
                f"{where}:{lineno}: members must be null or a list of [i, label, j] rows"
            )
        members = tuple((int(i), str(lbl), int(j)) for i, lbl, j in raw_members)
    return TwistRecord(
        source=_str_field(record, "source", lineno, where),
        char=_str_field(record, "char", lineno, where),
        targets=tuple(targets),
        members=members,
    )


def default_snapshot_path() -> Path:
    return _DATA_DIR / DEFAULT_SNAPSHOT_NAME


def load_default_snapshot() -> Snapshot:
    path = default_snapshot_path()
    if not path.exists():
        raise DataGapError(
            f"no bundled snapshot at {path}; pass an explicit snapshot path"
        )
    return load_snapshot(path)
