"""HTTP ingestion of newform orbit data into a Snapshot.

The client speaks to a remote JSON API described by an endpoint
configuration (URL templates plus field names), authenticates nothing,
and is polite: at most a configurable number of requests in flight and a
minimum spacing between request starts.  Remote records are mapped onto
store.NewformOrbit and friends with strict field checking; a missing
field is schema drift and aborts the run naming the field, because a
silently defaulted analytic rank would corrupt every theorem downstream.

Transport is injectable.  The default uses requests; tests supply a fake
that replays canned payloads.  Network failures raise IngestError with
retriable=True after writing a journal of the levels already fetched, so
a rerun can resume instead of refetching everything.

The bundled snapshot shipped with this package was not produced by this
client (the build environment is offline); it comes from the exact
modular-symbols generator under tools/, which records its own provenance
in the snapshot metadata.  This client exists so the data can be
refreshed from a public database when one is reachable.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import IngestError
from .store import NewformOrbit, Snapshot, SpaceDim, TwistRecord, TwistTarget

_REQUIRED_ORBIT_FIELDS = (
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
)
_REQUIRED_TWIST_FIELDS = ("source", "char", "targets")
_REQUIRED_SPACE_FIELDS = (
    "level",
    "char_label",
    "char_conductor",
    "char_order",
    "dim_new",
    "dim_total",
)


@dataclass(frozen=True)
class EndpointConfig:
    """URL templates for the remote API.  {lo} and {hi} are level bounds."""

    base_url: str
    newforms_path: str = "/newforms?weight=2&level_ge={lo}&level_le={hi}"
    spaces_path: str = "/spaces?weight=2&level_ge={lo}&level_le={hi}"
    twists_path: str = "/twists?weight=2&level_ge={lo}&level_le={hi}"
    max_in_flight: int = 4
    min_spacing_seconds: float = 0.25

    @classmethod
    def from_file(cls, path) -> "EndpointConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        unknown = set(raw) - known
        if unknown:
            raise IngestError(f"endpoint config has unknown keys {sorted(unknown)}")
        if "base_url" not in raw:
            raise IngestError("endpoint config must define base_url")
        return cls(**raw)


class RateLimiter:
    """Bounds concurrency and enforces a minimum spacing between starts."""

    def __init__(self, max_in_flight: int, min_spacing_seconds: float, clock=time.monotonic,
                 sleep=time.sleep):
        if max_in_flight < 1:
            raise ValueError("max_in_flight must be at least 1")
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._spacing = min_spacing_seconds
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._last_start = None

    def __enter__(self):
        self._slots.acquire()
        with self._lock:
            now = self._clock()
            if self._last_start is not None:
                wait = self._spacing - (now - self._last_start)
                if wait > 0:
                    self._sleep(wait)
                    now = self._clock()
            self._last_start = now
        return self

    def __exit__(self, *exc):
        self._slots.release()
        return False


def default_transport(url: str) -> dict:
    """GET url, decode JSON.  Raises IngestError(retriable=True) on I/O trouble."""
    import requests

    try:
        response = requests.get(url, timeout=30)
        response.raise_for_status()
        return response.json()
    except requests.RequestException as exc:
        raise IngestError(f"GET {url} failed: {exc}", retriable=True) from exc


class IngestClient:
    """Fetches orbit, space, and twist records level range by level range.

    transport: callable url -> decoded JSON payload.  Payloads carry a
    "data" list of records and echo a "source" string and "date" used for
    snapshot provenance.
    """

    def __init__(self, config: EndpointConfig, transport=None, journal_path=None):
        self.config = config
        self.transport = transport if transport is not None else default_transport
        self.journal_path = Path(journal_path) if journal_path else None
        self._limiter = RateLimiter(config.max_in_flight, config.min_spacing_seconds)

    # -- journal ----------------------------------------------------------

    def _journal_done(self) -> set[tuple[int, int]]:
        if self.journal_path is None or not self.journal_path.exists():
            return set()
        done = set()
        for line in self.journal_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                entry = json.loads(line)
                done.add((entry["lo"], entry["hi"]))
        return done

    def _journal_mark(self, lo: int, hi: int, payloads: dict) -> None:
        if self.journal_path is None:
            return
        with self.journal_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps({"lo": lo, "hi": hi, "payloads": payloads}, sort_keys=True) + "\n")

    def _journal_payloads(self) -> list[dict]:
        if self.journal_path is None or not self.journal_path.exists():
            return []
        out = []
        for line in self.journal_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                out.append(json.loads(line)["payloads"])
        return out

    # -- fetching ---------------------------------------------------------

    def _get(self, path_template: str, lo: int, hi: int) -> dict:
        url = self.config.base_url.rstrip("/") + path_template.format(lo=lo, hi=hi)
        with self._limiter:
            payload = self.transport(url)
        if not isinstance(payload, dict) or "data" not in payload:
            raise IngestError(f"GET {url}: payload has no 'data' list")
        return payload

    def ingest(self, level_range: tuple[int, int], chunk: int = 100) -> Snapshot:
        """Fetch everything for levels in [lo, hi] and assemble a Snapshot.

        Already-journaled chunks are not refetched.  On a retriable
        failure the journal keeps the chunks that did complete.
        """
        lo, hi = level_range
        if not 1 <= lo <= hi:
            raise IngestError(f"bad level range {level_range}")
        done = self._journal_done()
        collected = self._journal_payloads()
        sources, dates = set(), set()
        for payloads in collected:
            sources.add(payloads["newforms"].get("source", ""))
            dates.add(payloads["newforms"].get("date", ""))

        start = lo
        while start <= hi:
            end = min(start + chunk - 1, hi)
            if (start, end) not in done:
                payloads = {
                    "newforms": self._get(self.config.newforms_path, start, end),
                    "spaces": self._get(self.config.spaces_path, start, end),
                    "twists": self._get(self.config.twists_path, start, end),
                }
                self._journal_mark(start, end, payloads)
                collected.append(payloads)
                sources.add(payloads["newforms"].get("source", ""))
                dates.add(payloads["newforms"].get("date", ""))
            start = end + 1

        orbits, spaces, twists = [], [], []
        coverage: dict[int, str] = {}
        for payloads in collected:
            for rec in payloads["newforms"]["data"]:
                orbits.append(_orbit_from_remote(rec))
            for rec in payloads["spaces"]["data"]:
                spaces.append(_space_from_remote(rec))
            for rec in payloads["twists"]["data"]:
                twists.append(_twist_from_remote(rec))
            for entry in payloads["newforms"].get("coverage", []):
                coverage[int(entry["level"])] = str(entry["mode"])

        source = ", ".join(sorted(s for s in sources if s)) or "remote"
        date = max((d for d in dates if d), default="")
        try:
            return Snapshot(
                max_level=hi,
                source=source,
                generated_on=date,
                notes=f"ingested levels {lo}..{hi}",
                coverage=coverage,
                orbits=tuple(orbits),
                spaces=tuple(spaces),
                twists=tuple(twists),
            )
        except ValueError as exc:
            raise IngestError(f"remote data is inconsistent: {exc}") from exc


def _require(record: dict, fields: tuple, what: str):
    for name in fields:
        if name not in record:
            raise IngestError(
                f"schema drift: remote {what} record is missing field {name!r} "
                f"(have {sorted(record)})"
            )


def _orbit_from_remote(record: dict) -> NewformOrbit:
    _require(record, _REQUIRED_ORBIT_FIELDS, "newform")
    al = record["atkin_lehner"]
    try:
        return NewformOrbit(
            label=record["label"],
            level=record["level"],
            weight=record["weight"],
            char_label=record["char_label"],
            char_conductor=record["char_conductor"],
            char_order=record["char_order"],
            dimension=record["dimension"],
            analytic_rank=record["analytic_rank"],
            lval_vanishes=record["lval_vanishes"],
            traces=tuple(record["traces"]),
            atkin_lehner=None if al is None else tuple((int(p), int(s)) for p, s in al),
        )
    except (ValueError, TypeError) as exc:
        raise IngestError(f"remote newform record {record.get('label')!r} is invalid: {exc}") from exc


def _space_from_remote(record: dict) -> SpaceDim:
    _require(record, _REQUIRED_SPACE_FIELDS, "space")
    try:
        return SpaceDim(
            level=record["level"],
            char_label=record["char_label"],
            char_conductor=record["char_conductor"],
            char_order=record["char_order"],
            dim_new=record["dim_new"],
            dim_total=record["dim_total"],
        )
    except (ValueError, TypeError) as exc:
        raise IngestError(f"remote space record at level {record.get('level')} is invalid: {exc}") from exc


def _twist_from_remote(record: dict) -> TwistRecord:
    _require(record, _REQUIRED_TWIST_FIELDS, "twist")
    try:
        targets = tuple(
            TwistTarget(label=t[0], level=int(t[1]), multiplicity=int(t[2]))
            for t in record["targets"]
        )
        members = record.get("members")
        return TwistRecord(
            source=record["source"],
            char=record["char"],
            targets=targets,
            members=None if members is None else tuple((int(i), str(l), int(j)) for i, l, j in members),
        )
    except (ValueError, TypeError, IndexError) as exc:
        raise IngestError(f"remote twist record {record.get('source')!r} is invalid: {exc}") from exc
