"""Exception types shared across the package."""

from __future__ import annotations


class CycjacError(Exception):
    """Base class for package errors."""


class CoverageError(CycjacError):
    """The snapshot does not cover a level or character range a query needs.

    Carries the first missing level so callers can report exactly what to
    ingest next.
    """

    def __init__(self, message: str, missing_level: int | None = None):
        super().__init__(message)
        self.missing_level = missing_level


class DataGapError(CycjacError):
    """A required record (twist target, analytic rank) is absent.

    Distinct from CoverageError: the level is covered but a specific fact
    was never recorded, and the engine refuses to recompute it.
    """


class ChecksumError(CycjacError):
    """Snapshot bytes do not match their recorded checksum."""


class SnapshotFormatError(CycjacError):
    """Snapshot file is structurally malformed."""


class IngestError(CycjacError):
    """Remote fetch or remote data mapping failed.

    retriable=True marks transient transport trouble: the caller may rerun
    with the same journal and resume.  Schema drift and invalid remote data
    are never retriable.
    """

    def __init__(self, message: str, retriable: bool = False):
        super().__init__(message)
        self.retriable = retriable
