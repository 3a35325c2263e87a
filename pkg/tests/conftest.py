"""Shared fixture snapshots: small fictional worlds with consistent bookkeeping."""

import pytest

from cycjac.store import NewformOrbit, Snapshot, SpaceDim, TwistRecord, TwistTarget


def _toy3_orbits():
    a = NewformOrbit(
        label="3.2.a.a",
        level=3,
        weight=2,
        char_label="3.a",
        char_conductor=1,
        char_order=1,
        dimension=1,
        analytic_rank=0,
        lval_vanishes=False,
        traces=(1, -1, 1, 2),
        atkin_lehner=((3, -1),),
    )
    b = NewformOrbit(
        label="9.2.a.a",
        level=9,
        weight=2,
        char_label="9.a",
        char_conductor=1,
        char_order=1,
        dimension=2,
        analytic_rank=1,
        lval_vanishes=True,
        traces=(0, 2, -2, 1),
        atkin_lehner=((3, 1),),
    )
    c = NewformOrbit(
        label="9.2.a.b",
        level=9,
        weight=2,
        char_label="9.a",
        char_conductor=1,
        char_order=1,
        dimension=1,
        analytic_rank=1,
        lval_vanishes=True,
        traces=(2, 0, -1, -3),
        atkin_lehner=((3, 1),),
    )
    return a, b, c


def _toy3_twists():
    # the quadratic character mod 3 acts as an involution on members:
    # a:0 <-> b:0 and b:1 <-> c:0
    return (
        TwistRecord(
            source="3.2.a.a",
            char="3.2",
            targets=(TwistTarget(label="9.2.a.a", level=9, multiplicity=1),),
            members=((0, "9.2.a.a", 0),),
        ),
        TwistRecord(
            source="9.2.a.a",
            char="3.2",
            targets=(
                TwistTarget(label="3.2.a.a", level=3, multiplicity=1),
                TwistTarget(label="9.2.a.b", level=9, multiplicity=1),
            ),
            members=((0, "3.2.a.a", 0), (1, "9.2.a.b", 0)),
        ),
        TwistRecord(
            source="9.2.a.b",
            char="3.2",
            targets=(TwistTarget(label="9.2.a.a", level=9, multiplicity=1),),
            members=((0, "9.2.a.a", 1),),
        ),
    )


@pytest.fixture(scope="module")
def toy3():
    """Three trivial-character orbits at levels 3 and 9 with a full
    involution action of the quadratic character mod 3."""
    return Snapshot(
        version="1",
        max_level=9,
        source="unit fixture",
        generated_on="2026-08-22",
        coverage={1: "all", 3: "all", 9: "all"},
        orbits=_toy3_orbits(),
        spaces=(
            SpaceDim(level=3, char_label="3.1", char_conductor=1, char_order=1, dim_new=1, dim_total=1),
            SpaceDim(level=9, char_label="9.1", char_conductor=1, char_order=1, dim_new=3, dim_total=5),
        ),
        twists=_toy3_twists(),
    )


@pytest.fixture(scope="module")
def clean6():
    """Fully covered levels 1, 2, 3, 6 holding no orbits at all."""
    return Snapshot(
        version="1",
        max_level=6,
        source="unit fixture",
        generated_on="2026-08-22",
        coverage={1: "all", 2: "all", 3: "all", 6: "all"},
    )


def toy3_with(orbits=None, twists=None):
    """toy3 with orbit or twist tuples replaced, for breakage tests."""
    return Snapshot(
        version="1",
        max_level=9,
        source="unit fixture",
        generated_on="2026-08-22",
        coverage={1: "all", 3: "all", 9: "all"},
        orbits=_toy3_orbits() if orbits is None else orbits,
        twists=_toy3_twists() if twists is None else twists,
    )
