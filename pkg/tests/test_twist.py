"""Character action checks: level bounds, lookups, and the replay verifier.

The toy fixture carries a full involution of the quadratic character mod 3
on four member forms, so verify_action exercises every lane: record
lookup, closure, bijectivity, and member-level composition.
"""

from __future__ import annotations

from math import lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cycjac.dirichlet import character_group, parse_label, primitivize
from cycjac.errors import DataGapError
from cycjac.store import TwistRecord, TwistTarget
from cycjac.twist import act, twist_level_bound, verify_action

from conftest import _toy3_twists, toy3_with


class TestLevelBound:
    def test_pins(self):
        assert twist_level_bound(11, 1, 11) == 121
        assert twist_level_bound(3, 1, 3) == 9
        assert twist_level_bound(9, 1, 3) == 9
        assert twist_level_bound(32, 8, 4) == 32
        assert twist_level_bound(14, 1, 4) == 112

    @given(
        st.integers(min_value=1, max_value=60),
        st.integers(min_value=1, max_value=60),
        st.integers(min_value=1, max_value=60),
    )
    def test_contains_all_three_terms(self, level, cc, tc):
        bound = twist_level_bound(level, cc, tc)
        assert bound % level == 0
        assert bound % (cc * tc) == 0
        assert bound % (tc * tc) == 0
        assert bound == lcm(level, cc * tc, tc * tc)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            twist_level_bound(0, 1, 1)


class TestAct:
    def test_principal_fixes_without_record(self, toy3):
        orb = toy3.orbit("9.2.a.a")
        chi = character_group(3).principal
        targets = act(orb, chi, toy3)
        assert targets == (TwistTarget(label="9.2.a.a", level=9, multiplicity=2),)

    def test_imprimitive_principal_also_fixes(self, toy3):
        # the character mod 9 induced by the principal one has conductor 1
        orb = toy3.orbit("3.2.a.a")
        chi = character_group(9).principal
        assert act(orb, chi, toy3)[0].label == "3.2.a.a"

    def test_nontrivial_uses_record(self, toy3):
        orb = toy3.orbit("9.2.a.a")
        chi = parse_label("3.2")
        labels = sorted(t.label for t in act(orb, chi, toy3))
        assert labels == ["3.2.a.a", "9.2.a.b"]

    def test_imprimitive_character_is_primitivized(self, toy3):
        # the order-2 character mod 9 has conductor 3; the stored record
        # is keyed by its primitive form
        group = character_group(9)
        chi = next(c for c in group.characters() if c.order == 2)
        assert primitivize(chi).label == "3.2"
        orb = toy3.orbit("3.2.a.a")
        assert act(orb, chi, toy3)[0].label == "9.2.a.a"

    def test_missing_record_raises(self, toy3):
        orb = toy3.orbit("3.2.a.a")
        with pytest.raises(DataGapError):
            act(orb, parse_label("5.2"), toy3)


class TestVerifyAction:
    def test_toy_world_is_consistent(self, toy3):
        rep = verify_action(3, 1, toy3)
        assert rep.ok
        assert rep.orbit_count == 3
        assert rep.char_count == 1
        assert rep.records_checked == 3
        assert rep.compositions_checked == 3
        assert rep.compositions_skipped == 0

    def test_missing_record_is_reported(self, toy3):
        broken = toy3_with(twists=tuple(t for t in toy3.twists if t.source != "9.2.a.b"))
        rep = verify_action(3, 1, broken)
        assert not rep.ok
        assert any("no twist record" in f and "9.2.a.b" in f for f in rep.failures)

    def test_external_target_is_reported(self):
        # retarget the dim-1 orbit at a level outside NF(3, 1)
        bad = TwistRecord(
            source="9.2.a.b",
            char="3.2",
            targets=(TwistTarget(label=None, level=27, multiplicity=1),),
        )
        broken = toy3_with(
            twists=tuple(
                bad if t.source == "9.2.a.b" else t for t in _toy3_twists()
            )
        )
        rep = verify_action(3, 1, broken)
        assert not rep.ok

    def test_unbalanced_multiplicity_is_reported(self):
        # send both members of the dim-2 orbit to the level-3 orbit: the
        # level-3 orbit is hit twice but only has dimension 1
        bad = TwistRecord(
            source="9.2.a.a",
            char="3.2",
            targets=(TwistTarget(label="3.2.a.a", level=3, multiplicity=2),),
        )
        broken = toy3_with(
            twists=tuple(bad if t.source == "9.2.a.a" else t for t in _toy3_twists())
        )
        rep = verify_action(3, 1, broken)
        assert not rep.ok

    def test_bad_member_map_fails_composition(self):
        # structurally valid but chi twice no longer returns members home
        bad = TwistRecord(
            source="9.2.a.b",
            char="3.2",
            targets=(TwistTarget(label="9.2.a.a", level=9, multiplicity=1),),
            members=((0, "9.2.a.a", 0),),
        )
        broken = toy3_with(
            twists=tuple(bad if t.source == "9.2.a.b" else t for t in _toy3_twists())
        )
        rep = verify_action(3, 1, broken)
        assert not rep.ok
        assert rep.compositions_checked == 3
        assert sum("composition" in f for f in rep.failures) == 2

    def test_dropped_member_maps_fall_back_to_multisets(self):
        # without member maps the dim-2 orbit still composes exactly (both
        # its intermediates are single-target); the other two orbits pass
        # through the dim-2 intermediate and only get the support check
        stripped = tuple(
            TwistRecord(source=t.source, char=t.char, targets=t.targets, members=None)
            for t in _toy3_twists()
        )
        rep = verify_action(3, 1, toy3_with(twists=stripped))
        assert rep.ok
        assert rep.compositions_checked == 1
        assert rep.compositions_skipped == 2

    def test_multiset_fallback_catches_wrong_product(self):
        # chi squared is principal, so every orbit must come home; rerouting
        # the dim-2 record strands the other dim-1 orbit at level 9, whose
        # two-step multiset is fully determined and lands away from home
        bad_targets = (TwistTarget(label="3.2.a.a", level=3, multiplicity=2),)
        stripped = tuple(
            TwistRecord(
                source=t.source,
                char=t.char,
                targets=bad_targets if t.source == "9.2.a.a" else t.targets,
            )
            for t in _toy3_twists()
        )
        rep = verify_action(3, 1, toy3_with(twists=stripped))
        assert not rep.ok
        assert any("composition" in f and "9.2.a.b" in f for f in rep.failures)

    def test_trivial_group_has_nothing_to_check(self, toy3):
        rep = verify_action(1, 9, toy3)
        assert rep.ok
        assert rep.char_count == 0
        assert rep.records_checked == 0
