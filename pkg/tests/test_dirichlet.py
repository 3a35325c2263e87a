"""Character-group tests against brute-force value tables.

The oracle view of a character mod q is its full table of value
exponents on units; multiplicativity, conductor, order and orbit
structure are all recomputed from tables here and compared with the
packaged implementation.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest

from cycjac.arith import euler_phi, multiplicative_order
from cycjac.dirichlet import (
    DirichletCharacter,
    character_group,
    count_by,
    cremona_letter_code,
    letter_index,
    induce,
    parse_label,
    product,
)

MODULI = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 15, 16, 21, 24, 36, 40, 45, 60]


def _table(chi: DirichletCharacter) -> dict[int, Fraction | None]:
    q = chi.modulus
    return {x: chi.value_exponent(x) for x in range(q if q > 1 else 1)} or {
        0: chi.value_exponent(0)
    }


def test_group_sizes():
    for q in MODULI:
        assert len(character_group(q).characters()) == euler_phi(q)


def test_tables_multiplicative_and_distinct():
    for q in MODULI:
        group = character_group(q)
        tables = []
        for chi in group.characters():
            t = _table(chi)
            units = [x for x in range(1, q + 1) if gcd(x, q) == 1]
            for x in units:
                for y in units:
                    a, b, c = t[x % q], t[y % q], t[x * y % q]
                    assert (a + b - c) % 1 == 0
            for x in range(q):
                if q > 1 and gcd(x, q) != 1:
                    assert t[x] is None
            tables.append(tuple(sorted(t.items(), key=lambda kv: kv[0])))
        assert len(set(tables)) == euler_phi(q)


def test_order_from_tables():
    for q in MODULI:
        for chi in character_group(q).characters():
            t = _table(chi)
            denoms = [v.denominator for v in t.values() if v is not None]
            lcm = 1
            for d in denoms:
                lcm = lcm * d // gcd(lcm, d)
            assert chi.order == lcm


def test_conductor_from_tables():
    """Conductor = least c | q with chi trivial on units = 1 mod c."""
    for q in MODULI:
        for chi in character_group(q).characters():
            t = _table(chi)
            cond = None
            for c in sorted(d for d in range(1, q + 1) if q % d == 0):
                if all(
                    t[x % q] == 0
                    for x in range(1, q + 1)
                    if gcd(x, q) == 1 and x % c == 1 % c
                ):
                    cond = c
                    break
            assert chi.conductor == cond, (q, chi.index)


def test_index_labels_multiply():
    for q in MODULI:
        group = character_group(q)
        chars = {c.index: c for c in group.characters()}
        for m, chi in chars.items():
            for n, psi in chars.items():
                assert product(chi, psi).index == m * n % q if q > 1 else 1


def test_index_order_matches_residue_order():
    for q in MODULI:
        if q < 3:
            continue
        for chi in character_group(q).characters():
            assert chi.order == multiplicative_order(chi.index, q)


def test_label_round_trip():
    for q in MODULI:
        for chi in character_group(q).characters():
            back = parse_label(chi.label)
            assert back == chi
    with pytest.raises(ValueError):
        parse_label("12")
    with pytest.raises(ValueError):
        parse_label("12.2")  # not a unit


def test_principal():
    for q in MODULI:
        chi = character_group(q).principal
        assert chi.is_principal
        assert chi.order == 1
        assert chi.conductor == 1
        assert chi.index == 1 % q or q == 1


def test_parity_counts():
    # exactly half the characters are even for q > 2
    for q in MODULI:
        group = character_group(q)
        evens = count_by(group, lambda c: c.is_even)
        if q <= 2:
            assert evens == 1
        else:
            assert evens == euler_phi(q) // 2


def test_galois_orbits_partition_and_size():
    for q in MODULI:
        group = character_group(q)
        orbits = group.galois_orbits()
        seen = [c.index for orb in orbits for c in orb]
        assert sorted(seen) == sorted(c.index for c in group.characters())
        for orb in orbits:
            assert len(orb) == euler_phi(orb[0].order)
            assert len({c.order for c in orb}) == 1
            assert len({c.conductor for c in orb}) == 1


def test_orbit_labels():
    group = character_group(5)
    chars = {c.index: c for c in group.characters()}
    assert group.orbit_label(chars[1]) == "5.a"
    assert group.orbit_label(chars[4]) == "5.b"  # the quadratic one
    assert group.orbit_label(chars[2]) == "5.c"
    assert group.orbit_label(chars[3]) == "5.c"

    group = character_group(8)
    chars = {c.index: c for c in group.characters()}
    assert group.orbit_label(chars[1]) == "8.a"
    # three quadratic characters, ordered by least index
    assert group.orbit_label(chars[3]) == "8.b"
    assert group.orbit_label(chars[5]) == "8.c"
    assert group.orbit_label(chars[7]) == "8.d"


def test_cremona_letters():
    assert cremona_letter_code(0) == "a"
    assert cremona_letter_code(25) == "z"
    assert cremona_letter_code(26) == "ba"
    assert cremona_letter_code(27) == "bb"
    assert cremona_letter_code(51) == "bz"
    assert cremona_letter_code(52) == "ca"
    for n in range(0, 800):
        assert letter_index(cremona_letter_code(n)) == n
    for bad in ["", "A", "a1", "-"]:
        with pytest.raises(ValueError):
            letter_index(bad)


def test_conductor_counts_match_primitive_counts():
    """#:{chi mod q with conductor c} = #:{primitive chi mod c} for c | q."""
    for q in [12, 24, 36, 40, 45, 60, 72, 100]:
        group = character_group(q)
        for c in [d for d in range(1, q + 1) if q % d == 0]:
            here = count_by(group, lambda chi: chi.conductor == c)
            prim = count_by(character_group(c), lambda chi: chi.conductor == c)
            assert here == prim, (q, c)


def test_induction_round_trip():
    for q, big in [(3, 6), (3, 12), (4, 12), (5, 15), (8, 24), (1, 7)]:
        for chi in character_group(q).characters():
            if chi.conductor != q and q > 1:
                continue
            lifted = induce(chi, big)
            assert lifted.modulus == big
            assert lifted.conductor == chi.conductor
            assert lifted.order == chi.order
            for x in range(1, big * q + 1):
                if gcd(x, big * q) == 1:
                    assert lifted.value_exponent(x) == chi.value_exponent(x)


def test_induce_rejects_nondivisible_conductor():
    chi = character_group(4).from_index(3)
    with pytest.raises(ValueError):
        induce(chi, 6)


def test_power_and_value_pins():
    # quartic character mod 5: values at (1, 2, 3, 4)
    chi = character_group(5).from_index(2)
    assert chi.order == 4
    vals = [chi.value_exponent(x) for x in (1, 2, 3, 4)]
    assert vals[0] == 0
    assert vals[3] == Fraction(1, 2)
    assert {vals[1], vals[2]} == {Fraction(1, 4), Fraction(3, 4)}
    assert (chi**2).order == 2
    assert (chi**4).is_principal
    assert (chi * chi).index == 4
