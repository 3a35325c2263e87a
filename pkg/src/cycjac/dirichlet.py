"""Dirichlet characters as exponent vectors on a fixed set of unit-group
generators.

A character mod q is stored by its exponents on the CRT generators of
(Z/q)^*: one generator (the least primitive root that works for all
powers) per odd prime power, and the pair (-1, 5) for 2^k with k >= 3.
Values are never materialized as complex numbers; a value is reported as
the exponent t/m with the understanding that chi(x) = e^(2 pi i t/m).

Characters also carry their index n in the multiplicative labeling
scheme where the pairing chi_q(n, m) makes n <-> chi_q(n, .) a group
isomorphism, so labels multiply: chi_q(m, .) chi_q(n, .) = chi_q(mn, .).
Labels render as "q.n".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .arith import euler_phi, factorize, multiplicative_order


def cremona_letter_code(n: int) -> str:
    """0 -> a, 25 -> z, 26 -> ba, 27 -> bb, ...: base 26 with digits a..z."""
    if n < 0:
        raise ValueError("negative letter code")
    out = []
    while True:
        out.append(chr(ord("a") + n % 26))
        n //= 26
        if n == 0:
            break
    return "".join(reversed(out))


def letter_index(code: str) -> int:
    """Inverse of cremona_letter_code: a -> 0, z -> 25, ba -> 26."""
    if not code or any(not ("a" <= c <= "z") for c in code):
        raise ValueError(f"bad letter code {code!r}")
    n = 0
    for c in code:
        n = 26 * n + (ord(c) - ord("a"))
    return n


def _least_primitive_root(p: int, e: int) -> int:
    """Least g that generates (Z/p^e)^* for every exponent up to e (odd p)."""
    target = p - 1
    g = 2
    while True:
        if gcd(g, p) == 1 and multiplicative_order(g, p) == target:
            if e == 1 or multiplicative_order(g, p * p) == p * (p - 1):
                return g
        g += 1


@dataclass(frozen=True)
class _Component:
    prime: int
    power: int
    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]


@lru_cache(maxsize=None)
def _component(p: int, e: int) -> _Component:
    pe = p**e
    if p == 2:
        if e == 1:
            return _Component(2, 1, 2, (), ())
        if e == 2:
            return _Component(2, 2, 4, (3,), (2,))
        return _Component(2, e, pe, (pe - 1, 5), (2, 2 ** (e - 2)))
    g = _least_primitive_root(p, e)
    return _Component(p, e, pe, (g,), (euler_phi(pe),))


@lru_cache(maxsize=None)
def _dlog_table(p: int, e: int) -> dict[int, tuple[int, ...]]:
    """residue mod p^e -> exponent vector on the component generators."""
    comp = _component(p, e)
    table: dict[int, tuple[int, ...]] = {}
    if not comp.generators:
        table[1 % comp.modulus] = ()
        return table
    if p == 2 and e >= 3:
        m = comp.modulus
        for s in range(2):
            x = (m - 1) ** s % m
            for a in range(comp.orders[1]):
                table[x] = (s, a)
                x = x * 5 % m
    else:
        g = comp.generators[0]
        x = 1
        for a in range(comp.orders[0]):
            table[x] = (a,)
            x = x * g % comp.modulus
    return table


@dataclass(frozen=True)
class DirichletCharacter:
    """Immutable character; construct through character_group(q)."""

    modulus: int
    exponents: tuple[int, ...]
    index: int  # n in the "q.n" label
    order: int
    conductor: int

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    @property
    def is_principal(self) -> bool:
        return self.order == 1

    @property
    def is_even(self) -> bool:
        v = self.value_exponent(self.modulus - 1 if self.modulus > 1 else 1)
        return v == 0

    def value_exponent(self, x: int) -> Fraction | None:
        """chi(x) = e^(2 pi i t) for the returned t in [0, 1); None when
        gcd(x, q) > 1 (the value is 0)."""
        q = self.modulus
        x %= q
        if q == 1:
            return Fraction(0)
        if gcd(x, q) != 1:
            return None
        group = character_group(q)
        t = Fraction(0)
        pos = 0
        for comp in group.components:
            vec = _dlog_table(comp.prime, comp.power)[x % comp.modulus]
            for a, d in zip(vec, comp.orders):
                t += Fraction(self.exponents[pos] * a, d)
                pos += 1
        frac = t - int(t)
        return frac if frac >= 0 else frac + 1

    def __pow__(self, k: int) -> DirichletCharacter:
        group = character_group(self.modulus)
        return group.from_exponents(tuple(e * k for e in self.exponents))

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        return product(self, other)


class CharacterGroup:
    """The full character group mod q with a fixed generator choice."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError(f"modulus must be >= 1, got {q}")
        self.modulus = q
        self.components = tuple(_component(p, e) for p, e in factorize(q)) if q > 1 else ()
        self.generator_orders = tuple(d for c in self.components for d in c.orders)
        self._chars: list[DirichletCharacter] | None = None
        self._orbits: list[tuple[DirichletCharacter, ...]] | None = None

    def __len__(self) -> int:
        return euler_phi(self.modulus)

    # -- construction --------------------------------------------------------

    def from_exponents(self, exponents: tuple[int, ...]) -> DirichletCharacter:
        orders = self.generator_orders
        if len(exponents) != len(orders):
            raise ValueError(
                f"expected {len(orders)} exponents for modulus {self.modulus}, "
                f"got {len(exponents)}"
            )
        exps = tuple(e % d for e, d in zip(exponents, orders))
        order = 1
        for e, d in zip(exps, orders):
            if e:
                order = lcm(order, d // gcd(d, e))
        return DirichletCharacter(
            modulus=self.modulus,
            exponents=exps,
            index=self._index_of(exps),
            order=order,
            conductor=self._conductor_of(exps),
        )

    def from_index(self, n: int) -> DirichletCharacter:
        """Character with label 'q.n'."""
        q = self.modulus
        n %= q if q > 1 else 1
        if q == 1:
            return self.from_exponents(())
        if gcd(n, q) != 1:
            raise ValueError(f"index {n} not a unit mod {q}")
        exps = []
        for comp in self.components:
            exps.extend(_dlog_table(comp.prime, comp.power)[n % comp.modulus])
        return self.from_exponents(tuple(exps))

    @property
    def principal(self) -> DirichletCharacter:
        return self.from_exponents(tuple(0 for _ in self.generator_orders))

    def characters(self) -> list[DirichletCharacter]:
        """All characters, lexicographic on exponent vectors."""
        if self._chars is None:
            vectors = [()]
            for d in reversed(self.generator_orders):
                vectors = [(e,) + v for e in range(d) for v in vectors]
            self._chars = sorted(
                (self.from_exponents(v) for v in vectors), key=lambda c: c.exponents
            )
        return list(self._chars)

    # -- labels --------------------------------------------------------------

    def _index_of(self, exps: tuple[int, ...]) -> int:
        """Inverse of from_index: rebuild n from component exponents."""
        q = self.modulus
        if q == 1:
            return 1
        residues = []
        pos = 0
        for comp in self.components:
            k = len(comp.orders)
            vec = exps[pos : pos + k]
            pos += k
            x = 1
            for g, a in zip(comp.generators, vec):
                x = x * pow(g, a, comp.modulus) % comp.modulus
            residues.append((x, comp.modulus))
        n = 0
        for x, m in residues:
            rest = q // m
            n = (n + x * rest * pow(rest, -1, m)) % q
        return n

    def _conductor_of(self, exps: tuple[int, ...]) -> int:
        cond = 1
        pos = 0
        for comp in self.components:
            p = comp.prime
            if p == 2 and comp.power >= 3:
                t_sign, t_five = exps[pos], exps[pos + 1]
                pos += 2
                d5 = comp.orders[1]
                o5 = d5 // gcd(d5, t_five) if t_five else 1
                if o5 > 1:
                    cond *= 4 * o5
                elif t_sign:
                    cond *= 4
            else:
                (t,) = exps[pos : pos + 1] or (0,)
                pos += len(comp.orders)
                if not comp.orders:
                    continue
                if t == 0:
                    continue
                d = comp.orders[0]
                o = d // gcd(d, t)
                if p == 2:  # modulus 4
                    cond *= 4
                else:
                    e = 1
                    op = o
                    while op % p == 0:
                        op //= p
                        e += 1
                    cond *= p**e
        return cond

    # -- Galois orbits -------------------------------------------------------

    def galois_orbit(self, chi: DirichletCharacter) -> tuple[DirichletCharacter, ...]:
        """Conjugates chi^k, gcd(k, order) = 1, sorted by index."""
        seen = {}
        for k in range(1, chi.order + 1):
            if gcd(k, chi.order) == 1:
                c = chi**k
                seen[c.index] = c
        return tuple(seen[i] for i in sorted(seen))

    def galois_orbits(self) -> list[tuple[DirichletCharacter, ...]]:
        """All orbits, sorted by (character order, least index)."""
        if self._orbits is None:
            remaining = {c.index: c for c in self.characters()}
            orbits = []
            while remaining:
                some = remaining[min(remaining)]
                orb = self.galois_orbit(some)
                orbits.append(orb)
                for c in orb:
                    remaining.pop(c.index, None)
            orbits.sort(key=lambda orb: (orb[0].order, orb[0].index))
            self._orbits = orbits
        return list(self._orbits)

    def orbit_label(self, chi: DirichletCharacter) -> str:
        """'q.x' with x a letter code; orbits ordered by (order, least index)."""
        for i, orb in enumerate(self.galois_orbits()):
            if any(c.index == chi.index for c in orb):
                return f"{self.modulus}.{cremona_letter_code(i)}"
        raise AssertionError("character not in its own group")


@lru_cache(maxsize=None)
def character_group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def product(chi: DirichletCharacter, psi: DirichletCharacter) -> DirichletCharacter:
    """Pointwise product; both factors must share a modulus."""
    if chi.modulus != psi.modulus:
        raise ValueError(
            f"modulus mismatch: {chi.modulus} vs {psi.modulus}; "
            "induce both to a common modulus first"
        )
    group = character_group(chi.modulus)
    return group.from_exponents(tuple(a + b for a, b in zip(chi.exponents, psi.exponents)))


def induce(chi: DirichletCharacter, modulus: int) -> DirichletCharacter:
    """The character mod `modulus` induced by chi; conductor must divide it."""
    if modulus % chi.conductor:
        raise ValueError(f"conductor {chi.conductor} does not divide {modulus}")
    group = character_group(modulus)
    # compare at points coprime to both moduli so neither side vanishes
    big = lcm(chi.modulus, modulus)
    points = [x for x in range(1, big + 1) if gcd(x, big) == 1]
    for cand in group.characters():
        if cand.conductor != chi.conductor or cand.order != chi.order:
            continue
        if all(chi.value_exponent(x) == cand.value_exponent(x) for x in points):
            return cand
    raise AssertionError("induction target not found")


def primitivize(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character of modulus chi.conductor inducing chi."""
    if chi.conductor == chi.modulus:
        return chi
    group = character_group(chi.conductor)
    q = chi.modulus
    # points coprime to q determine the primitive form: units mod q surject
    # onto units mod the conductor
    points = [x for x in range(1, q + 1) if gcd(x, q) == 1]
    for cand in group.characters():
        if cand.conductor != chi.conductor or cand.order != chi.order:
            continue
        if all(cand.value_exponent(x) == chi.value_exponent(x) for x in points):
            return cand
    raise AssertionError("primitive form not found")


def parse_label(label: str) -> DirichletCharacter:
    """Parse 'q.n' back to a character."""
    try:
        q_str, n_str = label.split(".")
        q, n = int(q_str), int(n_str)
    except ValueError as exc:
        raise ValueError(f"malformed character label {label!r}") from exc
    return character_group(q).from_index(n)


def count_by(group: CharacterGroup, predicate) -> int:
    """Number of characters satisfying the predicate."""
    return sum(1 for c in group.characters() if predicate(c))
