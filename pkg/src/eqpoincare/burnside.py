"""Equipped G-sets and the modified Burnside ring Ã(G).

An equipped G-set is a finite G-set with a one-dimensional character attached
to the isotropy subgroup of every point, compatibly with conjugation.  The
Grothendieck ring of such sets is free on the classes ``[G/H]_alpha`` with H
running over conjugacy classes of subgroups and alpha over characters of H up
to the normalizer action.

Besides Ã(G) this module holds the ordinary Burnside ring A(G) (optionally with
rational coefficients), the ring R1(G) spanned by the characters of G, and the
three reductions rho, rhohat and eps between them.
"""
from __future__ import annotations

import itertools
import re
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .group_core import Character, FiniteGroup, Subgroup


class EquippedSetError(ValueError):
    """An equipped G-set violates the action or compatibility laws."""


class RingMismatchError(ValueError):
    """Elements of rings over different groups were combined."""


class ParseError(ValueError):
    """A ring element or class name could not be parsed."""


# -- equipped G-sets ------------------------------------------------------------


class EquippedGSet:
    """A finite G-set ``0..n-1`` with a character on each point's isotropy subgroup.

    ``action[g][x]`` is the image of point x under g; ``chars[x]`` is a
    :class:`Character` on the isotropy subgroup of x.
    """

    def __init__(self, group: FiniteGroup, action: Sequence[Sequence[int]],
                 chars: Sequence[Character], validate: bool = True):
        self.group = group
        self.action = tuple(tuple(row) for row in action)
        self.chars = tuple(chars)
        if validate:
            self.validate()

    @property
    def size(self) -> int:
        return len(self.chars)

    def __len__(self):
        return len(self.chars)

    def __repr__(self):
        return f"EquippedGSet(size={self.size}, group_order={self.group.order})"

    def isotropy(self, x: int) -> Subgroup:
        return Subgroup(tuple(g for g in range(self.group.order) if self.action[g][x] == x))

    def validate(self):
        G, n = self.group, self.size
        if len(self.action) != G.order:
            raise EquippedSetError("action needs one row per group element")
        for g, row in enumerate(self.action):
            if sorted(row) != list(range(n)):
                raise EquippedSetError(f"element {g} does not act by a permutation")
        if any(self.action[0][x] != x for x in range(n)):
            raise EquippedSetError("identity does not act trivially")
        for a, b in itertools.product(range(G.order), repeat=2):
            ab, ra, rb = self.action[G.mul(a, b)], self.action[a], self.action[b]
            for x in range(n):
                if ab[x] != ra[rb[x]]:
                    raise EquippedSetError(f"not an action: ({a}*{b}).{x} != {a}.({b}.{x})")
        for x in range(n):
            if self.chars[x].subgroup != self.isotropy(x):
                raise EquippedSetError(f"character at point {x} is not defined on its isotropy subgroup")
        for a in range(G.order):
            ainv = G.inv(a)
            for x in range(n):
                y = self.action[a][x]
                for b in self.chars[y].subgroup:
                    if self.chars[y](b) != self.chars[x](G.conj(ainv, b)):
                        raise EquippedSetError(
                            f"compatibility fails for element {a} and point {x} (at b={b})")

    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for x in range(self.size):
            if x in seen:
                continue
            orb = sorted({row[x] for row in self.action})
            seen.update(orb)
            out.append(orb)
        return out

    def disjoint_union(self, other: EquippedGSet) -> EquippedGSet:
        _same_group(self.group, other.group)
        n = self.size
        action = [row + tuple(n + y for y in orow) for row, orow in zip(self.action, other.action)]
        return EquippedGSet(self.group, action, self.chars + other.chars, validate=False)

    def product(self, other: EquippedGSet) -> EquippedGSet:
        """Cartesian product with diagonal action; characters add on the common isotropy."""
        _same_group(self.group, other.group)
        n, m = self.size, other.size
        action = [tuple(row[i] * m + orow[j] for i in range(n) for j in range(m))
                  for row, orow in zip(self.action, other.action)]
        chars = []
        for i in range(n):
            for j in range(m):
                a, b = self.chars[i], other.chars[j]
                K = Subgroup(tuple(h for h in a.subgroup if h in b.subgroup))
                chars.append(Character(K, tuple(a(h) + b(h) for h in K)))
        return EquippedGSet(self.group, action, chars, validate=False)

    def relabel(self, perm: Sequence[int]) -> EquippedGSet:
        """The isomorphic set whose point perm[x] plays the role of x."""
        n = self.size
        inv = [0] * n
        for x, px in enumerate(perm):
            inv[px] = x
        action = [tuple(perm[row[inv[y]]] for y in range(n)) for row in self.action]
        chars = [self.chars[inv[y]] for y in range(n)]
        return EquippedGSet(self.group, action, chars, validate=False)


def _same_group(G: FiniteGroup, H: FiniteGroup):
    if G is not H and G != H:
        raise RingMismatchError("objects live over different groups")


def _cycle_character(G: FiniteGroup, X: EquippedGSet, points: Sequence[int],
                     mult: Sequence[int], K: Subgroup) -> Character:
    """Character on K of the multiset sum(mult[i] * points[i]); K must preserve it.

    Each cycle (y_1 ... y_l) of a in K on the distinct points contributes
    mult * alpha_{y_1}(a^l).
    """
    vals = []
    for a in K:
        row = X.action[a]
        seen = set()
        v = Fraction(0)
        for y, mu in zip(points, mult):
            if y in seen:
                continue
            length, z = 0, y
            while True:
                seen.add(z)
                z = row[z]
                length += 1
                if z == y:
                    break
            v += mu * X.chars[y](G.power(a, length))
        vals.append(v)
    return Character(K, tuple(vals))


def _coset_space(G: FiniteGroup, H: Subgroup):
    """Left cosets gH: (representatives, coset index of each element, action table)."""
    coset_of = [-1] * G.order
    reps = []
    for g in range(G.order):
        if coset_of[g] >= 0:
            continue
        for h in H:
            coset_of[G.mul(g, h)] = len(reps)
        reps.append(g)
    action = tuple(tuple(coset_of[G.mul(a, r)] for r in reps) for a in range(G.order))
    return reps, coset_of, action


def subgroup_name(G: FiniteGroup, index: int) -> str:
    order = G.class_representative(index).order
    if order == G.order:
        return "G"
    if order == 1:
        return "e"
    return f"H{index}"


def parse_subgroup_name(G: FiniteGroup, name: str) -> int:
    if name == "G":
        return len(G.subgroup_classes) - 1
    if name == "e":
        return 0
    m = re.fullmatch(r"H(\d+)", name)
    if not m or int(m.group(1)) >= len(G.subgroup_classes):
        raise ParseError(f"unknown subgroup name {name!r}")
    return int(m.group(1))


# -- ring elements ----------------------------------------------------------------


class RingElement:
    """Integer (or rational) combination of basis keys of some ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=None):
        self.ring = ring
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if type(other) is not type(self) or not self.ring.compatible(other.ring):
                raise RingMismatchError(f"cannot combine {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return type(self)(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self)(self.ring, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.ring.multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, RingElement) or type(other) is not type(self):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        return self.ring.render(self)

    def __repr__(self):
        return f"{type(self).__name__}({self.ring.render(self)!r})"

    def coefficient(self, key):
        return self.terms.get(key, 0)


class TBElement(RingElement):
    """Element of the modified Burnside ring Ã(G); keys are :class:`TBClass`."""
    __slots__ = ()


class BurnsideElement(RingElement):
    """Element of A(G) (or A(G)⊗Q); keys are subgroup conjugacy-class indices."""
    __slots__ = ()


class R1Element(RingElement):
    """Element of R1(G); keys are indices into the character list of G."""
    __slots__ = ()


class _BasisRing:
    tag = ""
    element_class = RingElement

    def __init__(self, group: FiniteGroup):
        self.group = group
        self._products: dict = {}

    def __repr__(self):
        return f"{type(self).__name__}(order={self.group.order})"

    def compatible(self, other) -> bool:
        return type(other) is type(self) and (other is self or other.group == self.group)

    def element(self, terms=None):
        return self.element_class(self, terms)

    @property
    def zero(self):
        return self.element()

    @property
    def one(self):
        return self.element({self.unit_key: 1})

    def scalar(self, c):
        return self.element({self.unit_key: c})

    def basis(self, key):
        return self.element({key: 1})

    def multiply(self, a, b):
        terms: dict = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                prod = self._products.get((k1, k2))
                if prod is None:
                    prod = self._basis_product(k1, k2)
                    self._products[(k1, k2)] = self._products[(k2, k1)] = prod
                c = c1 * c2
                for k, m in prod.items():
                    terms[k] = terms.get(k, 0) + c * m
        return self.element(terms)

    def render(self, x) -> str:
        parts = []
        for key in sorted(x.terms, key=lambda k: (k != self.unit_key, k)):
            c, name = x.terms[key], self.key_name(key)
            if name == "1":
                s = str(c)
            elif c == 1:
                s = name
            elif c == -1:
                s = "-" + name
            else:
                s = f"{c}*{name}"
            if parts:
                parts.append(" - " + s[1:] if s.startswith("-") else " + " + s)
            else:
                parts.append(s)
        return "".join(parts) or "0"

    def parse(self, text: str):
        return _parse_combination(self, text)


class TBRing(_BasisRing):
    """The modified Burnside ring Ã(G).

    Products are computed by realizing both classes as concrete equipped
    G-sets and decomposing the cartesian product into orbits.  Symmetric powers
    go through the mark homomorphism (see :meth:`marks`), which is exact and
    avoids listing every multiset.
    """

    tag = "tb"
    element_class = TBElement

    def __init__(self, group: FiniteGroup):
        super().__init__(group)
        G = group
        classes = []
        for si, (H, _) in enumerate(G.subgroup_classes):
            N = G.normalizer(H)
            for ci, alpha in enumerate(G.characters(H)):
                orbit_min = min(G.conjugate_character(n, alpha).values for n in N)
                if orbit_min == alpha.values:
                    classes.append(TBClass(si, ci, H, alpha, self))
        self.classes: tuple[TBClass, ...] = tuple(classes)
        self._by_index = {(c.subgroup_index, c.char_index): c for c in classes}
        self.unit_key = self._by_index[(len(G.subgroup_classes) - 1, 0)]
        self._canon: dict = {}
        self._realized: dict = {}
        self._class_marks: dict = {}
        self._sympow: dict = {}
        self._char_tables: dict = {}

    # classes

    def cls(self, H: Subgroup, alpha: Character | None = None) -> TBClass:
        """The canonical class of [G/H]_alpha (trivial alpha when omitted)."""
        if alpha is None:
            alpha = Character.trivial(H)
        key = (H.elements, alpha.values)
        c = self._canon.get(key)
        if c is None:
            K, beta = self.group.canonical_pair(H, alpha)
            si = self.group.subgroup_class_index(K)
            c = self._by_index[(si, self.group.character_index(beta))]
            self._canon[key] = c
        return c

    def class_by_index(self, subgroup_index: int, char_index: int = 0) -> TBClass:
        H = self.group.class_representative(subgroup_index)
        return self.cls(H, self.group.characters(H)[char_index])

    def key_name(self, c: TBClass) -> str:
        if c == self.unit_key:
            return "1"
        name = f"[G/{subgroup_name(self.group, c.subgroup_index)}]"
        return name + (f"_{{a{c.char_index}}}" if c.char_index else "")

    def parse_name(self, name: str) -> TBClass:
        m = re.fullmatch(r"\[G/(\w+)\](?:_\{?a(\d+)\}?)?", name)
        if not m:
            raise ParseError(f"cannot parse class {name!r}")
        si = parse_subgroup_name(self.group, m.group(1))
        ci = int(m.group(2) or 0)
        H = self.group.class_representative(si)
        chars = self.group.characters(H)
        if ci >= len(chars):
            raise ParseError(f"character index {ci} out of range for {name!r}")
        return self.cls(H, chars[ci])

    def realize(self, c: TBClass) -> EquippedGSet:
        """[G/H]_alpha as the equipped set of left cosets of H."""
        X = self._realized.get(c)
        if X is None:
            G = self.group
            reps, _, action = _coset_space(G, c.subgroup)
            chars = [G.conjugate_character(g, c.character) for g in reps]
            X = EquippedGSet(G, action, chars, validate=False)
            self._realized[c] = X
        return X

    def _basis_product(self, c1: TBClass, c2: TBClass) -> dict:
        return orbit_decompose(self.realize(c1).product(self.realize(c2))).terms

    # marks

    def _char_table(self, j: int):
        """For the j-th subgroup class representative K: a generating set of K,
        the index of each character by its values on those generators, and the
        addition table of characters."""
        t = self._char_tables.get(j)
        if t is None:
            G = self.group
            K = G.class_representative(j)
            gens: list[int] = []
            for k in K:
                if k not in G.generate(gens):
                    gens.append(k)
            chars = G.characters(K)
            index = {c.values: i for i, c in enumerate(chars)}
            by_gens = {tuple(c(g) for g in gens): i for i, c in enumerate(chars)}
            add = [[index[(a + b).values] for b in chars] for a in chars]
            t = self._char_tables[j] = (index, add, gens, by_gens)
        return t

    def _orbit_character(self, X: EquippedGSet, orbit: Sequence[int], j: int) -> int:
        """Index of the cycle character of a K-orbit, evaluated on generators of K."""
        G = self.group
        _, _, gens, by_gens = self._char_table(j)
        vals = []
        for a in gens:
            row = X.action[a]
            seen = set()
            v = Fraction(0)
            for y in orbit:
                if y in seen:
                    continue
                length, z = 0, y
                while True:
                    seen.add(z)
                    z = row[z]
                    length += 1
                    if z == y:
                        break
                v += X.chars[y](G.power(a, length))
            vals.append(v % 1)
        return by_gens[tuple(vals)]

    def marks(self, X: EquippedGSet) -> list[list[int]]:
        """For each subgroup class rep K: the K-fixed points counted per character of K.

        Characters are indexed as in ``group.characters(K)``.  This is a ring
        homomorphism from Ã(G) into a product of group rings Z[Hom(K, Q/Z)],
        and it is injective; :meth:`from_marks` inverts it.
        """
        out = []
        for j, (K, _) in enumerate(self.group.subgroup_classes):
            index = self._char_table(j)[0]
            cnt = [0] * len(index)
            for x in range(X.size):
                if all(X.action[k][x] == x for k in K):
                    cnt[index[X.chars[x].restrict(K).values]] += 1
            out.append(cnt)
        return out

    def _marks_of_class(self, c: TBClass) -> list[list[int]]:
        m = self._class_marks.get(c)
        if m is None:
            m = self._class_marks[c] = self.marks(self.realize(c))
        return m

    def from_marks(self, marks: Sequence[Sequence[int]]) -> TBElement:
        residual = [list(m) for m in marks]
        terms = {}
        by_subgroup: dict[int, list[TBClass]] = {}
        for c in self.classes:
            by_subgroup.setdefault(c.subgroup_index, []).append(c)
        for si in reversed(range(len(residual))):
            for c in by_subgroup.get(si, ()):
                v = residual[si][c.char_index]
                if not v:
                    continue
                cm = self._marks_of_class(c)
                d = cm[si][c.char_index]
                if v % d:
                    raise ArithmeticError("marks are not in the image of the ring")
                coef = v // d
                terms[c] = coef
                for j, cnt in enumerate(cm):
                    row = residual[j]
                    for i, n in enumerate(cnt):
                        if n:
                            row[i] -= coef * n
        if any(v for row in residual for v in row):
            raise ArithmeticError("marks are not in the image of the ring")
        return self.element(terms)

    def _sympow_marks(self, X: EquippedGSet, kmax: int) -> list[list[list[int]]]:
        """Marks of S^k X for k = 0..kmax.

        A multiset fixed by K is a sum of K-orbits with multiplicities, so per K
        the generating series is the product over K-orbits O of
        sum_mu e(mu * c_O) t^(mu |O|), where c_O is the cycle character of O.
        """
        G = self.group
        per_k = [[None] * len(G.subgroup_classes) for _ in range(kmax + 1)]
        for j, (K, _) in enumerate(G.subgroup_classes):
            index, add = self._char_table(j)[:2]
            m = len(index)
            poly = [[0] * m for _ in range(kmax + 1)]
            poly[0][0] = 1
            seen = set()
            for x in range(X.size):
                if x in seen:
                    continue
                orbit = sorted({X.action[k][x] for k in K})
                seen.update(orbit)
                c = self._orbit_character(X, orbit, j)
                size = len(orbit)
                new = [[0] * m for _ in range(kmax + 1)]
                for deg, row in enumerate(poly):
                    if not any(row):
                        continue
                    shift, d = 0, deg
                    while d <= kmax:
                        target = new[d]
                        for i, n in enumerate(row):
                            if n:
                                target[add[i][shift]] += n
                        shift = add[shift][c]
                        d += size
                poly = new
            for k in range(kmax + 1):
                per_k[k][j] = poly[k]
        return per_k

    def symmetric_powers(self, x, kmax: int) -> list[TBElement]:
        """[S^0 x, ..., S^kmax x] for a class or an equipped G-set."""
        if isinstance(x, TBClass):
            cached = self._sympow.get(x)
            if cached is None or len(cached) <= kmax:
                cached = [self.from_marks(m) for m in self._sympow_marks(self.realize(x), kmax)]
                self._sympow[x] = cached
            return cached[:kmax + 1]
        _same_group(self.group, x.group)
        return [self.from_marks(m) for m in self._sympow_marks(x, kmax)]

    def legend(self) -> list[str]:
        return legend(self.group)


@dataclass(frozen=True, order=True)
class TBClass:
    """Canonical class [G/H]_alpha, ordered by (subgroup class index, character index)."""

    subgroup_index: int
    char_index: int
    subgroup: Subgroup = field(compare=False, repr=False)
    character: Character = field(compare=False, repr=False)
    ring: "TBRing" = field(compare=False, repr=False, default=None)

    def __str__(self):
        return self.ring.key_name(self) if self.ring else repr(self)


class BurnsideRing(_BasisRing):
    """A(G), or A(G)⊗Q when rational coefficients are used.

    Products count orbits of G on products of coset spaces.
    """

    tag = "burnside"
    element_class = BurnsideElement

    def __init__(self, group: FiniteGroup):
        super().__init__(group)
        self.unit_key = len(group.subgroup_classes) - 1
        self._spaces = {}

    def key_name(self, key: int) -> str:
        if key == self.unit_key:
            return "1"
        return f"[G/{subgroup_name(self.group, key)}]"

    def parse_name(self, name: str) -> int:
        m = re.fullmatch(r"\[G/(\w+)\]", name)
        if not m:
            raise ParseError(f"cannot parse Burnside class {name!r}")
        return parse_subgroup_name(self.group, m.group(1))

    def _space(self, key):
        if key not in self._spaces:
            self._spaces[key] = _coset_space(self.group, self.group.class_representative(key))[2]
        return self._spaces[key]

    def _basis_product(self, k1: int, k2: int) -> dict:
        G = self.group
        A, B = self._space(k1), self._space(k2)
        n, m = len(A[0]), len(B[0])
        seen = set()
        out: dict = {}
        for x in range(n):
            for y in range(m):
                if (x, y) in seen:
                    continue
                seen.update((A[a][x], B[a][y]) for a in range(G.order))
                stab = Subgroup(tuple(a for a in range(G.order) if A[a][x] == x and B[a][y] == y))
                k = G.subgroup_class_index(stab)
                out[k] = out.get(k, 0) + 1
        return out


class R1Ring(_BasisRing):
    """The ring spanned by the one-dimensional characters of G (group ring of G^)."""

    tag = "r1"
    element_class = R1Element

    def __init__(self, group: FiniteGroup):
        super().__init__(group)
        self.unit_key = 0
        self.characters = group.characters(group.whole)
        self._index = {c.values: i for i, c in enumerate(self.characters)}

    def key_name(self, key: int) -> str:
        return "1" if key == 0 else f"a{key}"

    def parse_name(self, name: str) -> int:
        m = re.fullmatch(r"a(\d+)", name)
        if not m or int(m.group(1)) >= len(self.characters):
            raise ParseError(f"cannot parse character {name!r}")
        return int(m.group(1))

    def key_of(self, alpha: Character) -> int:
        return self._index[alpha.values]

    def _basis_product(self, k1: int, k2: int) -> dict:
        s = self.characters[k1] + self.characters[k2]
        return {self._index[s.values]: 1}


class IntegerRing:
    """Z as a coefficient ring; elements are plain ints."""

    tag = "z"
    zero = 0
    one = 1

    def __repr__(self):
        return "IntegerRing()"

    def compatible(self, other) -> bool:
        return isinstance(other, IntegerRing)

    def scalar(self, c):
        return c

    def render(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        v = Fraction(text.replace(" ", ""))
        if v.denominator != 1:
            raise ParseError(f"not an integer: {text!r}")
        return int(v)


ZZ = IntegerRing()

_RING_LOCK = threading.Lock()


def _ring_for(G: FiniteGroup, cls, attr: str):
    ring = G.__dict__.get(attr)
    if ring is None:
        with _RING_LOCK:
            ring = G.__dict__.get(attr)
            if ring is None:
                ring = cls(G)
                G.__dict__[attr] = ring
    return ring


def tb_ring(G: FiniteGroup) -> TBRing:
    return _ring_for(G, TBRing, "_tb_ring")


def burnside_ring(G: FiniteGroup) -> BurnsideRing:
    return _ring_for(G, BurnsideRing, "_burnside_ring")


def r1_ring(G: FiniteGroup) -> R1Ring:
    return _ring_for(G, R1Ring, "_r1_ring")


def legend(G: FiniteGroup) -> list[str]:
    """Human-readable key for subgroup and character names used in renderings."""
    lines = []
    for si, (H, members) in enumerate(G.subgroup_classes):
        els = ", ".join(G.labels[h] for h in H)
        lines.append(f"{subgroup_name(G, si)}: order {H.order}, {len(members)} conjugate(s), rep {{{els}}}")
        for ci, alpha in enumerate(G.characters(H)):
            if ci:
                vals = ", ".join(f"{G.labels[h]}->{v}" for h, v in zip(H, alpha.values) if v)
                lines.append(f"  a{ci}: {vals}")
    return lines


_TERM = re.compile(r"^(\d+(?:/\d+)?)?\s*\*?\s*(.*)$")


def _split_terms(text: str) -> list[tuple[int, str]]:
    terms, depth, cur, sign = [], 0, "", 1
    for ch in text:
        if ch in "[{(":
            depth += 1
        elif ch in "]})":
            depth -= 1
        if depth == 0 and ch in "+-":
            if cur.strip():
                terms.append((sign, cur.strip()))
                sign = 1
            sign *= -1 if ch == "-" else 1
            cur = ""
            continue
        cur += ch
    if cur.strip():
        terms.append((sign, cur.strip()))
    return terms


def _parse_combination(ring, text: str):
    text = text.strip()
    if not text:
        raise ParseError("empty ring element")
    terms = _split_terms(text)
    if not terms:
        raise ParseError(f"cannot parse ring element {text!r}")
    out = ring.zero
    for sign, term in terms:
        m = _TERM.match(term)
        coef = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        if coef.denominator == 1:
            coef = int(coef)
        name = m.group(2).strip()
        if not name or name == "1":
            if not m.group(1) and name != "1":
                raise ParseError(f"cannot parse term {term!r}")
            out = out + ring.scalar(sign * coef)
        else:
            out = out + ring.basis(ring.parse_name(name)) * (sign * coef)
    return out


# -- operations -------------------------------------------------------------------


def orbit_decompose(X: EquippedGSet) -> TBElement:
    """Class of an equipped G-set: one canonical [G/G_x]_{alpha_x} per orbit."""
    ring = tb_ring(X.group)
    terms: dict = {}
    for orb in X.orbits():
        x = orb[0]
        c = ring.cls(X.chars[x].subgroup, X.chars[x])
        terms[c] = terms.get(c, 0) + 1
    return ring.element(terms)


def tb_mul(a: TBElement, b: TBElement) -> TBElement:
    return a * b


def symmetric_power(x, k: int) -> TBElement:
    """k-th symmetric power of a class or equipped G-set, as an element of Ã(G)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(x, TBElement):
        if len(x.terms) == 1:
            (c, n), = x.terms.items()
            if n == 1:
                return x.ring.symmetric_powers(c, k)[k]
        raise ValueError("symmetric powers are defined here for classes and equipped sets only")
    if isinstance(x, TBClass):
        return x.ring.symmetric_powers(x, k)[k]
    return tb_ring(x.group).symmetric_powers(x, k)[k]


def symmetric_power_set(X: EquippedGSet, k: int) -> EquippedGSet:
    """S^k X realized concretely: size-k multisets with the induced action and characters."""
    G = X.group
    points = list(itertools.combinations_with_replacement(range(X.size), k))
    index = {p: i for i, p in enumerate(points)}
    action = [tuple(index[tuple(sorted(row[x] for x in p))] for p in points) for row in X.action]
    chars = []
    for i, p in enumerate(points):
        stab = Subgroup(tuple(g for g in range(G.order) if action[g][i] == i))
        counts = Counter(p)
        distinct = sorted(counts)
        chars.append(_cycle_character(G, X, distinct, [counts[y] for y in distinct], stab))
    return EquippedGSet(G, action, chars, validate=False)


def rho(a: TBElement) -> BurnsideElement:
    """Forget the characters."""
    ring = burnside_ring(a.ring.group)
    terms: dict = {}
    for c, n in a.terms.items():
        terms[c.subgroup_index] = terms.get(c.subgroup_index, 0) + n
    return ring.element(terms)


def rhohat(a: TBElement) -> int:
    """Forget characters and action: the number of points."""
    order = a.ring.group.order
    return sum(n * (order // c.subgroup.order) for c, n in a.terms.items())


def eps(a: TBElement) -> R1Element:
    """Keep only the G-fixed points, as characters of G."""
    G = a.ring.group
    ring = r1_ring(G)
    terms: dict = {}
    for c, n in a.terms.items():
        if c.subgroup.order == G.order:
            k = ring.key_of(c.character)
            terms[k] = terms.get(k, 0) + n
    return ring.element(terms)


def binomial_count(n: int, k: int) -> int:
    """Number of size-k multisets from n points."""
    if k == 0:
        return 1
    return comb(n + k - 1, k) if n else 0
