"""Finite groups given by explicit data, their subgroups and one-dimensional characters.

Elements are the integers ``0 .. order-1`` with ``0`` the identity.  Characters
take values in Q/Z: a rational ``q`` in ``[0, 1)`` stands for ``exp(2*pi*i*q)``,
so products of roots of unity become sums of rationals modulo 1.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

DEFAULT_MAX_ORDER = 512


class GroupError(ValueError):
    """Malformed or invalid group data."""


@dataclass(frozen=True, order=True)
class Subgroup:
    """A subgroup of an ambient group, stored as its sorted element list."""

    elements: tuple[int, ...]
    _members: frozenset = field(init=False, repr=False, compare=False)
    _position: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        els = tuple(self.elements)
        if list(els) != sorted(set(els)):
            raise GroupError(f"subgroup elements must be strictly increasing: {els}")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "_members", frozenset(els))
        object.__setattr__(self, "_position", {x: i for i, x in enumerate(els)})

    @classmethod
    def of(cls, elements: Iterable[int]) -> Subgroup:
        return cls(tuple(sorted(set(elements))))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._members

    def issubset(self, other: Subgroup) -> bool:
        return self._members <= other._members

    def position(self, x: int) -> int:
        return self._position[x]


@dataclass(frozen=True)
class Character:
    """A homomorphism from a subgroup to Q/Z, listed in the subgroup's element order."""

    subgroup: Subgroup
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) % 1 for v in self.values)
        if len(vals) != len(self.subgroup):
            raise GroupError("character needs one value per subgroup element")
        object.__setattr__(self, "values", vals)

    def __call__(self, h: int) -> Fraction:
        return self.values[self.subgroup.position(h)]

    @classmethod
    def trivial(cls, H: Subgroup) -> Character:
        return cls(H, (Fraction(0),) * len(H))

    def is_trivial(self) -> bool:
        return not any(self.values)

    def restrict(self, K: Subgroup) -> Character:
        return Character(K, tuple(self(k) for k in K))

    def __add__(self, other: Character) -> Character:
        if self.subgroup != other.subgroup:
            raise GroupError("characters live on different subgroups")
        return Character(self.subgroup, tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> Character:
        return Character(self.subgroup, tuple(-a for a in self.values))


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``table[a][b]`` is the product ``a*b``.  Subgroup and character data are
    computed on first use and cached; the cache fills are idempotent.
    """

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 validate: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(self.table)
        self.labels = tuple(str(s) for s in labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise GroupError("need exactly one label per element")
        if validate:
            _validate_table(self.table)
        self._inverse = tuple(row.index(0) for row in self.table)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def __eq__(self, other):
        return self is other or (isinstance(other, FiniteGroup) and self.table == other.table)

    def __hash__(self):
        return hash(self.table)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = self.table[out][a]
        return out

    def conj(self, g: int, h: int) -> int:
        """g h g^-1"""
        return self.table[self.table[g][h]][self._inverse[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(tuple(range(self.order)))

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup((0,))

    def generate(self, gens: Iterable[int]) -> Subgroup:
        gens = [g for g in set(gens) if g != 0]
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup.of(seen)

    def is_subgroup(self, elements: Iterable[int]) -> bool:
        s = set(elements)
        if 0 not in s:
            return False
        return all(self.table[a][self._inverse[b]] in s for a in s for b in s)

    def conjugate_subgroup(self, g: int, H: Subgroup) -> Subgroup:
        return Subgroup.of(self.conj(g, h) for h in H)

    # -- subgroups ---------------------------------------------------------

    @cached_property
    def subgroups(self) -> tuple[Subgroup, ...]:
        """All subgroups: cyclic ones, closed under pairwise joins until nothing new appears."""
        found = {self.generate([a]) for a in range(self.order)}
        frontier = set(found)
        while frontier:
            new = set()
            for H in frontier:
                for K in found:
                    J = self.generate(H.elements + K.elements)
                    if J not in found and J not in new:
                        new.add(J)
            found |= new
            frontier = new
        return tuple(sorted(found, key=lambda H: (H.order, H.elements)))

    @cached_property
    def subgroup_classes(self) -> tuple[tuple[Subgroup, tuple[Subgroup, ...]], ...]:
        remaining = set(self.subgroups)
        classes = []
        for H in self.subgroups:
            if H not in remaining:
                continue
            members = sorted({self.conjugate_subgroup(g, H) for g in range(self.order)})
            remaining.difference_update(members)
            classes.append((members[0], tuple(members)))
        classes.sort(key=lambda c: (c[0].order, c[0].elements))
        return tuple(classes)

    @cached_property
    def _class_index(self) -> dict[Subgroup, int]:
        return {K: i for i, (_, members) in enumerate(self.subgroup_classes) for K in members}

    def subgroup_class_index(self, H: Subgroup) -> int:
        """Position of H's conjugacy class in ``subgroup_classes``."""
        try:
            return self._class_index[H]
        except KeyError:
            raise GroupError(f"not a subgroup: {H.elements}") from None

    def class_representative(self, index: int) -> Subgroup:
        return self.subgroup_classes[index][0]

    def normalizer(self, H: Subgroup) -> Subgroup:
        return Subgroup.of(g for g in range(self.order) if self.conjugate_subgroup(g, H) == H)

    # -- characters --------------------------------------------------------

    def characters(self, H: Subgroup) -> tuple[Character, ...]:
        cache = self.__dict__.setdefault("_char_cache", {})
        if H not in cache:
            cache[H] = _enumerate_characters(self, H)
        return cache[H]

    def character_index(self, alpha: Character) -> int:
        return self.characters(alpha.subgroup).index(alpha)

    def conjugate_character(self, a: int, alpha: Character) -> Character:
        """The character b -> alpha(a^-1 b a) on a H a^-1."""
        aH = self.conjugate_subgroup(a, alpha.subgroup)
        ainv = self.inv(a)
        return Character(aH, tuple(alpha(self.conj(ainv, b)) for b in aH))

    def canonical_pair(self, H: Subgroup, alpha: Character) -> tuple[Subgroup, Character]:
        best = None
        for g in range(self.order):
            beta = self.conjugate_character(g, alpha)
            key = (beta.subgroup.elements, beta.values)
            if best is None or key < best[0]:
                best = (key, beta)
        beta = best[1]
        return beta.subgroup, beta


def _validate_table(table):
    n = len(table)
    if n == 0:
        raise GroupError("empty multiplication table")
    for i, row in enumerate(table):
        if len(row) != n:
            raise GroupError(f"row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise GroupError(f"table entry {x} out of range 0..{n - 1}")
    for a in range(n):
        if table[0][a] != a or table[a][0] != a:
            raise GroupError(f"element 0 is not a two-sided identity (fails at {a})")
    for a in range(n):
        if not any(table[a][b] == 0 and table[b][a] == 0 for b in range(n)):
            raise GroupError(f"no inverse for element {a}")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise GroupError(f"not associative: ({a}*{b})*{c} != {a}*({b}*{c})")


def _enumerate_characters(G: FiniteGroup, H: Subgroup) -> tuple[Character, ...]:
    # Greedy generating set, then try every assignment of generator values and
    # keep the ones that extend to a homomorphism.
    gens: list[int] = []
    span = G.trivial
    for h in H:
        if h not in span:
            gens.append(h)
            span = G.generate(gens)
    orders = [G.element_order(g) for g in gens]
    chars = []
    for ks in itertools.product(*(range(o) for o in orders)):
        gen_val = {g: Fraction(k, o) for g, k, o in zip(gens, ks, orders)}
        val = {0: Fraction(0)}
        queue = deque([0])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for g in gens:
                y = G.mul(x, g)
                v = (val[x] + gen_val[g]) % 1
                if y not in val:
                    val[y] = v
                    queue.append(y)
                elif val[y] != v:
                    ok = False
                    break
        if ok and all((val[a] + val[b]) % 1 == val[G.mul(a, b)] for a in H for b in H):
            chars.append(Character(H, tuple(val[h] for h in H)))
    chars.sort(key=lambda c: c.values)
    return tuple(chars)


# -- loading -----------------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_permutation(gen, degree: int) -> tuple[int, ...]:
    if isinstance(gen, str):
        img = list(range(degree))
        for cyc in _CYCLE.findall(gen):
            pts = [int(p) for p in cyc.replace(",", " ").split()]
            for i, p in enumerate(pts):
                img[p] = pts[(i + 1) % len(pts)]
        return tuple(img)
    if gen and isinstance(gen[0], (list, tuple)):
        return _parse_permutation("".join("(" + " ".join(map(str, c)) + ")" for c in gen), degree)
    img = tuple(int(x) for x in gen)
    if sorted(img) != list(range(degree)):
        raise GroupError(f"not a permutation of 0..{degree - 1}: {gen}")
    return img


def _cycle_string(perm: Sequence[int]) -> str:
    seen, parts = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def group_from_permutations(generators: Sequence, degree: int,
                            max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Closure of permutation generators, numbered breadth-first from the identity.

    The product ``a*b`` is the composite ``x -> a(b(x))``.
    """
    gens = [_parse_permutation(g, degree) for g in generators]
    identity = tuple(range(degree))
    perms = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = tuple(p[g[x]] for x in range(degree))
            if q not in index:
                if len(perms) >= max_order:
                    raise GroupError(f"closure exceeds the size limit {max_order}")
                index[q] = len(perms)
                perms.append(q)
                queue.append(q)
    table = [[index[tuple(a[b[x]] for x in range(degree))] for b in perms] for a in perms]
    return FiniteGroup(table, [_cycle_string(p) for p in perms], validate=False)


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with element k the k-th power of the generator."""
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)],
                       [f"g^{k}" if k > 1 else ("g" if k == 1 else "e") for k in range(n)])


def load_group(spec: dict, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build a group from ``{"table": ...}`` or ``{"permutation_generators": ..., "degree": d}``."""
    if not isinstance(spec, dict):
        raise GroupError("group description must be a JSON object")
    if "table" in spec:
        table = spec["table"]
        if "order" in spec and spec["order"] != len(table):
            raise GroupError(f"declared order {spec['order']} != table size {len(table)}")
        if len(table) > max_order:
            raise GroupError(f"group order {len(table)} exceeds the size limit {max_order}")
        return FiniteGroup(table, spec.get("labels"))
    if "permutation_generators" in spec:
        gens = spec["permutation_generators"]
        degree = spec.get("degree")
        if degree is None:
            degree = max((len(g) for g in gens if not isinstance(g, str)), default=0)
        return group_from_permutations(gens, int(degree), max_order)
    if "cyclic" in spec:
        return cyclic_group(int(spec["cyclic"]))
    raise GroupError("group description needs 'table', 'permutation_generators' or 'cyclic'")


# -- module-level API ----------------------------------------------------------

def subgroup_conjugacy_classes(G: FiniteGroup):
    """(representative, members) pairs sorted by (order, representative elements)."""
    return G.subgroup_classes


def one_dim_characters(G: FiniteGroup, H: Subgroup) -> tuple[Character, ...]:
    return G.characters(H)


def conjugate_character(G: FiniteGroup, a: int, alpha: Character) -> Character:
    return G.conjugate_character(a, alpha)


def kernel(alpha: Character) -> Subgroup:
    return Subgroup(tuple(h for h, v in zip(alpha.subgroup, alpha.values) if v == 0))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    return G.normalizer(H)


def is_conjugate_subgroup(G: FiniteGroup, H: Subgroup, K: Subgroup) -> bool:
    return any(G.conjugate_subgroup(g, H) == K for g in range(G.order))


def canonical_pair(G: FiniteGroup, H: Subgroup, alpha: Character) -> tuple[Subgroup, Character]:
    if alpha.subgroup != H:
        raise GroupError("character is not defined on the given subgroup")
    return G.canonical_pair(H, alpha)
