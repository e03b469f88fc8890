import itertools
from collections import Counter

import pytest

from conftest import group
from eqpoincare.burnside import (EquippedGSet, EquippedSetError, ParseError, RingMismatchError,
                                 binomial_count, burnside_ring, eps, orbit_decompose, r1_ring, rho, rhohat,
                                 symmetric_power, symmetric_power_set, tb_ring)
from eqpoincare.group_core import Character, cyclic_group

SMALL = ["trivial", "z2", "z3", "z4", "klein4", "s3", "z6", "d4", "q8"]


def brute_marks(ring, a):
    """For each subgroup K: multiset of restricted characters at K-fixed points."""
    G = ring.group
    out = {}
    for K in G.subgroups:
        cnt = Counter()
        for c, n in a.terms.items():
            X = ring.realize(c)
            for x in range(X.size):
                if all(X.action[k][x] == x for k in K):
                    cnt[tuple(X.chars[x](k) for k in K)] += n
        out[K] = cnt
    return out


def convolve(ma, mb):
    out = {}
    for K in ma:
        cnt = Counter()
        for va, na in ma[K].items():
            for vb, nb in mb[K].items():
                cnt[tuple((x + y) % 1 for x, y in zip(va, vb))] += na * nb
        out[K] = +cnt
    return out


def test_free_orbit_absorbs_sigma():
    R = tb_ring(cyclic_group(2))
    assert R.parse("[G/G]_{a1}") * R.parse("[G/e]") == R.parse("[G/e]")
    assert R.parse("[G/G]_{a1}") * R.parse("[G/G]_{a1}") == R.one
    assert R.parse("[G/e]") * R.parse("[G/e]") == R.parse("2*[G/e]")


@pytest.mark.parametrize("name", ["z2", "z4", "s3", "klein4", "d4", "q8", "a4"])
def test_products_agree_with_character_marks(name):
    R = tb_ring(group(name))
    marks = {c: brute_marks(R, R.basis(c)) for c in R.classes}
    for c1, c2 in itertools.combinations_with_replacement(R.classes, 2):
        prod = R.basis(c1) * R.basis(c2)
        assert all(n > 0 for n in prod.terms.values())
        assert brute_marks(R, prod) == convolve(marks[c1], marks[c2])


@pytest.mark.parametrize("name", ["s3", "d4", "a4"])
def test_burnside_products_agree_with_table_of_marks(name):
    G = group(name)
    B = burnside_ring(G)

    def mark(key, K):
        H = G.class_representative(key)
        cosets = {frozenset(G.mul(g, h) for h in H) for g in range(G.order)}
        return sum(all(frozenset(G.mul(k, x) for x in c) == c for k in K) for c in cosets)

    keys = range(len(G.subgroup_classes))
    for k1, k2 in itertools.product(keys, repeat=2):
        prod = B.basis(k1) * B.basis(k2)
        for K in G.subgroups:
            assert sum(n * mark(k, K) for k, n in prod.terms.items()) == mark(k1, K) * mark(k2, K)


@pytest.mark.parametrize("name", SMALL)
def test_symmetric_powers_match_concrete_multisets(name):
    R = tb_ring(group(name))
    for c in R.classes:
        X = R.realize(c)
        for k in range(4):
            if binomial_count(X.size, k) > 200:
                continue
            assert orbit_decompose(symmetric_power_set(X, k)) == symmetric_power(c, k), (str(c), k)


def test_symmetric_power_of_disjoint_union_is_convolution():
    R = tb_ring(group("s3"))
    a, b = R.classes[1], R.classes[3]
    X = R.realize(a).disjoint_union(R.realize(b))
    for k in range(4):
        expected = sum((symmetric_power(a, i) * symmetric_power(b, k - i) for i in range(k + 1)), R.zero)
        assert symmetric_power(X, k) == expected
        assert orbit_decompose(symmetric_power_set(X, k)) == expected


def test_symmetric_powers_of_sigma_and_free_orbit_over_z2():
    R = tb_ring(cyclic_group(2))
    sigma, free = R.parse_name("[G/G]_{a1}"), R.parse_name("[G/e]")
    for k in range(8):
        assert symmetric_power(sigma, k) == (R.one if k % 2 == 0 else R.basis(sigma))
        expected = R.parse(f"{(k + 1) // 2}*[G/e]") if k % 2 else R.parse(f"1 + {k // 2}*[G/e]")
        assert symmetric_power(free, k) == (R.one if k == 0 else expected)


def test_render_parse_round_trip():
    R = tb_ring(group("d4"))
    x = sum((R.basis(c) * (i - 3) for i, c in enumerate(R.classes)), R.zero)
    assert R.parse(R.render(x)) == x
    assert R.render(R.one) == "1"
    assert R.render(R.zero) == "0"


@pytest.mark.parametrize("text", ["[G/X9]", "[G/e]_{a7}", "[H/e]", "+"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        tb_ring(cyclic_group(2)).parse(text)


def test_reductions():
    G = group("s3")
    R = tb_ring(G)
    sign = R.parse("[G/G]_{a1}")
    assert rhohat(R.parse("[G/H2]")) == 2
    assert rhohat(R.one) == 1
    assert rho(sign) == burnside_ring(G).one
    assert eps(sign) == r1_ring(G).basis(1)
    assert eps(R.parse("[G/e] + [G/H1]")) == r1_ring(G).zero
    a, b = R.parse("[G/H1] + [G/G]_{a1}"), R.parse("2*[G/H2]")
    assert rhohat(a * b) == rhohat(a) * rhohat(b)
    assert rho(a * b) == rho(a) * rho(b)
    assert eps(a * b) == eps(a) * eps(b)


def test_elements_over_different_groups_do_not_mix():
    with pytest.raises(RingMismatchError):
        tb_ring(cyclic_group(2)).one + tb_ring(cyclic_group(3)).one


def test_equipped_set_validation():
    G = cyclic_group(2)
    triv = Character.trivial(G.whole)
    EquippedGSet(G, [[0], [0]], [triv])
    with pytest.raises(EquippedSetError):
        EquippedGSet(G, [[0, 1], [1, 0]], [triv, triv])
    with pytest.raises(EquippedSetError):
        EquippedGSet(G, [[0, 1], [0, 0]], [triv, triv])


def test_binomial_count():
    assert [binomial_count(2, k) for k in range(4)] == [1, 2, 3, 4]
    assert binomial_count(0, 0) == 1 and binomial_count(0, 3) == 0
