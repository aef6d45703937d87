import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from cliffatlas.perms import (
    DegreeMismatch,
    Perm,
    PermGroup,
    action_homomorphism,
    alternating_group,
    as_finite_group,
    brute_force_order,
    membership,
    read_generators,
    set_stabilizer,
    symmetric_group,
    write_generators,
)


@st.composite
def perm_groups(draw, max_degree=7):
    n = draw(st.integers(2, max_degree))
    k = draw(st.integers(1, 3))
    gens = [Perm(draw(st.permutations(range(n)))) for _ in range(k)]
    return PermGroup(n, gens)


def sympy_order(g: PermGroup) -> int:
    return int(PermutationGroup([Permutation(list(p.images)) for p in g.generators]).order())


@settings(max_examples=60, deadline=None)
@given(perm_groups())
def test_chain_order_matches_enumeration_and_sympy(g):
    assert g.order() == brute_force_order(g) == sympy_order(g)


@settings(max_examples=40, deadline=None)
@given(perm_groups(), st.data())
def test_membership_matches_enumeration(g, data):
    rows = {tuple(r) for r in g.element_array().tolist()}
    p = Perm(data.draw(st.permutations(range(g.degree))))
    assert membership(g, p) == (p.images in rows)


@settings(max_examples=40, deadline=None)
@given(perm_groups())
def test_enumeration_is_closed(g):
    fg = as_finite_group(g)
    assert fg.perm(fg.identity).is_identity()
    x = np.arange(fg.order)
    y = np.roll(x, 1)
    rows = np.take_along_axis(fg.perms[x], fg.perms[y].astype(np.int64), axis=1)
    assert np.all(fg.index_of_rows(rows, check=True) >= 0)


@given(st.permutations(range(8)), st.permutations(range(8)))
def test_perm_algebra(a, b):
    p, q = Perm(a), Perm(b)
    assert (p * q).inverse() == q.inverse() * p.inverse()
    assert (p * q).sign() == p.sign() * q.sign()
    assert (p ** p.order()).is_identity()
    assert Perm.from_text(p.to_text()) == p
    assert Perm.from_cycles(8, p.cycles()) == p


def test_known_orders():
    assert [symmetric_group(n).order() for n in (3, 4, 5, 6, 7)] == [6, 24, 120, 720, 5040]
    assert [alternating_group(n).order() for n in (4, 5, 6)] == [12, 60, 360]


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        PermGroup(4, [Perm([1, 0, 2])])
    with pytest.raises(ValueError):
        Perm([0, 0, 1])


def test_generator_file_round_trip(tmp_path):
    gens = symmetric_group(6).generators
    write_generators(gens, tmp_path / "s6.txt")
    assert read_generators(tmp_path / "s6.txt") == gens


def test_set_stabilizer():
    h = set_stabilizer(symmetric_group(6), [0, 1])
    assert h.order() == 48 == brute_force_order(h)


def test_action_homomorphism_on_cosets():
    # S4 on the three pair partitions of {0,1,2,3}: kernel is the Klein group
    g = as_finite_group(symmetric_group(4))
    parts = [frozenset({frozenset({0, 1}), frozenset({2, 3})}),
             frozenset({frozenset({0, 2}), frozenset({1, 3})}),
             frozenset({frozenset({0, 3}), frozenset({1, 2})})]

    def act(x, k):
        p = g.perms[x]
        img = frozenset(frozenset(int(p[i]) for i in pair) for pair in parts[k])
        return parts.index(img)

    r = action_homomorphism(g, act, 3)
    assert r.image.order() == 6 and r.kernel.order == 4
