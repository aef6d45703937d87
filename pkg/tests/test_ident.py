import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffatlas.groups import (
    TableGroup,
    center,
    check_hom,
    cyclic_group,
    direct_product,
    elementary_abelian,
    extend_hom,
    greedy_generators,
    normal_subgroups,
)
from cliffatlas.ident import (
    Inconclusive,
    IsoCertificate,
    Refuted,
    abelian_invariants,
    automorphism_count,
    fingerprint,
    isomorphic,
    module_orbit_signature,
    outer_structure,
    recognize,
    reference_group,
    verify_isomorphism,
)
from cliffatlas.perms import Perm, PermGroup, alternating_group, as_finite_group, symmetric_group


def tabulate(g):
    """Plain multiplication table copy; the group is rebuilt with greedy generators."""
    e = np.arange(g.order)
    t = TableGroup(g.mul(e[:, None], e[None, :]), g.identity)
    return TableGroup(t.table, g.identity, generators=greedy_generators(t))


def relabel(g, perm):
    """The same group with element i renamed perm[i]."""
    t = g.table
    inv = np.argsort(perm)
    new = perm[t[inv][:, inv]]
    return TableGroup(new, int(perm[g.identity]), generators=[int(perm[s]) for s in g.generators])


def brute_automorphisms(g) -> int:
    gens = np.asarray(g.generators)
    mul = g.mul
    count = 0
    for images in itertools.product(range(g.order), repeat=len(gens)):
        phi = extend_hom(g, np.asarray(images), mul, g.identity)
        if np.unique(phi).size == g.order and check_hom(g, phi, mul):
            count += 1
    return count


@st.composite
def small_groups(draw):
    n = draw(st.integers(2, 5))
    gens = [Perm(draw(st.permutations(range(n)))) for _ in range(draw(st.integers(1, 2)))]
    return tabulate(as_finite_group(PermGroup(n, gens)))


@settings(max_examples=25, deadline=None)
@given(small_groups())
def test_automorphism_count_matches_brute_force(g):
    if len(g.generators) > 2:
        return
    assert automorphism_count(g) == brute_automorphisms(g)


@settings(max_examples=25, deadline=None)
@given(small_groups())
def test_inner_automorphisms_divide(g):
    aut = automorphism_count(g)
    assert aut % (g.order // center(g).order) == 0


@settings(max_examples=25, deadline=None)
@given(small_groups(), st.randoms(use_true_random=False))
def test_relabelled_copy_is_isomorphic(g, rnd):
    perm = np.array(rnd.sample(range(g.order), g.order))
    h = relabel(g, perm)
    cert = isomorphic(g, h)
    assert isinstance(cert, IsoCertificate) and cert.verified
    assert verify_isomorphism(g, h, cert.element_map)
    assert fingerprint(g) == fingerprint(h)


def test_z4_vs_klein():
    a, b = cyclic_group(4), elementary_abelian(2)
    assert fingerprint(a) != fingerprint(b)
    assert isinstance(isomorphic(a, b), Refuted)
    assert recognize(a) == "Z4" and recognize(b) == "Z2xZ2"


def test_recognize_names():
    assert recognize(cyclic_group(1)) == "1"
    assert recognize(cyclic_group(8)) == "Z8"
    assert recognize(elementary_abelian(4)) == "Z2^4"
    for name in ("S3", "S4", "A4", "A5", "S5"):
        assert recognize(reference_group(name)) == name
    assert recognize(direct_product(cyclic_group(2), cyclic_group(4))) == "Unknown"


def test_abelian_invariants():
    assert abelian_invariants(direct_product(cyclic_group(2), cyclic_group(4))) == (2, 4)
    assert abelian_invariants(direct_product(cyclic_group(3), cyclic_group(4))) == (3, 4)
    assert abelian_invariants(elementary_abelian(3)) == (2, 2, 2)


def test_fingerprint_text_is_stable():
    text = fingerprint(reference_group("S4")).to_text()
    assert text.splitlines()[0] == "order 24"
    assert "class_sizes 1 3 6 6 8" in text
    assert text == fingerprint(as_finite_group(symmetric_group(4)).materialize()).to_text()


def test_verify_rejects_non_homomorphism():
    g = reference_group("S4")
    assert not verify_isomorphism(g, g, np.roll(np.arange(24), 1))
    assert not verify_isomorphism(g, g, np.zeros(24, dtype=np.int64))
    assert verify_isomorphism(g, g, np.arange(24))


def test_budget_gives_inconclusive():
    g = reference_group("S5")
    h = relabel(g, np.random.default_rng(1).permutation(120))
    r = isomorphic(g, h, budget=1)
    assert isinstance(r, (Inconclusive, IsoCertificate))
    assert isinstance(automorphism_count(reference_group("S5"), budget=1), Inconclusive)


def test_s4_not_a5_shape():
    assert isinstance(isomorphic(reference_group("S4"), reference_group("A4")), Refuted)


@pytest.mark.parametrize("name,aut,out", [
    ("S4", 24, "1"),
    ("A4", 24, "Z2"),
    ("S6", 1440, "Z2"),
    ("A6", 1440, "Z2xZ2"),
])
def test_outer_structure(name, aut, out):
    g = reference_group(name)
    r = outer_structure(g)
    assert (r.aut_order, r.name) == (aut, out)
    assert r.aut_order == r.inn_order * r.out_order


def test_klein_out_is_s3():
    r = outer_structure(elementary_abelian(2))
    assert (r.aut_order, r.inn_order, r.name) == (6, 1, "S3")


def test_klein_orbit_signature_in_s4():
    g = as_finite_group(symmetric_group(4))
    v4 = [n for n in normal_subgroups(g) if n.order == 4][0]
    assert module_orbit_signature(g, v4) == (3,)
    with pytest.raises(ValueError):
        module_orbit_signature(as_finite_group(alternating_group(4)), v4)


def test_inner_one_qubit_is_s4(c1):
    cert = isomorphic(c1.group, reference_group("S4"))
    assert isinstance(cert, IsoCertificate) and cert.verified


def test_u6_outer(normals2):
    r = outer_structure(normals2[1].as_group().materialize())
    assert (r.aut_order, r.name) == (23040, "Z2xZ2")
