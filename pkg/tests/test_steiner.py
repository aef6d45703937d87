import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffatlas import steiner
from cliffatlas.perms import brute_force_order


def polynomial_golay_enumerator():
    """Oracle: cyclic code from g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1, extended by parity."""
    g = sum(1 << e for e in (0, 2, 4, 5, 6, 10, 11))
    rows = []
    for s in range(12):
        w = g << s
        if w.bit_count() % 2:
            w |= 1 << 23
        rows.append(w)
    words = [0]
    for r in rows:
        words += [w ^ r for w in words]
    return dict(sorted(Counter(w.bit_count() for w in words).items()))


def test_golay_code():
    code = steiner.golay_code()
    assert code.dimension == 12 and code.is_self_orthogonal()
    assert code.weight_enumerator() == steiner.GOLAY_WEIGHTS == polynomial_golay_enumerator()


def test_codeword_round_trip():
    code = steiner.golay_code()
    text = steiner.dump_codewords(code)
    assert len(text.splitlines()) == 4096
    assert sorted(steiner.load_codewords(text)) == sorted(code.codewords())
    # bit i of a word sits at column i
    w = min(x for x in code.codewords() if x)
    line = format(w, "024b")[::-1]
    assert [i for i, ch in enumerate(line) if ch == "1"] == [i for i in range(24) if w >> i & 1]


def test_witt_designs(witt):
    s24, s23, s22 = witt
    assert [len(s.blocks) for s in witt] == [759, 253, 77]
    assert (s24.a, s24.b, s24.c) == (5, 8, 24)
    assert (s22.a, s22.b, s22.c) == (3, 6, 22)
    r = steiner.verify_steiner(s24)
    assert r.passed and r.subsets == math.comb(24, 5) == 42504
    assert steiner.verify_steiner(s23).passed and steiner.verify_steiner(s22).passed


def test_block_intersections(witt):
    s24, _, s22 = witt
    sets = [set(b) for b in s24.blocks]
    assert {len(a & b) for a, b in itertools.combinations(sets[:120], 2)} <= {0, 2, 4}
    sets = [set(b) for b in s22.blocks]
    assert {len(a & b) for a, b in itertools.combinations(sets, 2)} == {0, 2}


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 76))
def test_dropping_a_block_leaves_its_triples_uncovered(witt, k):
    r = steiner.verify_steiner(steiner.drop_block(witt[2], k))
    assert r.uncovered == math.comb(6, 3) == 20 and r.overcovered == 0


def test_duplicated_block_is_overcovered(witt):
    s = witt[2]
    dup = steiner.SteinerSystem(s.a, s.b, s.c, s.blocks + s.blocks[:1])
    assert steiner.verify_steiner(dup).overcovered == 20


def test_design_round_trip(witt):
    for s in witt:
        again = steiner.SteinerSystem.loads(s.dumps())
        assert again == s
    with pytest.raises(ValueError):
        steiner.SteinerSystem.loads("3 6 22\n0 1 2\n")


def test_projective_planes():
    for q, n in ((2, 7), (4, 21)):
        s = steiner.projective_plane(q)
        assert len(s.blocks) == n and s.c == n and steiner.verify_steiner(s).passed


def test_fano_automorphisms_brute():
    s = steiner.projective_plane(2)
    blocks = {frozenset(b) for b in s.blocks}
    brute = sum(1 for p in itertools.permutations(range(7))
                if all(frozenset(p[x] for x in b) in blocks for b in s.blocks))
    r = steiner.design_automorphisms(s)
    assert r.order == r.group.order() == brute == brute_force_order(r.group) == 168


def test_s3622_automorphisms(witt, aut22):
    assert aut22.order == aut22.group.order() == 887040
    gens = np.array([p.images for p in aut22.group.generators])
    assert steiner.maps_blocks_to_blocks(witt[2], gens)


def test_m22(witt, m22):
    assert m22.order() == 443520
    assert steiner.is_perfect_perm(m22)
    assert m22.is_transitive()
    assert len(m22.set_orbit(witt[2].blocks[0])) == 77
    assert steiner.maps_blocks_to_blocks(witt[2], m22.element_array())


def test_hexad_stabilizers(witt, m22):
    rows = m22.element_array()
    for k in (0, 1, 2):
        blk = list(witt[2].blocks[k])
        h = steiner.hexad_stabilizer(m22, blk)
        brute = int(np.isin(rows[:, blk], blk).all(axis=1).sum())
        assert h.order() == brute == 5760


def test_block_check_rejects_non_automorphism(witt):
    swap = np.arange(22)
    s22 = witt[2]
    # a transposition is never an automorphism of S(3,6,22)
    swap[[0, 1]] = [1, 0]
    assert not steiner.maps_blocks_to_blocks(s22, swap[None])


def test_bridge(bridge):
    assert bridge.fingerprints_equal and bridge.both_perfect
    assert bridge.minimal_normal == ("Z2^4", "Z2^4") and bridge.quotients == ("A6", "A6")
    assert bridge.orbit_signatures[0] == bridge.orbit_signatures[1]
    assert bridge.both_split and bridge.structural
    assert bridge.tier == 1
