import itertools
import json

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffatlas import geometry as geo
from cliffatlas.matrices import pauli_matrix


def as_nx(adj):
    g = nx.Graph()
    g.add_nodes_from(range(adj.shape[0]))
    g.add_edges_from(zip(*np.nonzero(np.triu(adj, 1))))
    return g


labels2 = st.sampled_from(geo.build_pauli_geometry(2).labels)


@given(labels2, labels2)
def test_symplectic_form_matches_matrices(a, b):
    ma, mb = pauli_matrix(a), pauli_matrix(b)
    commute = ma @ mb == mb @ ma
    assert commute == (geo.symplectic_form(geo.symplectic_vector(a), geo.symplectic_vector(b)) == 0)


def test_counts(geom2):
    assert geom2.num_points == 15 and len(geom2.lines) == 15
    assert all(len(line) == 3 for line in geom2.lines)
    assert all(len(geom2.lines_through(p)) == 3 for p in range(15))
    assert len(geom2.edges()) == 45


def test_matrix_commutation_oracle(geom2):
    assert geo.matrix_commutation_agrees(geom2) == (105, True)


def test_gq_axioms(geom2):
    r = geo.verify_gq_axioms(geom2, 2, 2)
    assert r.passed and (r.antiflags, r.antiflags_ok) == (180, 180)


def test_antiflags_brute(geom2):
    lines = [set(line) for line in geom2.lines]
    ok = 0
    for p in range(15):
        for line in lines:
            if p in line:
                continue
            through = [m for m in lines if p in m and m & line]
            ok += len(through) == 1
    assert ok == 180


def test_grid_is_not_gq():
    pts, lines = geo.grid_subgeometry()
    r = geo.gq_axioms(pts, lines, 2, 2)
    assert r.line_sizes_ok and not r.point_degrees_ok and not r.passed


def test_spreads_match_exact_cover(geom2):
    brute = [c for c in itertools.combinations(range(15), 5)
             if len(set().union(*(geom2.lines[k] for k in c))) == 15]
    found = geo.spreads(geom2)
    assert sorted(tuple(sorted(s)) for s in found) == brute and len(brute) == 6
    st_ = geo.spread_structure(geom2, found)
    assert st_.is_complete_graph
    for a, b in itertools.combinations(found, 2):
        assert len(set(a) & set(b)) == 1


def test_entanglement_classification(geom2):
    tags = geo.classify_line_entanglement(geom2)
    assert tags.count("entangled") == 6 and tags.count("product") == 9
    for line, tag in zip(geom2.lines, tags):
        labs = [geom2.labels[p] for p in line]
        assert (tag == "product") == any("I" in lab for lab in labs)
        r = geo.eigenbasis_schmidt_check(labs)
        assert r.resolves_identity
        assert r.entangled == (tag == "entangled") and r.product == (tag == "product")


def test_schmidt_rejects_noncommuting():
    with pytest.raises(geo.InconsistentLine):
        geo.eigenbasis_schmidt_check(["XI", "ZI"])


def test_graph_model_against_networkx(geom2):
    g = as_nx(geom2.adjacency)
    model = nx.complement(nx.line_graph(nx.complete_graph(6)))
    assert nx.is_isomorphic(g, model)
    nx_autos = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(g, g).isomorphisms_iter())
    r = geo.graph_model_check(geom2)
    assert r.passed and r.automorphisms == nx_autos == 720


def test_maximal_cliques_against_networkx():
    for n, pts, lines in ((1, 3, 3), (2, 15, 15), (3, 63, 135)):
        g = geo.build_pauli_geometry(n)
        ref = sorted(tuple(sorted(c)) for c in nx.find_cliques(as_nx(g.adjacency)))
        assert sorted(tuple(sorted(c)) for c in g.lines) == ref
        assert (g.num_points, len(g.lines)) == (pts, lines)
        assert len(g.lines) == geo.polar_line_count(n)


def test_conjugation_action(c2, geom2, normals2):
    r = geo.conjugation_action_check(c2.group, geom2)
    assert (r.image_order, r.kernel_order, r.preserves_lines) == (720, 16, True)
    assert np.array_equal(r.kernel.members, normals2[0].members)


def test_ring_grid(geom2):
    rg = geo.ring_projective_line_grid(geom2)
    assert len(rg.points) == 9 and rg.incidence_counts() == [2] * 9
    tags = geo.classify_line_entanglement(geom2)
    ent = {frozenset(line) for line, t in zip(geom2.lines, tags) if t == "entangled"}
    assert set(rg.images) == ent and len(rg.images) == 6
    assert all("I" not in lab for lab in rg.pauli_map.values())


def test_dot_and_json_deterministic(geom2):
    dot = geo.to_dot(geom2)
    assert dot == geo.to_dot(geo.build_pauli_geometry(2))
    assert dot.count(" -- ") == 45 and dot.count("penwidth=3") == 18
    doc = json.loads(geo.to_json(geom2, {"extra": 1}))
    assert len(doc["points"]) == 15 and doc["extra"] == 1
    assert {p["name"] for p in doc["points"]} == set("123456789abcdef")


def test_out_of_range():
    with pytest.raises(ValueError):
        geo.build_pauli_geometry(4)
