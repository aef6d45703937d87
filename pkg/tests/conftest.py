import pytest

from cliffatlas import steiner
from cliffatlas.clifford import inner_clifford
from cliffatlas.geometry import build_pauli_geometry
from cliffatlas.groups import normal_subgroups
from cliffatlas.perms import as_finite_group


def _proper_normals(g):
    return [s for s in normal_subgroups(g) if 1 < s.order < g.order]


@pytest.fixture(scope="session")
def c1():
    return inner_clifford(1)


@pytest.fixture(scope="session")
def c2():
    return inner_clifford(2)


@pytest.fixture(scope="session")
def normals1(c1):
    return _proper_normals(c1.group)


@pytest.fixture(scope="session")
def normals2(c2):
    return _proper_normals(c2.group)


@pytest.fixture(scope="session")
def geom2():
    return build_pauli_geometry(2)


@pytest.fixture(scope="session")
def witt():
    return steiner.witt_designs()


@pytest.fixture(scope="session")
def aut22(witt):
    return steiner.design_automorphisms(witt[2])


@pytest.fixture(scope="session")
def m22(aut22):
    return steiner.mathieu_m22(aut22.group)


@pytest.fixture(scope="session")
def hexad(m22, witt):
    return as_finite_group(steiner.hexad_stabilizer(m22, witt[2].blocks[0]))


@pytest.fixture(scope="session")
def bridge(normals2, hexad):
    return steiner.bridge_check(normals2[1].as_group(), hexad)
