"""Inner Clifford groups as permutation groups on signed Pauli operators.

Conjugation by a Clifford unitary sends each Hermitian Pauli operator to
plus or minus another one.  On the 2(4^n - 1) signed non-identity Paulis
this action has kernel exactly the scalar center, so its image is the
inner group C_n / Z(C_n).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, QuotientGroup, Subgroup, center, check_hom, quotient
from .matrices import MatFiniteGroup, MatGroup, UMatrix, clifford_group, pauli_matrix
from .perms import ActionInconsistent, PermFiniteGroup, action_homomorphism, as_finite_group


def pauli_labels(n: int) -> list[str]:
    """Non-identity Pauli strings, first tensor factor leftmost, in IXYZ order."""
    return ["".join(t) for t in itertools.product("IXYZ", repeat=n) if set(t) != {"I"}]


def signed_pauli_points(n: int) -> tuple[list[UMatrix], dict[bytes, int]]:
    """Point 2k is +P_k and 2k+1 is -P_k."""
    mats = []
    for label in pauli_labels(n):
        m = pauli_matrix(label)
        mats += [m, -m]
    return mats, {m.key(): i for i, m in enumerate(mats)}


def conjugation_action(mg: MatGroup, points: list[UMatrix], index: dict[bytes, int]):
    def act(x: int, p: int) -> int:
        u = mg[x]
        img = u @ points[p] @ u.dagger()
        try:
            return index[img.key()]
        except KeyError:
            raise ActionInconsistent("conjugate is not a signed Pauli operator") from None

    return act


@dataclass
class InnerClifford:
    n: int
    matgroup: MatGroup
    full: MatFiniteGroup
    center: Subgroup
    group: PermFiniteGroup  # inner group acting on signed Paulis; labels are matrix reps
    projection: np.ndarray  # C_n index -> inner index
    rep: np.ndarray  # inner index -> least C_n index in its coset

    def point_action(self, x: int, p: int) -> int:
        """Action of inner element x on unsigned Pauli point p (sign dropped)."""
        return int(self.group.perms[x, 2 * p]) // 2

    def quotient(self) -> QuotientGroup:
        """C_n / Z(C_n) built directly as a coset group."""
        if "_quotient" not in self.__dict__:
            self._quotient = quotient(self.full, self.center)
        return self._quotient

    def quotient_map_is_isomorphism(self) -> bool:
        """The coset group and the permutation image are the same group."""
        q = self.quotient()
        phi = self.projection[q.reps]
        if np.unique(phi).size != q.order or q.order != self.group.order:
            return False
        return check_hom(q, phi, self.group.mul)


def inner_clifford(n: int, matgroup: MatGroup | None = None) -> InnerClifford:
    mg = matgroup if matgroup is not None else clifford_group(n)
    full = mg.as_finite_group()
    points, index = signed_pauli_points(n)
    res = action_homomorphism(full, conjugation_action(mg, points, index), len(points))
    z = center(full)
    if not np.array_equal(res.kernel.members, z.members):
        raise ActionInconsistent("kernel of the Pauli action is not the center")
    group = as_finite_group(res.image)
    projection = group.index_of_rows(res.perms)
    rep = np.full(group.order, mg.order, dtype=np.int64)
    np.minimum.at(rep, projection, np.arange(mg.order))
    group.labels = [mg[int(r)] for r in rep]
    group.name = f"Inn(C{n})"
    return InnerClifford(n, mg, full, z, group, projection, rep)


def unsigned_action(inner: FiniteGroup, labels: list[str]):
    """Action on unsigned Pauli points by matrix conjugation, read from the group labels."""
    mats = [pauli_matrix(lab) for lab in labels]
    index = {}
    for k, m in enumerate(mats):
        index[m.key()] = k
        index[(-m).key()] = k

    def act(x: int, p: int) -> int:
        u = inner.labels[x]
        return index[(u @ mats[p] @ u.dagger()).key()]

    return act
