"""Point-line geometry of n-qubit Pauli operators.

Points are nonzero symplectic vectors (x | z) over GF(2), one per
non-identity Pauli string; two points are collinear when the operators
commute.  Lines are maximal sets of pairwise commuting operators.  For two
qubits this is the generalized quadrangle W(2) = GQ(2,2).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .cyclo import Cyclo8
from .groups import FiniteGroup
from .matrices import UMatrix, pauli_matrix
from .perms import action_homomorphism, as_finite_group

_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}

# display names for the two-qubit points; logic never uses them
TWO_QUBIT_NAMES = {
    "IX": "1", "IY": "2", "IZ": "3",
    "XI": "a", "YI": "b", "ZI": "c",
    "XX": "4", "XY": "5", "XZ": "6",
    "YX": "7", "YY": "8", "YZ": "9",
    "ZX": "d", "ZY": "e", "ZZ": "f",
}


class InconsistentLine(ValueError):
    pass


def symplectic_vector(label: str) -> tuple[int, ...]:
    """(x_1..x_n, z_1..z_n) for a Pauli string."""
    xs = [_BITS[c][0] for c in label]
    zs = [_BITS[c][1] for c in label]
    return tuple(xs + zs)


def symplectic_form(u, v) -> int:
    n = len(u) // 2
    return sum(u[i] * v[n + i] + u[n + i] * v[i] for i in range(n)) % 2


@dataclass
class PauliGeometry:
    n: int
    labels: list[str]
    vectors: np.ndarray  # (points, 2n) bits
    lines: list[tuple[int, ...]]
    adjacency: np.ndarray = field(repr=False)

    @property
    def num_points(self) -> int:
        return len(self.labels)

    def display(self, p: int) -> str:
        if self.n == 2:
            return TWO_QUBIT_NAMES[self.labels[p]]
        return self.labels[p]

    def lines_through(self, p: int) -> list[int]:
        return [k for k, line in enumerate(self.lines) if p in line]

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))


def commutation_matrix(vectors: np.ndarray) -> np.ndarray:
    """Boolean matrix of commuting pairs (diagonal False)."""
    n = vectors.shape[1] // 2
    x, z = vectors[:, :n], vectors[:, n:]
    form = (x @ z.T + z @ x.T) % 2
    adj = form == 0
    np.fill_diagonal(adj, False)
    return adj


def maximal_cliques(adj: np.ndarray) -> list[tuple[int, ...]]:
    """Bron-Kerbosch with pivoting; cliques sorted."""
    nbrs = [set(np.flatnonzero(row).tolist()) for row in adj]
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: len(nbrs[u] & p))
        for v in sorted(p - nbrs[pivot]):
            expand(r | {v}, p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(adj.shape[0])), set())
    return sorted(out)


def build_pauli_geometry(n: int) -> PauliGeometry:
    if n not in (1, 2, 3):
        raise ValueError("geometry is built for 1 to 3 qubits")
    labels = ["".join(t) for t in itertools.product("IXYZ", repeat=n) if set(t) != {"I"}]
    vectors = np.array([symplectic_vector(lab) for lab in labels], dtype=np.int64)
    adj = commutation_matrix(vectors)
    return PauliGeometry(n, labels, vectors, maximal_cliques(adj), adj)


def polar_line_count(n: int) -> int:
    """(2+1)(2^2+1)...(2^n+1)."""
    out = 1
    for k in range(1, n + 1):
        out *= 2**k + 1
    return out


def matrix_commutation_agrees(geom: PauliGeometry) -> tuple[int, bool]:
    """Compare the symplectic test with AB == BA on every pair; returns (pairs, agree)."""
    mats = [pauli_matrix(lab) for lab in geom.labels]
    pairs = 0
    for i, j in itertools.combinations(range(geom.num_points), 2):
        pairs += 1
        if (mats[i] @ mats[j] == mats[j] @ mats[i]) != bool(geom.adjacency[i, j]):
            return pairs, False
    return pairs, True


# ------------------------------------------------------------------ GQ axioms


@dataclass
class GQReport:
    line_sizes_ok: bool
    point_degrees_ok: bool
    antiflags: int
    antiflags_ok: int

    @property
    def passed(self) -> bool:
        return self.line_sizes_ok and self.point_degrees_ok and self.antiflags == self.antiflags_ok


def verify_gq_axioms(geom: PauliGeometry, s: int, t: int) -> GQReport:
    return gq_axioms(range(geom.num_points), geom.lines, s, t)


def gq_axioms(points, lines, s: int, t: int) -> GQReport:
    """Axioms of GQ(s, t) for a point set and a list of lines (point tuples)."""
    points = list(points)
    lines = [frozenset(line) for line in lines]
    sizes_ok = all(len(line) == s + 1 for line in lines)
    degrees_ok = all(sum(p in line for line in lines) == t + 1 for p in points)
    total = good = 0
    for p in points:
        for line in lines:
            if p in line:
                continue
            total += 1
            meeting = sum(1 for m in lines if p in m and m & line)
            good += meeting == 1
    return GQReport(sizes_ok, degrees_ok, total, good)


def grid_subgeometry() -> tuple[list[int], list[tuple[int, ...]]]:
    """A 3x3 grid: points r*3+c, lines the rows and columns."""
    rows = [tuple(3 * r + c for c in range(3)) for r in range(3)]
    cols = [tuple(3 * r + c for r in range(3)) for c in range(3)]
    return list(range(9)), rows + cols


# ------------------------------------------------------------------ spreads


def spreads(geom: PauliGeometry) -> list[tuple[int, ...]]:
    """Every partition of the points into disjoint lines, as sorted line-index tuples."""
    lines = [frozenset(line) for line in geom.lines]
    by_point = [[k for k, line in enumerate(lines) if p in line] for p in range(geom.num_points)]
    found = []

    def rec(covered: frozenset, chosen: list[int]):
        if len(covered) == geom.num_points:
            found.append(tuple(sorted(chosen)))
            return
        p = min(set(range(geom.num_points)) - covered)
        for k in by_point[p]:
            if not lines[k] & covered:
                rec(covered | lines[k], chosen + [k])

    rec(frozenset(), [])
    return sorted(set(found))


@dataclass
class SpreadStructure:
    count: int
    pairwise_shared: list[int]
    line_multiplicity: list[int]

    @property
    def is_complete_graph(self) -> bool:
        """Spreads as vertices, shared lines as edges: K_m with every line used once."""
        m = self.count
        return (
            all(c == 1 for c in self.pairwise_shared)
            and len(self.pairwise_shared) == m * (m - 1) // 2
            and all(c == 2 for c in self.line_multiplicity)
        )


def spread_structure(geom: PauliGeometry, found=None) -> SpreadStructure:
    found = spreads(geom) if found is None else found
    shared = [len(set(a) & set(b)) for a, b in itertools.combinations(found, 2)]
    mult = [sum(k in sp for sp in found) for k in range(len(geom.lines))]
    return SpreadStructure(len(found), shared, mult)


# ------------------------------------------------------------------ entanglement


def classify_line_entanglement(geom: PauliGeometry) -> list[str]:
    """'entangled' when every operator on the line acts nontrivially on both qubits."""
    if geom.n != 2:
        raise ValueError("entanglement tags are defined for two qubits")
    tags = []
    for line in geom.lines:
        nonlocal_ = all(geom.labels[p][0] != "I" and geom.labels[p][1] != "I" for p in line)
        tags.append("entangled" if nonlocal_ else "product")
    return tags


@dataclass
class SchmidtReport:
    signs: list[tuple[int, int]]
    determinants: list[Cyclo8]
    resolves_identity: bool

    @property
    def entangled(self) -> bool:
        return all(not d.is_zero() for d in self.determinants)

    @property
    def product(self) -> bool:
        return all(d.is_zero() for d in self.determinants)


_QUARTER = Cyclo8((1, 0, 0, 0), 2)


def eigenbasis_schmidt_check(labels) -> SchmidtReport:
    """Joint eigenstates of the first two operators of a commuting two-qubit line.

    Each projector (I + e1 A)(I + e2 B)/4 must be rank one (trace 1,
    idempotent).  A state c_00|00> + c_01|01> + c_10|10> + c_11|11> is a
    product state iff c_00 c_11 - c_01 c_10 = 0.
    """
    a, b = (pauli_matrix(lab) if isinstance(lab, str) else lab for lab in list(labels)[:2])
    ident = UMatrix.identity(4)
    if not a @ b == b @ a:
        raise InconsistentLine("operators do not commute")
    signs, dets = [], []
    total = UMatrix(np.zeros((4, 4, 4), dtype=np.int64), 0)
    one = Cyclo8((1, 0, 0, 0))
    for e1, e2 in itertools.product((1, -1), repeat=2):
        pa = ident + a if e1 == 1 else ident - a
        pb = ident + b if e2 == 1 else ident - b
        proj = (pa @ pb).scale(_QUARTER)
        if proj.trace() != one or not proj @ proj == proj:
            raise InconsistentLine("joint eigenspace is not one-dimensional")
        total = total + proj
        col = next(j for j in range(4) if any(not proj.entry(i, j).is_zero() for i in range(4)))
        v = [proj.entry(i, col) for i in range(4)]
        signs.append((e1, e2))
        dets.append(v[0] * v[3] - v[1] * v[2])
    return SchmidtReport(signs, dets, total == ident)


# ------------------------------------------------------------------ graph model


def line_graph_complement_k6() -> tuple[list[tuple[int, int]], np.ndarray]:
    """Vertices: 2-subsets of 6 symbols; adjacent iff disjoint."""
    verts = list(itertools.combinations(range(6), 2))
    adj = np.array([[not set(u) & set(v) for v in verts] for u in verts], dtype=bool)
    return verts, adj


def graph_isomorphisms(a: np.ndarray, b: np.ndarray, count_all: bool = False):
    """Backtrack over vertex images keeping adjacency; first map or all maps."""
    n = a.shape[0]
    if b.shape[0] != n or sorted(a.sum(1)) != sorted(b.sum(1)):
        return [] if count_all else None
    deg_a, deg_b = a.sum(1), b.sum(1)
    order = [0]
    while len(order) < n:
        rest = [v for v in range(n) if v not in order]
        order.append(max(rest, key=lambda v: (int(a[v, order].sum()), -v)))
    found = []
    image = [-1] * n
    used = [False] * n

    def rec(k):
        if k == n:
            found.append(list(image))
            return not count_all
        v = order[k]
        for w in range(n):
            if used[w] or deg_a[v] != deg_b[w]:
                continue
            if all(a[v, order[j]] == b[w, image[order[j]]] for j in range(k)):
                image[v], used[w] = w, True
                if rec(k + 1):
                    return True
                image[v], used[w] = -1, False
        return False

    rec(0)
    if count_all:
        return found
    return found[0] if found else None


@dataclass
class GraphModelReport:
    isomorphism: list[int] | None
    regular_degrees: tuple[int, int]
    automorphisms: int

    @property
    def passed(self) -> bool:
        return self.isomorphism is not None and self.regular_degrees == (6, 6) and self.automorphisms == 720


def graph_model_check(geom: PauliGeometry) -> GraphModelReport:
    _, model = line_graph_complement_k6()
    adj = geom.adjacency
    iso = graph_isomorphisms(adj, model)
    if iso is not None:
        perm = np.asarray(iso)
        if not np.array_equal(model[np.ix_(perm, perm)], adj):
            iso = None
    degs = set(adj.sum(1).tolist()), set(model.sum(1).tolist())
    deg = tuple(d.pop() if len(d) == 1 else -1 for d in degs)
    autos = len(graph_isomorphisms(adj, adj, count_all=True))
    return GraphModelReport(iso, deg, autos)


# ------------------------------------------------------------------ Clifford action


@dataclass
class ActionReport:
    image_order: int
    kernel_order: int
    preserves_lines: bool
    kernel: object = field(repr=False, default=None)


def conjugation_action_check(inner: FiniteGroup, geom: PauliGeometry) -> ActionReport:
    """Action of the inner two-qubit Clifford group on the 15 points (sign dropped)."""
    from .clifford import unsigned_action

    res = action_homomorphism(inner, unsigned_action(inner, geom.labels), geom.num_points)
    rows = as_finite_group(res.image).perms
    line_set = {frozenset(line) for line in geom.lines}
    line_arr = np.asarray(geom.lines)
    for row in rows:
        imgs = row[line_arr]
        if any(frozenset(x) not in line_set for x in imgs.tolist()):
            return ActionReport(res.image.order(), res.kernel.order, False, res.kernel)
    return ActionReport(res.image.order(), res.kernel.order, True, res.kernel)


# ------------------------------------------------------------------ ring grid


_RING = [(0, 0), (1, 0), (0, 1), (1, 1)]  # GF(2) x GF(2), componentwise


def ring_projective_line() -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Unimodular pairs (x, y) over GF(2) x GF(2).

    The only unit is (1, 1), so no two pairs are identified; a pair is
    admissible iff in each component it is a nonzero vector of GF(2)^2.
    """
    pts = []
    for x, y in itertools.product(_RING, repeat=2):
        if all((x[i], y[i]) != (0, 0) for i in range(2)):
            pts.append((x, y))
    return pts


@dataclass
class RingGrid:
    points: list
    rows: list[tuple[int, ...]]  # point indices with equal first-component class
    cols: list[tuple[int, ...]]
    pauli_map: dict[int, str]  # ring point -> two-qubit Pauli label
    images: list[frozenset]  # Pauli point sets of rows then columns

    def incidence_counts(self) -> list[int]:
        lines = self.rows + self.cols
        return [sum(i in line for line in lines) for i in range(len(self.points))]


def ring_projective_line_grid(geom: PauliGeometry | None = None) -> RingGrid:
    """3x3 grid on the projective line over GF(2)xGF(2), mapped onto the nonlocal Paulis.

    Grid position (r, c) goes to P_i (x) P_j with j - i = r and i + j = c
    (mod 3) in the order X, Y, Z, so rows are {P (x) s(P)} for the even
    permutations s and columns those for the odd ones.
    """
    geom = build_pauli_geometry(2) if geom is None else geom
    pts = ring_projective_line()
    proj_classes = [(1, 0), (0, 1), (1, 1)]  # points of the projective line over GF(2)

    def comp(p, i):
        return proj_classes.index((p[0][i], p[1][i]))

    rows = [tuple(k for k, p in enumerate(pts) if comp(p, 0) == r) for r in range(3)]
    cols = [tuple(k for k, p in enumerate(pts) if comp(p, 1) == c) for c in range(3)]
    letters = "XYZ"
    pauli_map = {}
    for k, p in enumerate(pts):
        r, c = comp(p, 0), comp(p, 1)
        i = (2 * (c - r)) % 3
        j = (i + r) % 3
        pauli_map[k] = letters[i] + letters[j]
    index = {lab: q for q, lab in enumerate(geom.labels)}
    images = [frozenset(index[pauli_map[k]] for k in line) for line in rows + cols]
    return RingGrid(pts, rows, cols, pauli_map, images)


# ------------------------------------------------------------------ export


def to_dot(geom: PauliGeometry) -> str:
    tags = classify_line_entanglement(geom) if geom.n == 2 else ["product"] * len(geom.lines)
    bold = set()
    for line, tag in zip(geom.lines, tags):
        if tag == "entangled":
            bold |= {tuple(sorted(e)) for e in itertools.combinations(line, 2)}
    out = ["graph commutation {"]
    for p in range(geom.num_points):
        out.append(f'  {p} [label="{geom.display(p)}" pauli="{geom.labels[p]}"];')
    for i, j in geom.edges():
        style = " [penwidth=3]" if (i, j) in bold else ""
        out.append(f"  {i} -- {j}{style};")
    out.append("}")
    return "\n".join(out) + "\n"


def to_json(geom: PauliGeometry, extra: dict | None = None) -> str:
    doc = {
        "qubits": geom.n,
        "points": [
            {"label": lab, "name": geom.display(k), "bits": "".join(map(str, geom.vectors[k].tolist()))}
            for k, lab in enumerate(geom.labels)
        ],
        "lines": [list(line) for line in geom.lines],
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
