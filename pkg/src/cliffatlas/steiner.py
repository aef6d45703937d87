"""Witt designs from the extended binary Golay code, and their symmetry groups."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .perms import Perm, PermGroup, StabChain, _inv, _mul, set_stabilizer

# quadratic residues modulo 23
QR23 = (1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18)
GOLAY_WEIGHTS = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


class ConstructionFailed(RuntimeError):
    pass


class NotSteiner(ValueError):
    pass


class UnexpectedStructure(RuntimeError):
    pass


# ------------------------------------------------------------------ code


@dataclass
class BinaryCode:
    length: int
    rows: list[int]  # generator rows as bit masks, bit i = coordinate i

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def codewords(self) -> list[int]:
        words = [0]
        for r in self.rows:
            words += [w ^ r for w in words]
        return words

    def weight_enumerator(self) -> dict[int, int]:
        return dict(sorted(Counter(w.bit_count() for w in self.codewords()).items()))

    def is_self_orthogonal(self) -> bool:
        return all((a & b).bit_count() % 2 == 0 for a in self.rows for b in self.rows)


def _reduce_basis(vectors) -> list[int]:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def golay_code() -> BinaryCode:
    """Cyclic shifts of the indicator of the residues mod 23, each with a parity bit."""
    base = list(QR23)
    rows = []
    for s in range(23):
        word = 0
        for i in base:
            word |= 1 << ((i + s) % 23)
        if word.bit_count() % 2:
            word |= 1 << 23
        rows.append(word)
    code = BinaryCode(24, _reduce_basis(rows))
    if code.dimension != 12 or code.weight_enumerator() != GOLAY_WEIGHTS:
        raise ConstructionFailed("residue table does not give the Golay code")
    return code


def dump_codewords(code: BinaryCode) -> str:
    return "".join(format(w, "024b")[::-1] + "\n" for w in sorted(code.codewords()))


def load_codewords(text: str) -> list[int]:
    return [int(line[::-1], 2) for line in text.split()]


# ------------------------------------------------------------------ designs


@dataclass
class SteinerSystem:
    a: int
    b: int
    c: int
    blocks: list[tuple[int, ...]]

    def __post_init__(self):
        self.blocks = sorted(tuple(sorted(int(x) for x in blk)) for blk in self.blocks)

    def block_masks(self) -> list[int]:
        return [sum(1 << x for x in blk) for blk in self.blocks]

    def dumps(self) -> str:
        lines = [f"{self.a} {self.b} {self.c}"]
        lines += [" ".join(map(str, blk)) for blk in self.blocks]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> SteinerSystem:
        rows = [line.split() for line in text.strip().splitlines()]
        a, b, c = map(int, rows[0])
        blocks = [tuple(map(int, r)) for r in rows[1:]]
        if any(len(blk) != b for blk in blocks):
            raise ValueError("block of the wrong size")
        return cls(a, b, c, blocks)


@dataclass
class SteinerReport:
    subsets: int
    uncovered: int
    overcovered: int

    @property
    def passed(self) -> bool:
        return self.uncovered == 0 and self.overcovered == 0


def verify_steiner(s: SteinerSystem) -> SteinerReport:
    total = math.comb(s.c, s.a)
    counts = Counter()
    for blk in s.blocks:
        counts.update(itertools.combinations(blk, s.a))
    over = sum(1 for v in counts.values() if v > 1)
    return SteinerReport(total, total - len(counts), over)


def octad_design(code: BinaryCode) -> SteinerSystem:
    blocks = [tuple(i for i in range(24) if w >> i & 1) for w in code.codewords() if w.bit_count() == 8]
    s = SteinerSystem(5, 8, 24, blocks)
    if not verify_steiner(s).passed:
        raise NotSteiner("weight-8 supports do not form S(5,8,24)")
    return s


def derive(s: SteinerSystem, p: int) -> SteinerSystem:
    """Blocks through p with p removed; points above p shift down by one."""
    if s.a < 2:
        raise ValueError("cannot derive a design with a < 2")
    blocks = [tuple(x - (x > p) for x in blk if x != p) for blk in s.blocks if p in blk]
    d = SteinerSystem(s.a - 1, s.b - 1, s.c - 1, blocks)
    if not verify_steiner(d).passed:
        raise NotSteiner("derived design fails the Steiner property")
    return d


def witt_designs() -> tuple[SteinerSystem, SteinerSystem, SteinerSystem]:
    s24 = octad_design(golay_code())
    s23 = derive(s24, 23)
    s22 = derive(s23, 22)
    return s24, s23, s22


# GF(4) = {0, 1, w, w^2} encoded 0, 1, 2, 3; addition is xor
_GF4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]


def projective_plane(q: int) -> SteinerSystem:
    if q not in (2, 4):
        raise ValueError("only q = 2 and q = 4 are supported")
    mul = _GF4_MUL if q == 4 else [[0, 0], [0, 1]]
    vecs = [v for v in itertools.product(range(q), repeat=3) if any(v) and v[next(i for i in range(3) if v[i])] == 1]

    def dot(u, v):
        acc = 0
        for a, b in zip(u, v):
            acc ^= mul[a][b]
        return acc

    blocks = [tuple(i for i, p in enumerate(vecs) if dot(l, p) == 0) for l in vecs]
    return SteinerSystem(2, q + 1, len(vecs), blocks)


def drop_block(s: SteinerSystem, k: int = 0) -> SteinerSystem:
    return SteinerSystem(s.a, s.b, s.c, s.blocks[:k] + s.blocks[k + 1:])


# ------------------------------------------------------------------ automorphisms


class _Design:
    """Incidence data for the automorphism backtrack."""

    def __init__(self, s: SteinerSystem):
        self.s = s
        self.masks = s.block_masks()
        self.block_of = {}
        for k, blk in enumerate(s.blocks):
            for sub in itertools.combinations(blk, s.a):
                self.block_of[sub] = k
        self.full = (1 << s.c) - 1
        self.mask_set = set(self.masks)

    def image_block(self, pts) -> int:
        return self.masks[self.block_of[tuple(sorted(pts))]]

    def complete(self, fixed: dict[int, int]) -> tuple | None:
        """Extend a partial point map to an automorphism, or None."""
        s = self.s
        f = dict(fixed)

        def rec() -> tuple | None:
            used = 0
            for y in f.values():
                used |= 1 << y
            cand = {x: self.full & ~used for x in range(s.c) if x not in f}
            for bm in self.masks:
                inside = [x for x in f if bm >> x & 1]
                if len(inside) < s.a:
                    continue
                target = self.image_block([f[x] for x in inside[: s.a]])
                for x, y in f.items():
                    if (bm >> x & 1) != (target >> y & 1):
                        return None
                for x in cand:
                    cand[x] &= target if bm >> x & 1 else ~target
            if not cand:
                perm = tuple(f[x] for x in range(s.c))
                if all(sum(1 << perm[x] for x in blk) in self.mask_set for blk in s.blocks):
                    return perm
                return None
            x = min(cand, key=lambda u: (cand[u].bit_count(), u))
            c = cand[x]
            while c:
                y = (c & -c).bit_length() - 1
                c &= c - 1
                f[x] = y
                r = rec()
                if r is not None:
                    return r
                del f[x]
            return None

        return rec()


def _orbit(point: int, gens) -> set[int]:
    seen = {point}
    queue = [point]
    for x in queue:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


@dataclass
class AutomorphismResult:
    group: PermGroup
    orbit_sizes: list[int]
    searches: int

    @property
    def order(self) -> int:
        return math.prod(self.orbit_sizes)


def design_automorphisms(s: SteinerSystem) -> AutomorphismResult:
    """Point permutations preserving the blocks, with orbit-pruned backtrack.

    Levels are processed from the deepest base point up; at level i only
    images outside the orbit already generated by automorphisms fixing
    0..i-1 are tried, so the final orbits give the order.
    """
    d = _Design(s)
    gens: list[tuple] = []
    sizes = [1] * s.c
    searches = 0
    for i in reversed(range(s.c)):
        fixing = [g for g in gens if all(g[x] == x for x in range(i))]
        orbit = _orbit(i, fixing)
        for y in range(i, s.c):
            if y in orbit:
                continue
            searches += 1
            fixed = {x: x for x in range(i)}
            fixed[i] = y
            g = d.complete(fixed)
            if g is not None:
                gens.append(g)
                fixing.append(g)
                orbit = _orbit(i, fixing)
        sizes[i] = len(orbit)
    group = PermGroup(s.c, [Perm(g) for g in gens])
    return AutomorphismResult(group, [z for z in sizes if z > 1] or [1], searches)


def maps_blocks_to_blocks(s: SteinerSystem, rows: np.ndarray) -> bool:
    """Every row (a point permutation) sends every block to a block."""
    rows = np.asarray(rows, dtype=np.int64)
    valid = np.array(sorted(s.block_masks()), dtype=np.int64)
    for blk in s.blocks:
        img = np.bitwise_or.reduce(np.left_shift(1, rows[:, list(blk)]), axis=1)
        pos = np.minimum(np.searchsorted(valid, img), valid.size - 1)
        if not np.all(valid[pos] == img):
            return False
    return True


# ------------------------------------------------------------------ M22


def normal_closure_perm(degree: int, seeds, ambient_gens) -> PermGroup:
    """Normal closure of ``seeds`` under conjugation by ``ambient_gens``."""
    gens = [tuple(x) for x in seeds if tuple(x) != tuple(range(degree))]
    chain = StabChain(degree, gens)
    queue = list(gens)
    amb = [tuple(a) for a in ambient_gens]
    while queue:
        n = queue.pop()
        for a in amb:
            c = _mul(_mul(a, n), _inv(a))
            if not chain.contains(c):
                gens.append(c)
                queue.append(c)
                chain = StabChain(degree, gens)
    group = PermGroup(degree, [Perm(g) for g in gens])
    group.__dict__["chain"] = chain
    return group


def derived_perm_group(g: PermGroup) -> PermGroup:
    gs = [p.images for p in g.generators]
    comms = []
    for a, b in itertools.combinations(gs, 2):
        comms.append(_mul(_mul(a, b), _mul(_inv(a), _inv(b))))
    return normal_closure_perm(g.degree, comms, gs)


def mathieu_m22(aut: PermGroup) -> PermGroup:
    m22 = derived_perm_group(aut)
    m22.name = "M22"
    if m22.order() != 443520:
        raise UnexpectedStructure(f"derived subgroup has order {m22.order()}")
    if aut.order() != 2 * m22.order():
        raise UnexpectedStructure("derived subgroup does not have index 2")
    return m22


def is_perfect_perm(g: PermGroup) -> bool:
    return derived_perm_group(g).order() == g.order()


def hexad_stabilizer(m22: PermGroup, block) -> PermGroup:
    h = set_stabilizer(m22, block)
    h.name = "hexad stabilizer"
    return h


# ------------------------------------------------------------------ bridge


@dataclass
class BridgeCertificate:
    tier: int | None  # 1 direct isomorphism, 2 structural, None neither
    fingerprints_equal: bool
    both_perfect: bool
    minimal_normal: tuple[str, str]
    quotients: tuple[str, str]
    orbit_signatures: tuple[tuple, tuple]
    both_split: bool
    isomorphism: object = field(repr=False, default=None)
    groups: tuple = field(repr=False, default=())

    @property
    def structural(self) -> bool:
        return (
            self.fingerprints_equal
            and self.both_perfect
            and self.minimal_normal == ("Z2^4", "Z2^4")
            and self.quotients == ("A6", "A6")
            and self.orbit_signatures[0] == self.orbit_signatures[1]
            and self.both_split
        )


def _structure(g):
    from .groups import NotFound, complement_search, is_perfect, normal_subgroups, quotient
    from .ident import module_orbit_signature, recognize

    normals = [n for n in normal_subgroups(g) if 1 < n.order < g.order]
    minimal = [n for n in normals if not any(m.order < n.order and m.issubset(n) for m in normals)]
    if len(minimal) != 1:
        return is_perfect(g), "several", "Unknown", (), False
    n = minimal[0]
    try:
        complement_search(g, n)
        split = True
    except NotFound:
        split = False
    return is_perfect(g), recognize(n.as_group()), recognize(quotient(g, n)), module_orbit_signature(g, n), split


def bridge_check(u6_clifford, u6_hexad, budget: int | None = None) -> BridgeCertificate:
    from .ident import IsoCertificate, fingerprint, isomorphic

    a = u6_clifford.materialize()
    b = u6_hexad.materialize()
    pa, na, qa, sa, xa = _structure(a)
    pb, nb, qb, sb, xb = _structure(b)
    cert = BridgeCertificate(
        tier=None,
        fingerprints_equal=fingerprint(a) == fingerprint(b),
        both_perfect=pa and pb,
        minimal_normal=(na, nb),
        quotients=(qa, qb),
        orbit_signatures=(sa, sb),
        both_split=xa and xb,
    )
    iso = isomorphic(a, b, budget)
    cert.isomorphism = iso
    cert.groups = (a, b)
    if isinstance(iso, IsoCertificate) and iso.verified:
        cert.tier = 1
    elif cert.structural:
        cert.tier = 2
    return cert
