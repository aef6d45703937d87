"""Permutation groups of small degree.

Permutations compose like functions: ``(p * q)(i) == p(q(i))``.  The
stabilizer chain uses a fixed base policy (each new base point is the
smallest point moved by the element that forces the new level), so every
run produces the same chain.
"""

from __future__ import annotations

import re
from functools import cached_property
from typing import Callable, NamedTuple

import numpy as np

from .groups import FiniteGroup, Subgroup, check_hom, extend_hom

ENUMERATION_LIMIT = 10**7


class DegreeMismatch(ValueError):
    pass


class TooLarge(ValueError):
    pass


class ActionInconsistent(ValueError):
    pass


class Perm:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a permutation")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> Perm:
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a] = b
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Perm) -> Perm:
        if self.degree != other.degree:
            raise DegreeMismatch("degrees differ")
        p = self.images
        return Perm(p[j] for j in other.images)

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k: int) -> Perm:
        result, base = Perm.identity(self.degree), self if k >= 0 else self.inverse()
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def moved_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm({list(self.images)})"

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles()) or "()"

    def to_text(self) -> str:
        return "p: " + " ".join(f"{i}→{j}" for i, j in enumerate(self.images))

    @classmethod
    def from_text(cls, line: str) -> Perm:
        body = line.strip()
        if body.startswith("p:"):
            body = body[2:]
        pairs = re.findall(r"(\d+)\s*→\s*(\d+)", body)
        img = [0] * len(pairs)
        for a, b in pairs:
            img[int(a)] = int(b)
        return cls(img)


def write_generators(perms, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in perms:
            fh.write(p.to_text() + "\n")


def read_generators(path) -> list[Perm]:
    with open(path, encoding="utf-8") as fh:
        return [Perm.from_text(line) for line in fh if line.strip()]


# --------------------------------------------------------------- chain


def _mul(p, q):
    return tuple(p[j] for j in q)


def _inv(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


class StabChain:
    """Base, strong generating set and one transversal per base point."""

    def __init__(self, degree: int, generators):
        self.degree = degree
        self.ident = tuple(range(degree))
        self.base: list[int] = []
        self.strong: list[tuple] = []
        self.level_gens: list[list[tuple]] = []
        self.trans: list[dict[int, tuple]] = []
        for g in generators:
            g = tuple(g)
            if g != self.ident and g not in self.strong:
                self._add_strong(g)
        self._refresh()
        self._complete()

    def transversal_sizes(self) -> list[int]:
        return [len(t) for t in self.trans]

    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out

    def _add_strong(self, g) -> None:
        self.strong.append(g)
        if all(g[b] == b for b in self.base):
            self.base.append(next(p for p in range(self.degree) if g[p] != p))

    def _refresh(self) -> None:
        self.level_gens, self.trans = [], []
        for i, b in enumerate(self.base):
            fixed = self.base[:i]
            gens = [s for s in self.strong if all(s[x] == x for x in fixed)]
            trans = {b: self.ident}
            queue = [b]
            for pt in queue:
                u = trans[pt]
                for s in gens:
                    q = s[pt]
                    if q not in trans:
                        trans[q] = _mul(s, u)
                        queue.append(q)
            self.level_gens.append(gens)
            self.trans.append(trans)

    def sift(self, g, start: int = 0):
        for i in range(start, len(self.base)):
            u = self.trans[i].get(g[self.base[i]])
            if u is None:
                return g, i
            g = _mul(_inv(u), g)
        return g, len(self.base)

    def _first_failure(self, i: int):
        trans = self.trans[i]
        for pt, u in trans.items():
            for s in self.level_gens[i]:
                h = _mul(_inv(trans[s[pt]]), _mul(s, u))
                if h == self.ident:
                    continue
                residue, depth = self.sift(h, i + 1)
                if residue != self.ident:
                    return residue, depth
        return None

    def _complete(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            bad = self._first_failure(i)
            if bad is None:
                i -= 1
                continue
            residue, depth = bad
            self._add_strong(residue)
            self._refresh()
            i = depth

    def contains(self, g) -> bool:
        residue, _ = self.sift(tuple(g))
        return residue == self.ident

    def enumerate(self) -> np.ndarray:
        """All elements as rows u_0 u_1 ... u_k (first row is the identity)."""
        dtype = np.int8 if self.degree < 128 else np.int16
        arr = np.array([self.ident], dtype=dtype)
        for b, trans in zip(reversed(self.base), reversed(self.trans)):
            ts = sorted(trans.items(), key=lambda kv: (kv[0] != b, kv[0]))
            parts = [np.asarray(u, dtype=dtype)[arr] for _, u in ts]
            arr = np.concatenate(parts)
        return arr


class PermGroup:
    def __init__(self, degree: int, generators=(), name: str = ""):
        self.degree = int(degree)
        gens = []
        for g in generators:
            g = g if isinstance(g, Perm) else Perm(g)
            if g.degree != self.degree:
                raise DegreeMismatch("generator degree differs from group degree")
            gens.append(g)
        self.generators = gens
        self.name = name
        self._elements = None

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<PermGroup{label} degree {self.degree} with {len(self.generators)} generators>"

    @cached_property
    def chain(self) -> StabChain:
        return StabChain(self.degree, [g.images for g in self.generators])

    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, p: Perm) -> bool:
        return membership(self, p)

    def orbit(self, point: int) -> list[int]:
        seen = [point]
        known = {point}
        for x in seen:
            for g in self.generators:
                y = g(x)
                if y not in known:
                    known.add(y)
                    seen.append(y)
        return sorted(seen)

    def set_orbit(self, s) -> list[frozenset]:
        start = frozenset(s)
        seen = [start]
        known = {start}
        for x in seen:
            for g in self.generators:
                y = frozenset(g(i) for i in x)
                if y not in known:
                    known.add(y)
                    seen.append(y)
        return seen

    def element_array(self) -> np.ndarray:
        if self._elements is None:
            if self.order() > ENUMERATION_LIMIT:
                raise TooLarge(f"order {self.order()} exceeds enumeration limit")
            self._elements = self.chain.enumerate()
        return self._elements

    def as_finite_group(self) -> PermFiniteGroup:
        if "_fg" not in self.__dict__:
            arr = self.element_array()
            self._fg = PermFiniteGroup(arr, base=self.chain.base, generator_perms=self.generators, name=self.name)
        return self._fg

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree


def schreier_sims(g: PermGroup) -> StabChain:
    return g.chain


def order(g: PermGroup) -> int:
    return g.order()


def membership(g: PermGroup, p: Perm) -> bool:
    if p.degree != g.degree:
        raise DegreeMismatch(f"permutation of degree {p.degree} in group of degree {g.degree}")
    return g.chain.contains(p.images)


def brute_force_order(g: PermGroup, limit: int = 10**6) -> int:
    """Closure by breadth-first search; independent of the chain."""
    ident = tuple(range(g.degree))
    seen = {ident}
    frontier = [ident]
    gens = [s.images for s in g.generators]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = _mul(s, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > limit:
            raise TooLarge("brute-force closure limit exceeded")
        frontier = nxt
    return len(seen)


def symmetric_group(n: int) -> PermGroup:
    if not 2 <= n <= 24:
        raise ValueError("2 <= n <= 24")
    gens = [Perm.from_cycles(n, [[0, 1]])]
    if n > 2:
        gens.append(Perm.from_cycles(n, [list(range(n))]))
    return PermGroup(n, gens, name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if not 2 <= n <= 24:
        raise ValueError("2 <= n <= 24")
    gens = [Perm.from_cycles(n, [[0, 1, k]]) for k in range(2, n)]
    return PermGroup(n, gens, name=f"A{n}")


def greedy_perm_generators(rows: np.ndarray, degree: int) -> list[Perm]:
    """Generators for the group whose elements are ``rows``, index order."""
    gens: list[Perm] = []
    chain = StabChain(degree, [])
    target = rows.shape[0]
    for r in rows:
        if chain.order() == target:
            break
        t = tuple(int(x) for x in r)
        if not chain.contains(t):
            gens.append(Perm(t))
            chain = StabChain(degree, [p.images for p in gens])
    return gens


def set_stabilizer(g: PermGroup, s) -> PermGroup:
    """Setwise stabilizer of ``s``."""
    s = sorted(set(int(x) for x in s))
    if g.order() < ENUMERATION_LIMIT:
        arr = g.element_array()
        mask = np.isin(arr[:, s], s).all(axis=1) if s else np.ones(arr.shape[0], dtype=bool)
        rows = arr[mask]
    else:
        rows = np.array(_backtrack_set_stabilizer(g.chain, set(s)), dtype=np.int16)
    gens = greedy_perm_generators(rows, g.degree)
    h = PermGroup(g.degree, gens, name=f"Stab({g.name})" if g.name else "")
    h._elements = None
    h._stab_rows = rows
    return h


def _backtrack_set_stabilizer(chain: StabChain, s: set) -> list[tuple]:
    # images of base points are fixed once the prefix u_0..u_i is chosen
    out = []

    def walk(i, prefix):
        if i == len(chain.base):
            out.append(prefix)
            return
        b = chain.base[i]
        for _, u in sorted(chain.trans[i].items()):
            g = _mul(prefix, u)
            if (b in s) != (g[b] in s):
                continue
            walk(i + 1, g)

    walk(0, chain.ident)
    return [g for g in out if all(g[x] in s for x in s)]


# ------------------------------------------------------- as abstract group


class PermFiniteGroup(FiniteGroup):
    """Group of permutation rows; element i is ``perms[i]`` (row 0 should be identity)."""

    def __init__(self, perms: np.ndarray, base=None, generator_perms=None, labels=None, name: str = ""):
        perms = np.asarray(perms)
        self.perms = perms
        self.degree = perms.shape[1]
        self._radix_base(base)
        ident = self.index_of_rows(np.arange(self.degree)[None, :])[0]
        gens = None
        if generator_perms is not None:
            rows = np.array([p.images if isinstance(p, Perm) else p for p in generator_perms]).reshape(-1, self.degree)
            gens = [int(x) for x in self.index_of_rows(rows)] if len(rows) else []
            gens = [x for x in dict.fromkeys(gens) if x != ident]
        super().__init__(perms.shape[0], ident, gens, labels, name)

    def _radix_base(self, base) -> None:
        cols: list[int] = []
        n = self.perms.shape[0]
        candidates = list(base or []) + [c for c in range(self.degree) if c not in (base or [])]
        keys = np.zeros(n, dtype=np.int64)
        for c in candidates:
            if np.unique(keys).size == n:
                break
            if (keys.max(initial=0) + 1) * self.degree >= 2**62:
                raise OverflowError("base too long for 64-bit keys")
            keys = keys * self.degree + self.perms[:, c].astype(np.int64)
            cols.append(c)
        if np.unique(keys).size != n:
            raise ValueError("rows are not distinct permutations")
        self._cols = np.array(cols, dtype=np.int64)
        self._order_idx = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._order_idx]

    def _keys(self, rows: np.ndarray) -> np.ndarray:
        keys = np.zeros(rows.shape[0], dtype=np.int64)
        for c in self._cols:
            keys = keys * self.degree + rows[:, c].astype(np.int64)
        return keys

    def index_of_rows(self, rows: np.ndarray, check: bool = False) -> np.ndarray:
        rows = np.asarray(rows)
        pos = np.searchsorted(self._sorted_keys, self._keys(rows))
        pos = np.minimum(pos, self._sorted_keys.size - 1)
        idx = self._order_idx[pos]
        if check:
            ok = np.all(self.perms[idx] == rows, axis=1)
            idx = np.where(ok, idx, -1)
        return idx

    def index_of(self, p: Perm) -> int | None:
        i = int(self.index_of_rows(np.array([p.images]), check=True)[0])
        return None if i < 0 else i

    def perm(self, i: int) -> Perm:
        return Perm(self.perms[int(i)])

    def _mul_flat(self, a, b):
        rows = np.take_along_axis(self.perms[a], self.perms[b].astype(np.int64), axis=1)
        return self.index_of_rows(rows)

    def _compute_inverse(self):
        return self.index_of_rows(np.argsort(self.perms, axis=1))


def as_finite_group(g: PermGroup) -> PermFiniteGroup:
    if g.order() > ENUMERATION_LIMIT:
        raise TooLarge(f"order {g.order()} exceeds enumeration limit")
    rows = getattr(g, "_stab_rows", None)
    if rows is not None and "_fg" not in g.__dict__:
        ident_first = np.lexsort(rows.T[::-1])
        rows = rows[ident_first]
        g._fg = PermFiniteGroup(rows, base=g.chain.base, generator_perms=g.generators, name=g.name)
    return g.as_finite_group()


def perm_group_from_rows(rows: np.ndarray, name: str = "") -> PermGroup:
    rows = np.asarray(rows)
    gens = greedy_perm_generators(rows, rows.shape[1])
    h = PermGroup(rows.shape[1], gens, name=name)
    h._stab_rows = rows
    return h


# ------------------------------------------------------ action homomorphism


class ActionResult(NamedTuple):
    image: PermGroup
    kernel: Subgroup
    perms: np.ndarray  # row i is the permutation induced by element i


def _compose_rows(a, b):
    return np.take_along_axis(a, b, axis=-1)


def action_homomorphism(
    g: FiniteGroup,
    action: Callable[[int, int], int],
    degree: int,
    spot_checks: int = 2000,
    seed: int = 0,
) -> ActionResult:
    """Permutation image and kernel of a group action given pointwise.

    ``action(x, p)`` is evaluated on generators (and a deterministic sample
    of other elements); everything else follows by composition.
    """
    gens = g.generators
    gen_rows = np.array([[action(s, p) for p in range(degree)] for s in gens], dtype=np.int64).reshape(-1, degree)
    for r in gen_rows:
        if sorted(r.tolist()) != list(range(degree)):
            raise ActionInconsistent("a generator does not act as a permutation")
    ident_row = np.arange(degree)
    rows = extend_hom(g, gen_rows, _compose_rows, ident_row)
    if not check_hom(g, rows, _compose_rows):
        raise ActionInconsistent("action is not compatible with the group law")
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, g.order, size=min(spot_checks, g.order * degree))
    ps = rng.integers(0, degree, size=xs.size)
    for x, p in zip(xs.tolist(), ps.tolist()):
        if action(x, p) != rows[x, p]:
            raise ActionInconsistent(f"action disagrees at element {x}, point {p}")
    kernel = Subgroup(g, np.flatnonzero(np.all(rows == ident_row, axis=1)))
    uniq = np.unique(rows, axis=0)
    order_first = np.lexsort(uniq.T[::-1])
    uniq = uniq[order_first]
    image = PermGroup(degree, [Perm(r) for r in gen_rows if not np.array_equal(r, ident_row)])
    image._stab_rows = uniq
    if image.order() != uniq.shape[0]:
        raise ActionInconsistent("image enumeration disagrees with its stabilizer chain")
    return ActionResult(image, kernel, rows)
