"""Abstract finite groups on element indices.

Every group here is a set ``0 .. order-1`` with vectorized ``mul`` and
``inv``.  Backends differ only in how a product is realized: a Cayley
table, permutation composition, a matrix product, or a product of coset
representatives.  The structure algorithms below only ever call ``mul``.

Products are composition of maps: ``mul(a, b)`` acts as ``b`` first and
then ``a``, matching matrix products ``A @ B``.
"""

from __future__ import annotations

import hashlib
import itertools
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

TABLE_LIMIT = 6000


class NotNormal(ValueError):
    pass


class NotFound(Exception):
    """A complement search ran out of candidates or budget.

    ``exhausted`` is True when every candidate was tried.  A complement
    would contain exactly one corrected preimage of each quotient generator
    and be generated by them, so an exhausted search rules one out.
    """

    def __init__(self, message: str, attempts: int, exhausted: bool):
        super().__init__(message)
        self.attempts = attempts
        self.exhausted = exhausted


class FiniteGroup:
    """Base class; subclasses provide ``_mul_flat`` on 1-d index arrays."""

    def __init__(self, order: int, identity: int = 0, generators=None, labels=None, name: str = ""):
        self.order = int(order)
        self.identity = int(identity)
        self._generators = None if generators is None else [int(x) for x in generators]
        self.labels = labels
        self.name = name

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<{type(self).__name__}{label} of order {self.order}>"

    def _mul_flat(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def mul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        shape = a.shape
        out = self._mul_flat(a.ravel(), b.ravel())
        return out.reshape(shape)

    def _compute_inverse(self) -> np.ndarray:
        # x^-1 = x^(o(x)-1)
        elems = np.arange(self.order)
        cur = elems.copy()
        prev = np.full(self.order, self.identity)
        inv = np.full(self.order, -1)
        live = np.ones(self.order, dtype=bool)
        while live.any():
            done = live & (cur == self.identity)
            inv[done] = prev[done]
            live &= ~done
            prev = cur
            cur = np.where(live, self.mul(cur, elems), cur)
        return inv

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.asarray(self._compute_inverse(), dtype=np.int64)

    def inv(self, a) -> np.ndarray:
        return self.inverse[np.asarray(a, dtype=np.int64)]

    def conj(self, x, g) -> np.ndarray:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.order)

    @cached_property
    def element_orders(self) -> np.ndarray:
        elems = np.arange(self.order)
        orders = np.zeros(self.order, dtype=np.int64)
        cur = elems.copy()
        k = 1
        while True:
            hit = (orders == 0) & (cur == self.identity)
            orders[hit] = k
            live = orders == 0
            if not live.any():
                return orders
            cur[live] = self.mul(cur[live], elems[live])
            k += 1

    @property
    def generators(self) -> list[int]:
        if self._generators is None:
            self._generators = greedy_generators(self)
        return self._generators

    def power(self, x, k: int) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        result = np.full(x.shape, self.identity)
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def is_abelian(self) -> bool:
        gens = np.asarray(self.generators, dtype=np.int64)
        if gens.size == 0:
            return True
        return bool(np.all(self.mul(gens[:, None], gens[None, :]) == self.mul(gens[None, :], gens[:, None])))

    @cached_property
    def word_tree(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        return build_word_tree(self, self.generators)

    @cached_property
    def table(self) -> np.ndarray:
        """Materialized Cayley table (only for order <= TABLE_LIMIT)."""
        if self.order > TABLE_LIMIT:
            raise ValueError(f"refusing to tabulate a group of order {self.order}")
        elems = np.arange(self.order)
        dtype = np.int16 if self.order < 2**15 else np.int32
        tab = np.empty((self.order, self.order), dtype=dtype)
        for i in range(self.order):
            tab[i] = self.mul(i, elems)
        return tab

    def materialize(self) -> FiniteGroup:
        """A table-backed copy when small enough, else self."""
        if isinstance(self, TableGroup) or self.order > TABLE_LIMIT:
            return self
        return TableGroup(self.table, self.identity, generators=self.generators, labels=self.labels, name=self.name)

    def digest(self) -> str:
        """Fingerprint of this concrete indexed group (not an isomorphism invariant)."""
        h = hashlib.sha256()
        h.update(f"{self.order}:{self.identity}:".encode())
        elems = np.arange(self.order)
        for s in self.generators:
            h.update(np.asarray(self.mul(s, elems), dtype=np.int64).tobytes())
        return h.hexdigest()[:16]


class TableGroup(FiniteGroup):
    def __init__(self, table, identity: int = 0, generators=None, labels=None, name: str = ""):
        table = np.asarray(table)
        super().__init__(table.shape[0], identity, generators, labels, name)
        self._table = table

    @cached_property
    def table(self) -> np.ndarray:
        return self._table

    def _mul_flat(self, a, b):
        return self._table[a, b].astype(np.int64)

    def _compute_inverse(self):
        rows, cols = np.nonzero(self._table == self.identity)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        return inv


class Subgroup:
    """Sorted member indices of a parent group."""

    def __init__(self, parent: FiniteGroup, members, gens=None):
        self.parent = parent
        self.members = np.unique(np.asarray(members, dtype=np.int64))
        self._gens = None if gens is None else [int(x) for x in gens]

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members.tobytes()))

    def key(self) -> bytes:
        return self.members.tobytes()

    def issubset(self, other: Subgroup) -> bool:
        return bool(other.mask[self.members].all())

    def intersection(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.parent, self.members[other.mask[self.members]])

    @property
    def gens(self) -> list[int]:
        if self._gens is None:
            self._gens = [int(self.members[x]) for x in self.as_group().generators]
        return self._gens

    def as_group(self) -> SubgroupGroup:
        if "_group" not in self.__dict__:
            self._group = SubgroupGroup(self)
        return self._group

    def is_normal(self) -> bool:
        g = self.parent
        gens = np.asarray(g.generators, dtype=np.int64)
        if gens.size == 0:
            return True
        conj = g.conj(self.members[None, :], gens[:, None])
        return bool(self.mask[conj].all())

    def dumps(self) -> str:
        lines = [f"# parent {self.parent.digest()} order {self.parent.order} members {self.order}"]
        lines += [str(int(x)) for x in self.members]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, parent: FiniteGroup, text: str) -> Subgroup:
        head, *rest = text.strip().splitlines()
        fields = head.split()
        if fields[:2] != ["#", "parent"] or fields[2] != parent.digest():
            raise ValueError("subgroup file belongs to a different parent group")
        return cls(parent, [int(x) for x in rest])


class SubgroupGroup(FiniteGroup):
    """A subgroup re-indexed as a group in its own right (index i <-> members[i])."""

    def __init__(self, sub: Subgroup):
        parent = sub.parent
        self.sub = sub
        self.pos = np.full(parent.order, -1, dtype=np.int64)
        self.pos[sub.members] = np.arange(sub.order)
        gens = None if sub._gens is None else [int(self.pos[x]) for x in sub._gens]
        labels = None
        if parent.labels is not None:
            labels = [parent.labels[int(x)] for x in sub.members]
        super().__init__(sub.order, int(self.pos[parent.identity]), gens, labels)

    def _mul_flat(self, a, b):
        m = self.sub.members
        return self.pos[self.sub.parent.mul(m[a], m[b])]

    def _compute_inverse(self):
        return self.pos[self.sub.parent.inverse[self.sub.members]]

    def lift(self, x) -> np.ndarray:
        return self.sub.members[np.asarray(x, dtype=np.int64)]


class QuotientGroup(FiniteGroup):
    """Cosets xN indexed by ascending least member; ``reps[i]`` is that least member."""

    def __init__(self, parent: FiniteGroup, normal: Subgroup, reps: np.ndarray, coset_of: np.ndarray):
        self.parent = parent
        self.normal = normal
        self.reps = reps
        self.coset_of = coset_of
        gens = []
        for s in parent.generators:
            c = int(coset_of[s])
            if c != coset_of[parent.identity] and c not in gens:
                gens.append(c)
        labels = None
        if parent.labels is not None:
            labels = [parent.labels[int(r)] for r in reps]
        super().__init__(reps.size, int(coset_of[parent.identity]), gens, labels)

    def _mul_flat(self, a, b):
        return self.coset_of[self.parent.mul(self.reps[a], self.reps[b])]

    def _compute_inverse(self):
        return self.coset_of[self.parent.inverse[self.reps]]

    def project(self, x) -> np.ndarray:
        return self.coset_of[np.asarray(x, dtype=np.int64)]


# ---------------------------------------------------------------- algorithms


def build_word_tree(g: FiniteGroup, gens) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """BFS levels (child, parent, generator position) with child = gens[pos] * parent."""
    gens = np.asarray(list(gens), dtype=np.int64)
    seen = np.zeros(g.order, dtype=bool)
    seen[g.identity] = True
    frontier = np.array([g.identity])
    levels = []
    while frontier.size and gens.size:
        prods = g.mul(gens[:, None], frontier[None, :])
        kpos = np.broadcast_to(np.arange(gens.size)[:, None], prods.shape).ravel()
        parents = np.broadcast_to(frontier[None, :], prods.shape).ravel()
        prods = prods.ravel()
        _, first = np.unique(prods, return_index=True)
        first = np.sort(first)
        fresh = first[~seen[prods[first]]]
        child = prods[fresh]
        seen[child] = True
        levels.append((child, parents[fresh], kpos[fresh]))
        frontier = child
    if not seen.all():
        raise ValueError("generators do not generate the group")
    return levels


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, [g.identity], gens=[])


def whole_group(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, np.arange(g.order), gens=g.generators)


def subgroup_generated(g: FiniteGroup, seeds, limit: int | None = None) -> Subgroup | None:
    """Least subgroup containing ``seeds``; None if it would exceed ``limit`` elements."""
    seeds = np.unique(np.asarray(list(seeds), dtype=np.int64))
    seeds = seeds[seeds != g.identity]
    mask = np.zeros(g.order, dtype=bool)
    mask[g.identity] = True
    count = 1
    frontier = np.array([g.identity])
    while frontier.size and seeds.size:
        cand = np.unique(g.mul(frontier[:, None], seeds[None, :]))
        new = cand[~mask[cand]]
        mask[new] = True
        count += new.size
        if limit is not None and count > limit:
            return None
        frontier = new
    return Subgroup(g, np.flatnonzero(mask), gens=seeds.tolist())


def _grow(g: FiniteGroup, sub: Subgroup, candidates, gens: list[int]) -> Subgroup:
    # add candidates one at a time until all are members
    candidates = np.asarray(candidates, dtype=np.int64)
    while True:
        outside = candidates[~sub.mask[candidates]]
        if outside.size == 0:
            return sub
        gens.append(int(outside[0]))
        sub = subgroup_generated(g, gens)


def normal_closure(g: FiniteGroup, seeds) -> Subgroup:
    gens: list[int] = []
    sub = _grow(g, trivial_subgroup(g), seeds, gens)
    ggens = np.asarray(g.generators, dtype=np.int64)
    while ggens.size:
        hg = np.asarray(sub.gens, dtype=np.int64)
        if hg.size == 0:
            break
        conj = g.conj(hg[None, :], ggens[:, None]).ravel()
        if sub.mask[conj].all():
            break
        sub = _grow(g, sub, conj, gens)
    return Subgroup(g, sub.members, gens=gens)


def center(g: FiniteGroup) -> Subgroup:
    elems = np.arange(g.order)
    central = np.ones(g.order, dtype=bool)
    for s in g.generators:
        central &= g.mul(elems, s) == g.mul(s, elems)
    return Subgroup(g, np.flatnonzero(central))


def quotient(g: FiniteGroup, n: Subgroup) -> QuotientGroup:
    if n.parent is not g:
        raise ValueError("subgroup belongs to a different group")
    if not n.is_normal():
        raise NotNormal("subgroup is not normal")
    elems = np.arange(g.order)
    if n.order * n.order <= g.order:
        least = elems.copy()
        for m in n.members:
            np.minimum(least, g.mul(elems, m), out=least)
    else:
        least = np.full(g.order, -1, dtype=np.int64)
        for x in range(g.order):
            if least[x] < 0:
                least[g.mul(x, n.members)] = x
    reps = np.unique(least)
    coset_of = np.searchsorted(reps, least)
    return QuotientGroup(g, n, reps, coset_of)


def relative_quotient(big: Subgroup, small: Subgroup) -> QuotientGroup:
    """big/small for nested subgroups of one group, small normal in big."""
    if not small.issubset(big):
        raise ValueError("subgroups are not nested")
    h = big.as_group()
    return quotient(h, Subgroup(h, h.pos[small.members]))


def conjugacy_classes(g: FiniteGroup) -> list[np.ndarray]:
    """Classes as sorted index arrays, ordered by least member (identity first)."""
    elems = np.arange(g.order)
    rows, cols = [], []
    for s in g.generators:
        rows.append(elems)
        cols.append(g.conj(elems, s))
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(g.order, g.order))
    _, labels = connected_components(graph, directed=True, connection="weak")
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    classes = np.split(order, splits)
    classes = [np.sort(c) for c in classes]
    classes.sort(key=lambda c: int(c[0]))
    return classes


def class_index(g: FiniteGroup, classes) -> np.ndarray:
    idx = np.empty(g.order, dtype=np.int64)
    for k, c in enumerate(classes):
        idx[c] = k
    return idx


def normal_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups: joins of normal closures of conjugacy classes."""
    found: dict[bytes, Subgroup] = {}

    def add(sub):
        k = sub.key()
        if k not in found:
            found[k] = sub
            return True
        return False

    add(trivial_subgroup(g))
    for cls in conjugacy_classes(g):
        if cls[0] == g.identity and cls.size == 1:
            continue
        add(normal_closure(g, cls))
    changed = True
    while changed:
        changed = False
        subs = sorted(found.values(), key=lambda s: (s.order, s.members.tolist()))
        for a, b in itertools.combinations(subs, 2):
            if a.issubset(b) or b.issubset(a):
                continue
            joined = subgroup_generated(g, a.gens + b.gens)
            if add(Subgroup(g, joined.members, gens=a.gens + b.gens)):
                changed = True
    return sorted(found.values(), key=lambda s: (s.order, s.members.tolist()))


def commutator(g: FiniteGroup, x, y) -> np.ndarray:
    """x y x^-1 y^-1."""
    return g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)))


def derived_subgroup(g: FiniteGroup) -> Subgroup:
    gens = np.asarray(g.generators, dtype=np.int64)
    if gens.size < 2:
        return trivial_subgroup(g)
    comms = commutator(g, gens[:, None], gens[None, :]).ravel()
    comms = comms[comms != g.identity]
    if comms.size == 0:
        return trivial_subgroup(g)
    return normal_closure(g, comms)


def is_perfect(g: FiniteGroup) -> bool:
    return derived_subgroup(g).order == g.order


def derived_series_orders(g: FiniteGroup) -> list[int]:
    orders = [g.order]
    cur = g
    while True:
        d = derived_subgroup(cur)
        if d.order == cur.order:
            return orders
        orders.append(d.order)
        if d.order == 1:
            return orders
        cur = d.as_group()


def greedy_generators(g: FiniteGroup) -> list[int]:
    """Small generating set, picking elements of largest order first."""
    if g.order == 1:
        return []
    orders = g.element_orders
    ranked = np.lexsort((np.arange(g.order), -orders))
    gens: list[int] = []
    sub = trivial_subgroup(g)
    for x in ranked:
        if sub.order == g.order:
            break
        if sub.mask[x]:
            continue
        gens.append(int(x))
        sub = subgroup_generated(g, gens)
    return gens


def complement_search(g: FiniteGroup, n: Subgroup, budget: int | None = None) -> Subgroup:
    """A subgroup K with |K||N| = |G| and K & N = 1, or raise NotFound.

    Preimages of a generating set of G/N are corrected by every tuple of
    N-elements in index order.
    """
    q = quotient(g, n)
    qgens = q.generators
    if not qgens:
        return trivial_subgroup(g)
    pre = q.reps[np.asarray(qgens)]
    attempts = 0
    for combo in itertools.product(n.members.tolist(), repeat=len(qgens)):
        if budget is not None and attempts >= budget:
            raise NotFound("complement search budget exhausted", attempts, exhausted=False)
        attempts += 1
        seeds = g.mul(pre, np.asarray(combo))
        k = subgroup_generated(g, seeds, limit=q.order)
        if k is None or k.order != q.order:
            continue
        if int(n.mask[k.members].sum()) == 1:
            return k
    raise NotFound("no complement among corrected preimages", attempts, exhausted=True)


def extend_hom(g: FiniteGroup, gen_images: np.ndarray, mul, identity_image, tree=None) -> np.ndarray:
    """Images of every element under the map fixed on the generators.

    The generators are ``g.generators`` unless a ``tree`` from
    :func:`build_word_tree` is passed.  ``mul`` multiplies arrays of target
    elements; the result is only a homomorphism if :func:`check_hom` agrees.
    """
    gen_images = np.asarray(gen_images)
    identity_image = np.asarray(identity_image)
    phi = np.empty((g.order,) + identity_image.shape, dtype=gen_images.dtype)
    phi[g.identity] = identity_image
    for child, parent, kpos in (g.word_tree if tree is None else tree):
        phi[child] = mul(gen_images[kpos], phi[parent])
    return phi


def check_hom(g: FiniteGroup, phi: np.ndarray, mul, gens=None) -> bool:
    """phi(s x) == phi(s) phi(x) for every generator s and every x."""
    elems = np.arange(g.order)
    for s in g.generators if gens is None else gens:
        lhs = phi[g.mul(s, elems)]
        rhs = mul(np.broadcast_to(phi[s], phi.shape), phi)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def check_group_axioms(g: FiniteGroup, samples: int = 1000, seed: int = 0) -> bool:
    elems = np.arange(g.order)
    if not np.array_equal(g.mul(g.identity, elems), elems):
        return False
    if not np.array_equal(g.mul(elems, g.identity), elems):
        return False
    if not np.all(g.mul(elems, g.inverse) == g.identity):
        return False
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, g.order, size=(3, samples))
    return bool(np.array_equal(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z))))


# ----------------------------------------------------------- small references


def cyclic_group(n: int) -> TableGroup:
    a = np.arange(n)
    gens = [1] if n > 1 else []
    return TableGroup((a[:, None] + a[None, :]) % n, 0, generators=gens, name=f"Z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> TableGroup:
    """Index (i, j) -> i * h.order + j."""
    if g.order * h.order > TABLE_LIMIT:
        raise ValueError("direct product too large to tabulate")
    gi = np.repeat(np.arange(g.order), h.order)
    hj = np.tile(np.arange(h.order), g.order)
    tab = g.mul(gi[:, None], gi[None, :]) * h.order + h.mul(hj[:, None], hj[None, :])
    gens = [int(s) * h.order + h.identity for s in g.generators]
    gens += [g.identity * h.order + int(t) for t in h.generators]
    name = f"{g.name}x{h.name}" if g.name and h.name else ""
    return TableGroup(tab, g.identity * h.order + h.identity, generators=gens, name=name)


def elementary_abelian(k: int) -> TableGroup:
    a = np.arange(2**k)
    gens = [1 << i for i in range(k)]
    return TableGroup(a[:, None] ^ a[None, :], 0, generators=gens, name=f"Z2^{k}")
