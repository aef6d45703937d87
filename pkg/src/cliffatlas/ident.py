"""Identifying abstract finite groups.

Isomorphisms are searched for as generator-image tuples.  Candidate images
are restricted to conjugacy classes with the same invariants (order, size,
power-map targets), then to those whose short words have the right orders;
surviving tuples are extended along a word tree and checked as
homomorphisms.  Because conjugating a solution gives another solution, the
first generator's image only needs to range over class representatives.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .groups import (
    FiniteGroup,
    Subgroup,
    TableGroup,
    build_word_tree,
    center,
    check_hom,
    class_index,
    conjugacy_classes,
    derived_series_orders,
    derived_subgroup,
    extend_hom,
    quotient,
)

POWER_PRIMES = (2, 3, 5)


# ------------------------------------------------------------------ invariants


@dataclass
class ClassData:
    classes: list[np.ndarray]
    index: np.ndarray  # element -> class number
    signature: list[tuple]  # per class: (order, size, power targets)


def class_data(g: FiniteGroup) -> ClassData:
    cached = getattr(g, "_class_data", None)
    if cached is not None:
        return cached
    classes = conjugacy_classes(g)
    idx = class_index(g, classes)
    orders = g.element_orders
    reps = np.array([c[0] for c in classes], dtype=np.int64)
    basic = [(int(orders[c[0]]), int(c.size)) for c in classes]
    sig = []
    for k, c in enumerate(classes):
        targets = tuple(basic[int(idx[g.power(reps[k], p)])] for p in POWER_PRIMES)
        sig.append(basic[k] + targets)
    data = ClassData(classes, idx, sig)
    g._class_data = data
    return data


def abelian_invariants(g: FiniteGroup) -> tuple[int, ...]:
    """Prime-power cyclic factors of an abelian group, from its element orders.

    The elements killed by p^k number p^(sum_i min(e_i, k)), so successive
    differences of those exponents count factors of exponent >= k.
    """
    orders = g.element_orders
    result = []
    n = g.order
    p = 2
    while n > 1:
        if n % p == 0:
            while n % p == 0:
                n //= p
            s = [0]
            k = 1
            while True:
                cnt = int(np.sum(p**k % orders == 0))
                s.append(round(math.log(cnt, p)))
                if s[-1] == s[-2]:
                    break
                k += 1
            ge = [s[j] - s[j - 1] for j in range(1, len(s))] + [0]
            for j in range(len(ge) - 1):
                result += [p ** (j + 1)] * (ge[j] - ge[j + 1])
        p += 1
    return tuple(sorted(result))


@dataclass(frozen=True)
class Fingerprint:
    order: int
    class_sizes: tuple[int, ...]
    order_histogram: tuple[tuple[int, int], ...]
    power_classes: tuple[tuple, ...]
    abelianization: tuple[int, ...]
    derived_series: tuple[int, ...]
    center_order: int

    def to_text(self) -> str:
        lines = [
            f"order {self.order}",
            "class_sizes " + " ".join(map(str, self.class_sizes)),
            "element_orders " + " ".join(f"{o}:{c}" for o, c in self.order_histogram),
            "power_classes " + " ".join(_sig_text(s) for s in self.power_classes),
            "abelianization " + (" ".join(map(str, self.abelianization)) or "1"),
            "derived_series " + " ".join(map(str, self.derived_series)),
            f"center {self.center_order}",
        ]
        return "\n".join(lines) + "\n"


def _sig_text(sig: tuple) -> str:
    return "/".join(f"{a}.{b}" for a, b in zip(sig[0::2], sig[1::2]))


def _flatten(sig: tuple) -> tuple:
    out = [sig[0], sig[1]]
    for t in sig[2:]:
        out += list(t)
    return tuple(out)


def fingerprint(g: FiniteGroup) -> Fingerprint:
    cd = class_data(g)
    orders = g.element_orders
    hist = tuple(sorted(Counter(orders.tolist()).items()))
    d = derived_subgroup(g)
    if d.order == g.order:
        ab: tuple[int, ...] = ()
    elif d.order == 1:
        ab = abelian_invariants(g)
    else:
        ab = abelian_invariants(quotient(g, d))
    return Fingerprint(
        order=g.order,
        class_sizes=tuple(sorted(int(c.size) for c in cd.classes)),
        order_histogram=hist,
        power_classes=tuple(sorted(_flatten(s) for s in cd.signature)),
        abelianization=ab,
        derived_series=tuple(derived_series_orders(g)),
        center_order=center(g).order,
    )


# ------------------------------------------------------------------ verdicts


@dataclass
class IsoCertificate:
    gen_images: list[int]
    element_map: np.ndarray = field(repr=False)
    verified: bool
    attempts: int
    tier: int = 1


@dataclass
class Refuted:
    reason: str


@dataclass
class Inconclusive:
    reason: str
    attempts: int


# ------------------------------------------------------------------ backtrack


def _short_words(k: int) -> list[tuple[int, ...]]:
    """Words in generators 0..k (signed letters +-(i+1)) used as order probes for generator k."""
    words = []
    for j in range(k):
        a, b = j + 1, k + 1
        words += [(a, b), (a, -b), (a, a, b), (a, b, b), (a, b, a, -b), (a, a, b, b), (a, b, -a, -b)]
    return words


def _eval_word(h: FiniteGroup, word, images) -> np.ndarray:
    """Evaluate a word letter by letter; images[i] may be arrays (broadcast)."""
    acc = None
    for letter in word:
        x = images[abs(letter) - 1]
        if letter < 0:
            x = h.inv(x)
        acc = x if acc is None else h.mul(acc, x)
    return acc


class _Search:
    def __init__(self, g: FiniteGroup, h: FiniteGroup, gens=None, budget: int | None = None):
        self.g, self.h = g, h
        self.gens = list(g.generators if gens is None else gens)
        self.budget = budget
        self.attempts = 0  # full extensions tried
        self.nodes = 0  # candidate images tried at any depth; the budget bounds this
        self.tree = build_word_tree(g, self.gens)
        cg, ch = class_data(g), class_data(h)
        self.cand = []
        for s in self.gens:
            sig = cg.signature[int(cg.index[s])]
            ok = [k for k, t in enumerate(ch.signature) if t == sig]
            self.cand.append(ok)
        self.hclasses = ch.classes
        self.words = [_short_words(k) for k in range(len(self.gens))]
        gorders = g.element_orders
        self.word_orders = [
            [int(gorders[int(_eval_word(g, w, self.gens))]) for w in ws] for ws in self.words
        ]
        self.horders = h.element_orders

    def _filter(self, k: int, prefix: list[int], pool: np.ndarray) -> np.ndarray:
        if not self.words[k] or pool.size == 0:
            return pool
        keep = np.ones(pool.size, dtype=bool)
        images = [np.int64(x) for x in prefix] + [pool]
        for w, o in zip(self.words[k], self.word_orders[k]):
            vals = _eval_word(self.h, w, images)
            keep &= self.horders[np.broadcast_to(vals, pool.shape)] == o
            if not keep.any():
                break
        return pool[keep]

    def _leaf(self, images: list[int]) -> np.ndarray | None:
        self.attempts += 1
        phi = extend_hom(self.g, np.asarray(images, dtype=np.int64), self.h.mul, self.h.identity, tree=self.tree)
        if not check_hom(self.g, phi, self.h.mul, gens=self.gens):
            return None
        if self.g.order == self.h.order and np.unique(phi).size != self.h.order:
            return None
        return phi

    def run(self, first_images, on_solution):
        """Depth-first over tuples; on_solution returns True to stop.  Returns False when budget ran out."""

        def rec(k: int, prefix: list[int]) -> bool | None:
            if k == len(self.gens):
                phi = self._leaf(prefix)
                return bool(phi is not None and on_solution(prefix, phi))
            if k == 0:
                pool = np.asarray(first_images, dtype=np.int64)
            else:
                pool = np.concatenate([self.hclasses[c] for c in self.cand[k]]) if self.cand[k] else np.zeros(0, np.int64)
                pool = self._filter(k, prefix, pool)
            for x in pool.tolist():
                if self.budget is not None and self.nodes >= self.budget:
                    return None
                self.nodes += 1
                r = rec(k + 1, prefix + [x])
                if r is None or r:
                    return r
            return False

        return rec(0, [])


def isomorphic(g: FiniteGroup, h: FiniteGroup, budget: int | None = None):
    """IsoCertificate, Refuted or Inconclusive."""
    if g.order != h.order:
        return Refuted("orders differ")
    if fingerprint(g) != fingerprint(h):
        return Refuted("fingerprints differ")
    if g.order == 1:
        return IsoCertificate([], np.array([h.identity]), True, 0)
    search = _Search(g, h, budget=budget)
    if not search.cand[0]:
        return Refuted("no class of the first generator's type")
    reps = [int(search.hclasses[c][0]) for c in search.cand[0]]
    found = []

    def take(images, phi):
        found.append((list(images), phi))
        return True

    status = search.run(reps, take)
    if found:
        images, phi = found[0]
        return IsoCertificate(images, phi, verify_isomorphism(g, h, phi), search.attempts)
    if status is None:
        return Inconclusive("search budget exhausted", search.attempts)
    return Refuted(f"exhaustive search over {search.attempts} generator images found no isomorphism")


def verify_isomorphism(g: FiniteGroup, h: FiniteGroup, phi: np.ndarray, exhaustive_limit: int = 10**4) -> bool:
    """Independent re-check: bijective and phi(xy) = phi(x)phi(y).

    All pairs are tested up to ``exhaustive_limit`` elements; beyond that a
    grid of 256 rows against every column.
    """
    phi = np.asarray(phi, dtype=np.int64)
    if g.order != h.order or phi.shape != (g.order,) or np.unique(phi).size != h.order:
        return False
    elems = np.arange(g.order)
    if g.order <= exhaustive_limit:
        rows = elems
    else:
        rows = np.random.default_rng(0).choice(g.order, size=256, replace=False)
    for x in rows.tolist():
        if not np.array_equal(phi[g.mul(x, elems)], h.mul(phi[x], phi)):
            return False
    return True


# ------------------------------------------------------------------ automorphisms


def _automorphisms_by_first_rep(g: FiniteGroup, budget: int | None):
    """(solutions per first-generator class rep, class sizes, search) or None on budget exhaustion."""
    search = _Search(g, g, budget=budget)
    per_class = []
    for c in search.cand[0]:
        rep = int(search.hclasses[c][0])
        sols = []

        def take(images, phi, sols=sols):
            sols.append((list(images), phi))
            return False

        status = search.run([rep], take)
        if status is None:
            return None, search
        per_class.append((int(search.hclasses[c].size), sols))
    return per_class, search


def automorphism_count(g: FiniteGroup, budget: int | None = None):
    """|Aut(g)| as an int, or Inconclusive."""
    if g.order == 1:
        return 1
    per_class, search = _automorphisms_by_first_rep(g, budget)
    if per_class is None:
        return Inconclusive("automorphism search budget exhausted", search.attempts)
    return sum(size * len(sols) for size, sols in per_class)


def _inn_label(g: FiniteGroup, images: np.ndarray) -> tuple[int, ...]:
    """Least conjugate of an image tuple: a label for its coset modulo Inn."""
    elems = np.arange(g.order)
    conj = np.stack([g.conj(int(x), elems) for x in images])  # (k, |g|)
    best = np.lexsort(conj[::-1])[0]
    return tuple(int(v) for v in conj[:, best])


@dataclass
class OuterStructure:
    aut_order: int
    inn_order: int
    out_order: int
    name: str
    table: np.ndarray = field(repr=False)


def outer_structure(g: FiniteGroup, budget: int | None = None):
    """Structure of Aut(g)/Inn(g) from explicit coset representatives, or Inconclusive."""
    if g.order == 1:
        return OuterStructure(1, 1, 1, "1", np.zeros((1, 1), dtype=np.int64))
    per_class, search = _automorphisms_by_first_rep(g, budget)
    if per_class is None:
        return Inconclusive("automorphism search budget exhausted", search.attempts)
    aut = sum(size * len(sols) for size, sols in per_class)
    inn = g.order // center(g).order
    gens = np.asarray(search.gens, dtype=np.int64)
    reps: dict[tuple, np.ndarray] = {}
    ident = _inn_label(g, gens)
    reps[ident] = np.arange(g.order)
    for _, sols in per_class:
        for images, phi in sols:
            lab = _inn_label(g, np.asarray(images))
            if lab not in reps:
                reps[lab] = phi
    labels = list(reps)
    maps = [reps[lab] for lab in labels]
    pos = {lab: i for i, lab in enumerate(labels)}
    m = len(maps)
    if m * inn != aut:
        raise ArithmeticError("coset count disagrees with |Aut|/|Inn|")
    table = np.empty((m, m), dtype=np.int64)
    for i, j in itertools.product(range(m), repeat=2):
        # (phi_i o phi_j) restricted to the generators
        table[i, j] = pos[_inn_label(g, maps[i][maps[j][gens]])]
    out = TableGroup(table, pos[ident])
    return OuterStructure(aut, inn, m, recognize(out), table)


def module_orbit_signature(g: FiniteGroup, n: Subgroup) -> tuple[int, ...]:
    """Orbit lengths of g acting by conjugation on the nonidentity elements of n."""
    if n.parent is not g:
        raise ValueError("subgroup belongs to a different group")
    members = n.members[n.members != g.identity]
    pos = {int(x): i for i, x in enumerate(members.tolist())}
    parent = list(range(members.size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for s in g.generators:
        imgs = g.conj(members, s)
        for i, y in enumerate(imgs.tolist()):
            a, b = find(i), find(pos[y])
            if a != b:
                parent[a] = b
    sizes = Counter(find(i) for i in range(members.size))
    return tuple(sorted(sizes.values()))


# ------------------------------------------------------------------ naming


_REFERENCES: dict[str, FiniteGroup] = {}


def reference_group(name: str) -> FiniteGroup:
    from .perms import alternating_group, symmetric_group

    if name not in _REFERENCES:
        kind, n = name[0], int(name[1:])
        pg = symmetric_group(n) if kind == "S" else alternating_group(n)
        _REFERENCES[name] = pg.as_finite_group().materialize()
    return _REFERENCES[name]


def recognize(g: FiniteGroup, budget: int | None = None) -> str:
    """A name such as Z8, Z2^4, Z2xZ2, S4, A6; "1" for trivial; "Unknown" otherwise."""
    n = g.order
    if n == 1:
        return "1"
    orders = g.element_orders
    if int(orders.max()) == n:
        return f"Z{n}"
    if g.is_abelian() and int(orders.max()) == 2:
        if n == 4:
            return "Z2xZ2"
        return f"Z2^{n.bit_length() - 1}"
    for k in range(3, 7):
        for kind, size in (("S", math.factorial(k)), ("A", math.factorial(k) // 2)):
            if size == n and isinstance(isomorphic(g, reference_group(f"{kind}{k}"), budget), IsoCertificate):
                return f"{kind}{k}"
    return "Unknown"


def structure_names_match(g: FiniteGroup, name: str, budget: int | None = None):
    """Certificate for g against a named symmetric or alternating reference."""
    return isomorphic(g, reference_group(name), budget)
