"""Matrices over Q(zeta_8): Pauli and Clifford generators, closure, dumps.

A matrix is packed as an integer array of shape (d, d, 4) holding the
numerators of each entry over the basis 1, z, z^2, z^3, together with one
common exponent e (every entry is divided by 2**e).  The pair is kept
canonical: e is as small as possible.  This is the same value set as a
grid of :class:`~cliffatlas.cyclo.Cyclo8` entries, but products of whole
batches become a few numpy calls.
"""

from __future__ import annotations

import hashlib
from functools import reduce

import numpy as np

from .cyclo import Cyclo8
from .groups import FiniteGroup

# numerators must stay below this so float64 products are exact integers
_SAFE = 1 << 20


class LimitExceeded(RuntimeError):
    pass


class HashCollision(RuntimeError):
    pass


def _reduction_tensor() -> np.ndarray:
    # z^p * z^q = sum_k R[p, q, k] z^k
    r = np.zeros((4, 4, 4), dtype=np.int64)
    for p in range(4):
        for q in range(4):
            k = p + q
            if k < 4:
                r[p, q, k] = 1
            else:
                r[p, q, k - 4] = -1
    return r


_R = _reduction_tensor()
# multiplication-by-z^p matrices acting on coefficient vectors: [p, k, q]
_MULT = np.transpose(_R, (0, 2, 1)).astype(np.float64)

_rng = np.random.default_rng(20080517)
_HASH_MULT = _rng.integers(1, 2**63, size=4 * 8 * 8 + 1, dtype=np.uint64) | np.uint64(1)


def _canon(data: np.ndarray, exps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Strip common factors of 2 per matrix in a batch (B, d, d, 4)."""
    data = data.copy()
    exps = exps.copy()
    flat = data.reshape(data.shape[0], -1)
    while True:
        can = (exps > 0) & ~np.any(flat & 1, axis=1)
        if not can.any():
            return data, exps
        flat[can] >>= 1
        exps[can] -= 1


def _batch_mul(a, ea, b, eb) -> tuple[np.ndarray, np.ndarray]:
    """Products a[i] @ b[i] for batches (or single matrices broadcast).

    Each entry x becomes the 4x4 matrix of multiplication by x, so the
    cyclotomic product is one real matmul; values are bounded so float64
    is exact.
    """
    if max(int(np.abs(a).max(initial=0)), int(np.abs(b).max(initial=0))) >= _SAFE:
        raise OverflowError("matrix numerators too large for packed arithmetic")
    single = a.ndim == 3 and b.ndim == 3
    a = a[None] if a.ndim == 3 else a
    b = b[None] if b.ndim == 3 else b
    d = a.shape[-2]
    # left factor as (.., i, k, l, q) block matrix
    blk = np.tensordot(a.astype(np.float64), _MULT, axes=([-1], [0]))  # (.., i, l, k, q)
    blk = blk.transpose(0, 1, 3, 2, 4).reshape(-1, 4 * d, 4 * d)
    vec = b.astype(np.float64).transpose(0, 1, 3, 2).reshape(-1, 4 * d, d)  # (.., (l, q), j)
    out = np.matmul(blk, vec).reshape(-1, d, 4, d).transpose(0, 1, 3, 2)
    c = np.rint(out).astype(np.int64)
    e = np.broadcast_to(np.asarray(ea) + np.asarray(eb), c.shape[:1]).astype(np.int64)
    c, e = _canon(c, e)
    if single:
        return c[0], e[0]
    return c, e


def _dagger(data: np.ndarray) -> np.ndarray:
    # conjugate (a0, a1, a2, a3) -> (a0, -a3, -a2, -a1), then transpose
    conj = np.stack([data[..., 0], -data[..., 3], -data[..., 2], -data[..., 1]], axis=-1)
    return np.swapaxes(conj, -2, -3)


def _row_keys(data: np.ndarray, exps: np.ndarray) -> list[bytes]:
    flat = data.reshape(data.shape[0], -1)
    keys = []
    for i in range(flat.shape[0]):
        keys.append(int(exps[i]).to_bytes(2, "little") + flat[i].tobytes())
    return keys


def _row_hashes(data: np.ndarray, exps: np.ndarray) -> np.ndarray:
    flat = data.reshape(data.shape[0], -1).astype(np.uint64)
    mult = _HASH_MULT[: flat.shape[1]]
    with np.errstate(over="ignore"):
        h = (flat * mult).sum(axis=1, dtype=np.uint64)
        h += np.asarray(exps).astype(np.uint64) * _HASH_MULT[-1]
    return h


class UMatrix:
    """Square matrix over Q(zeta_8), immutable."""

    __slots__ = ("data", "exp")

    def __init__(self, data, exp: int = 0):
        data = np.asarray(data, dtype=np.int64)
        if data.ndim != 3 or data.shape[0] != data.shape[1] or data.shape[2] != 4:
            raise ValueError("packed matrix must have shape (d, d, 4)")
        d, e = _canon(data[None], np.array([exp], dtype=np.int64))
        d = d[0]
        d.setflags(write=False)
        object.__setattr__(self, "data", d)
        object.__setattr__(self, "exp", int(e[0]))

    def __setattr__(self, name, value):
        raise AttributeError("UMatrix is immutable")

    @classmethod
    def from_entries(cls, rows) -> UMatrix:
        rows = [[x if isinstance(x, Cyclo8) else Cyclo8.rational(x) for x in row] for row in rows]
        e = max(x.exp for row in rows for x in row)
        data = [[[v << (e - x.exp) for v in x.nums] for x in row] for row in rows]
        return cls(data, e)

    @classmethod
    def identity(cls, dim: int) -> UMatrix:
        data = np.zeros((dim, dim, 4), dtype=np.int64)
        data[np.arange(dim), np.arange(dim), 0] = 1
        return cls(data)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def entry(self, i: int, j: int) -> Cyclo8:
        return Cyclo8(self.data[i, j].tolist(), self.exp)

    def entries(self) -> list[list[Cyclo8]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def __matmul__(self, other: UMatrix) -> UMatrix:
        d, e = _batch_mul(self.data, self.exp, other.data, other.exp)
        return UMatrix(d, int(e))

    def __add__(self, other: UMatrix) -> UMatrix:
        e = max(self.exp, other.exp)
        return UMatrix((self.data << (e - self.exp)) + (other.data << (e - other.exp)), e)

    def __neg__(self) -> UMatrix:
        return UMatrix(-self.data, self.exp)

    def __sub__(self, other: UMatrix) -> UMatrix:
        return self + (-other)

    def scale(self, c: Cyclo8) -> UMatrix:
        return UMatrix.from_entries([[c * x for x in row] for row in self.entries()])

    def dagger(self) -> UMatrix:
        return UMatrix(_dagger(self.data), self.exp)

    def trace(self) -> Cyclo8:
        return Cyclo8(self.data.trace(axis1=0, axis2=1).tolist(), self.exp)

    def is_zero(self) -> bool:
        return not self.data.any()

    def is_unitary(self) -> bool:
        return self @ self.dagger() == UMatrix.identity(self.dim)

    def key(self) -> bytes:
        return _row_keys(self.data[None], np.array([self.exp]))[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, UMatrix):
            return NotImplemented
        return self.exp == other.exp and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash(self.key())

    def to_complex(self) -> np.ndarray:
        """Floating copy for display only."""
        z = np.exp(1j * np.pi / 4) ** np.arange(4)
        return (self.data @ z) / 2**self.exp

    def dump_line(self) -> str:
        return "; ".join(str(x) for row in self.entries() for x in row)

    def __repr__(self) -> str:
        return f"UMatrix(dim={self.dim}, exp={self.exp})"


def tensor(a: UMatrix, b: UMatrix) -> UMatrix:
    """Kronecker product, row index = i_a * dim_b + i_b."""
    ea = [[a.entry(i, j) for j in range(a.dim)] for i in range(a.dim)]
    eb = [[b.entry(i, j) for j in range(b.dim)] for i in range(b.dim)]
    n = a.dim * b.dim
    rows = [[ea[i // b.dim][j // b.dim] * eb[i % b.dim][j % b.dim] for j in range(n)] for i in range(n)]
    return UMatrix.from_entries(rows)


def tensor_all(ms) -> UMatrix:
    return reduce(tensor, ms)


# ----------------------------------------------------------------- generators

_z = Cyclo8((0, 0, 0, 0))
_1 = Cyclo8((1, 0, 0, 0))
_i = Cyclo8((0, 0, 1, 0))
_h = Cyclo8((0, 1, 0, -1), 1)  # 1/sqrt(2)

I2 = UMatrix.from_entries([[_1, _z], [_z, _1]])
X = UMatrix.from_entries([[_z, _1], [_1, _z]])
Y = UMatrix.from_entries([[_z, -_i], [_i, _z]])
Z = UMatrix.from_entries([[_1, _z], [_z, -_1]])
H = UMatrix.from_entries([[_h, _h], [_h, -_h]])
P = UMatrix.from_entries([[_1, _z], [_z, _i]])
CZ = UMatrix.from_entries([[(-_1 if i == 3 else _1) if i == j else _z for j in range(4)] for i in range(4)])

PAULI_1Q = {"I": I2, "X": X, "Y": Y, "Z": Z}


def pauli_matrix(label: str) -> UMatrix:
    """Hermitian Pauli operator for a string like "XZ" (leftmost = first factor)."""
    return tensor_all([PAULI_1Q[c] for c in label])


def clifford_generators(n: int) -> list[UMatrix]:
    if n == 1:
        return [H, P]
    if n == 2:
        return [tensor(H, H), tensor(H, P), CZ]
    raise ValueError("Clifford generators are provided for 1 or 2 qubits")


def pauli_generators(n: int) -> list[UMatrix]:
    gens = []
    for q in range(n):
        for m in (X, Y, Z):
            gens.append(tensor_all([m if k == q else I2 for k in range(n)]))
    return gens


def clifford_order_formula(n: int) -> int:
    """2^(n^2+2n+3) * prod_{j=1..n} (4^j - 1)."""
    if n < 1:
        raise ValueError("n >= 1")
    out = 2 ** (n * n + 2 * n + 3)
    for j in range(1, n + 1):
        out *= 4**j - 1
    return out


def pauli_order_formula(n: int) -> int:
    if n < 1:
        raise ValueError("n >= 1")
    return 2 ** (2 * n + 2)


def inner_clifford_order_formula(n: int) -> int:
    """Order modulo the 8 scalar phases."""
    return clifford_order_formula(n) // 8


# ------------------------------------------------------------------- closure


class MatGroup:
    """Matrices in discovery order; index 0 is the identity.

    Lookup goes through 64-bit row hashes; every hit is confirmed by exact
    comparison, and a collision between distinct elements raises.
    """

    def __init__(self, data: np.ndarray, exps: np.ndarray, gen_indices):
        self.data = data
        self.exps = exps
        self.gen_indices = list(gen_indices)
        h = _row_hashes(data, exps)
        order = np.argsort(h, kind="stable")
        self._sorted_h = h[order]
        self._order_idx = order
        if np.any(self._sorted_h[1:] == self._sorted_h[:-1]):
            raise HashCollision("two group elements share a 64-bit hash")

    @property
    def order(self) -> int:
        return self.data.shape[0]

    def __len__(self) -> int:
        return self.order

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, i: int) -> UMatrix:
        return UMatrix(self.data[i], int(self.exps[i]))

    def __iter__(self):
        return (self[i] for i in range(self.order))

    def lookup(self, data: np.ndarray, exps: np.ndarray, strict: bool = True) -> np.ndarray:
        h = _row_hashes(data, exps)
        pos = np.minimum(np.searchsorted(self._sorted_h, h), self.order - 1)
        idx = self._order_idx[pos]
        ok = (self._sorted_h[pos] == h) & (self.exps[idx] == exps)
        ok &= np.all(self.data[idx].reshape(idx.size, -1) == data.reshape(idx.size, -1), axis=1)
        if strict and not ok.all():
            raise KeyError("matrix is not an element of this group")
        return np.where(ok, idx, -1)

    def index_of(self, m: UMatrix) -> int | None:
        i = int(self.lookup(m.data[None], np.array([m.exp]), strict=False)[0])
        return None if i < 0 else i

    def element_set(self) -> frozenset[bytes]:
        return frozenset(_row_keys(self.data, self.exps))

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for key in sorted(_row_keys(self.data, self.exps)):
            h.update(key)
        return h.hexdigest()

    def as_finite_group(self) -> MatFiniteGroup:
        return MatFiniteGroup(self)

    def dumps(self) -> str:
        lines = [f"# dim {self.dim} order {self.order} gens {','.join(map(str, self.gen_indices))} sha256 {self.content_hash()}"]
        for i in range(self.order):
            lines.append(f"{i}: {self[i].dump_line()}")
        return "\n".join(lines) + "\n"


def parse_cyclo(text: str) -> Cyclo8:
    """Inverse of ``str(Cyclo8)``."""
    coeffs = []
    for term in text.split(" + "):
        num, _, ex = term.split("·")[0].strip().partition("/2^")
        coeffs.append((int(num), int(ex) if ex else 0))
    e = max(x for _, x in coeffs)
    return Cyclo8([n << (e - x) for n, x in coeffs], e)


def loads_matgroup(text: str) -> MatGroup:
    lines = text.strip().splitlines()
    head = lines[0].split() if lines else []
    if len(head) != 9 or head[:2] != ["#", "dim"]:
        raise ValueError("not a matrix group dump")
    dim, order = int(head[2]), int(head[4])
    gens = [int(x) for x in head[6].split(",")] if head[6] else []
    digest = head[8]
    data = np.zeros((order, dim, dim, 4), dtype=np.int64)
    exps = np.zeros(order, dtype=np.int64)
    if len(lines) - 1 != order:
        raise ValueError("element count does not match header")
    for line in lines[1:]:
        idx, _, body = line.partition(": ")
        entries = [e.strip() for e in body.split(";")]
        try:
            cells = [parse_cyclo(e) for e in entries]
        except (ValueError, IndexError):
            raise ValueError(f"bad entry in element {idx}") from None
        if len(cells) != dim * dim:
            raise ValueError(f"element {idx} has {len(cells)} entries")
        m = UMatrix.from_entries([cells[r * dim:(r + 1) * dim] for r in range(dim)])
        data[int(idx)] = m.data
        exps[int(idx)] = m.exp
    g = MatGroup(data, exps, gens)
    if g.content_hash() != digest:
        raise ValueError("matrix dump failed validation")
    return g


def close(generators, limit: int | None = None) -> MatGroup:
    """Breadth-first closure of the generators; products gen @ frontier."""
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    dim = generators[0].dim
    if any(g.dim != dim for g in generators):
        raise ValueError("generators differ in dimension")
    if limit is None:
        n = dim.bit_length() - 1
        limit = 2 * clifford_order_formula(n) if dim == 1 << n and n >= 1 else 10**6
    data = np.zeros((1024, dim, dim, 4), dtype=np.int64)
    exps = np.zeros(1024, dtype=np.int64)
    data[0] = UMatrix.identity(dim).data
    seen = {int(_row_hashes(data[:1], exps[:1])[0]): 0}
    count = 1
    lo, hi = 0, 1
    batch = 16384
    while lo < hi:
        for g in generators:
            for s in range(lo, hi, batch):
                t = min(s + batch, hi)
                pd, pe = _batch_mul(g.data, g.exp, data[s:t], exps[s:t])
                idx = np.empty(t - s, dtype=np.int64)
                fresh = []
                for k, h in enumerate(_row_hashes(pd, pe).tolist()):
                    j = seen.get(h)
                    if j is None:
                        j = seen[h] = count + len(fresh)
                        fresh.append(k)
                    idx[k] = j
                new = count + len(fresh)
                if new > limit:
                    raise LimitExceeded(f"closure exceeded {limit} elements")
                if new > data.shape[0]:
                    cap = max(new, 2 * data.shape[0])
                    data = np.concatenate([data, np.zeros((cap - data.shape[0],) + data.shape[1:], dtype=np.int64)])
                    exps = np.concatenate([exps, np.zeros(cap - exps.shape[0], dtype=np.int64)])
                data[count:new] = pd[fresh]
                exps[count:new] = pe[fresh]
                count = new
                same = (exps[idx] == pe) & np.all(data[idx].reshape(idx.size, -1) == pd.reshape(idx.size, -1), axis=1)
                if not same.all():
                    raise HashCollision("distinct matrices share a 64-bit hash")
        lo, hi = hi, count
    mg = MatGroup(data[:count].copy(), exps[:count].copy(), [])
    mg.gen_indices = [mg.index_of(g) for g in generators]
    return mg


def pauli_group(n: int) -> MatGroup:
    if n not in (1, 2):
        raise ValueError("Pauli closure supported for 1 or 2 qubits")
    return close(pauli_generators(n))


def clifford_group(n: int) -> MatGroup:
    return close(clifford_generators(n))


class MatFiniteGroup(FiniteGroup):
    """Index-level view of a MatGroup: products by matrix multiplication and lookup."""

    def __init__(self, mg: MatGroup):
        super().__init__(mg.order, 0, generators=mg.gen_indices, labels=None, name="")
        self.mg = mg

    def matrix(self, i: int) -> UMatrix:
        return self.mg[int(i)]

    def _mul_flat(self, a, b):
        out = np.empty(a.size, dtype=np.int64)
        step = 16384
        for s in range(0, a.size, step):
            aa, bb = a[s:s + step], b[s:s + step]
            d, e = _batch_mul(self.mg.data[aa], self.mg.exps[aa], self.mg.data[bb], self.mg.exps[bb])
            out[s:s + step] = self.mg.lookup(d, e)
        return out

    def _compute_inverse(self):
        return self.mg.lookup(_dagger(self.mg.data), self.mg.exps)


def as_finite_group(g: MatGroup) -> MatFiniteGroup:
    return g.as_finite_group()


def is_scalar(m: UMatrix) -> bool:
    d = m.data
    off = d.copy()
    off[np.arange(m.dim), np.arange(m.dim)] = 0
    diag = d[np.arange(m.dim), np.arange(m.dim)]
    return not off.any() and bool((diag == diag[0]).all())
