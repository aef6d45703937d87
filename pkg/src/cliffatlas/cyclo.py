"""Exact arithmetic in the 8th cyclotomic field.

Elements are stored over the basis 1, z, z^2, z^3 with z = exp(i*pi/4) and
z^4 = -1.  Coefficients are dyadic rationals m / 2^k, which is enough for
every entry of the Pauli and Clifford matrices and is closed under the ring
operations.
"""

from __future__ import annotations

import cmath
from fractions import Fraction


class Dyadic:
    """A rational number of the form numerator / 2**exponent."""

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int, exponent: int = 0):
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        else:
            tz = (numerator & -numerator).bit_length() - 1
            shift = min(tz, exponent)
            numerator >>= shift
            exponent -= shift
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def from_fraction(cls, q) -> Dyadic:
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not dyadic")
        return cls(q.numerator, den.bit_length() - 1)

    def __add__(self, other: Dyadic) -> Dyadic:
        e = max(self.exponent, other.exponent)
        return Dyadic(
            (self.numerator << (e - self.exponent)) + (other.numerator << (e - other.exponent)), e
        )

    def __neg__(self) -> Dyadic:
        return Dyadic(-self.numerator, self.exponent)

    def __sub__(self, other: Dyadic) -> Dyadic:
        return self + (-other)

    def __mul__(self, other: Dyadic) -> Dyadic:
        return Dyadic(self.numerator * other.numerator, self.exponent + other.exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.numerator == other.numerator and self.exponent == other.exponent

    def __hash__(self) -> int:
        return hash((self.numerator, self.exponent))

    def __bool__(self) -> bool:
        return self.numerator != 0

    def __float__(self) -> float:
        return self.numerator / 2**self.exponent

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 2**self.exponent)

    def __repr__(self) -> str:
        return f"Dyadic({self.numerator}, {self.exponent})"

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"


def _coerce(x) -> Cyclo8:
    if isinstance(x, Cyclo8):
        return x
    if isinstance(x, (int, Fraction, Dyadic)):
        return Cyclo8.rational(x)
    return NotImplemented


class Cyclo8:
    """Element c0 + c1*z + c2*z^2 + c3*z^3 of Q(z), z a primitive 8th root of unity.

    Internally the four coefficients share one denominator 2**exp, kept
    minimal, so two equal values always have identical fields.
    """

    __slots__ = ("nums", "exp")

    def __init__(self, nums, exp: int = 0):
        nums = tuple(int(v) for v in nums)
        if len(nums) != 4:
            raise ValueError("Cyclo8 needs exactly four coefficients")
        if exp < 0:
            nums = tuple(v << -exp for v in nums)
            exp = 0
        if not any(nums):
            exp = 0
        else:
            while exp > 0 and not any(v & 1 for v in nums):
                nums = tuple(v >> 1 for v in nums)
                exp -= 1
        object.__setattr__(self, "nums", nums)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclo8 is immutable")

    @classmethod
    def from_coeffs(cls, coeffs) -> Cyclo8:
        """Build from four rationals (ints, Fractions or Dyadics)."""
        ds = [c if isinstance(c, Dyadic) else Dyadic.from_fraction(c) for c in coeffs]
        e = max(d.exponent for d in ds)
        return cls([d.numerator << (e - d.exponent) for d in ds], e)

    @classmethod
    def rational(cls, q) -> Cyclo8:
        d = q if isinstance(q, Dyadic) else Dyadic.from_fraction(q)
        return cls((d.numerator, 0, 0, 0), d.exponent)

    # coefficient access as dyadics
    @property
    def c0(self) -> Dyadic:
        return Dyadic(self.nums[0], self.exp)

    @property
    def c1(self) -> Dyadic:
        return Dyadic(self.nums[1], self.exp)

    @property
    def c2(self) -> Dyadic:
        return Dyadic(self.nums[2], self.exp)

    @property
    def c3(self) -> Dyadic:
        return Dyadic(self.nums[3], self.exp)

    def coeffs(self) -> tuple[Dyadic, Dyadic, Dyadic, Dyadic]:
        return (self.c0, self.c1, self.c2, self.c3)

    def __add__(self, other) -> Cyclo8:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        e = max(self.exp, other.exp)
        s, t = e - self.exp, e - other.exp
        return Cyclo8([(a << s) + (b << t) for a, b in zip(self.nums, other.nums)], e)

    __radd__ = __add__

    def __neg__(self) -> Cyclo8:
        return Cyclo8([-a for a in self.nums], self.exp)

    def __sub__(self, other) -> Cyclo8:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Cyclo8:
        return (-self) + other

    def __mul__(self, other) -> Cyclo8:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a0, a1, a2, a3 = self.nums
        b0, b1, b2, b3 = other.nums
        # z^4 = -1
        c0 = a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1
        c1 = a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2
        c2 = a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3
        c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        return Cyclo8((c0, c1, c2, c3), self.exp + other.exp)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Cyclo8:
        if k < 0:
            raise ValueError("negative powers are not supported")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def half(self, times: int = 1) -> Cyclo8:
        """Divide by 2**times (the only division the ring needs)."""
        return Cyclo8(self.nums, self.exp + times)

    def conjugate(self) -> Cyclo8:
        # z -> z^-1 = -z^3, z^2 -> -z^2, z^3 -> -z
        a0, a1, a2, a3 = self.nums
        return Cyclo8((a0, -a3, -a2, -a1), self.exp)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.exp == other.exp and self.nums == other.nums

    def __hash__(self) -> int:
        return hash((self.nums, self.exp))

    def hash_key(self) -> bytes:
        return f"{self.exp}:{self.nums[0]},{self.nums[1]},{self.nums[2]},{self.nums[3]}".encode()

    def __complex__(self) -> complex:
        z = cmath.exp(1j * cmath.pi / 4)
        return sum(a * z**k for k, a in enumerate(self.nums)) / 2**self.exp

    def __repr__(self) -> str:
        return f"Cyclo8({self.nums}, {self.exp})"

    def __str__(self) -> str:
        c = self.coeffs()
        return f"{c[0]} + {c[1]}·ζ + {c[2]}·ζ² + {c[3]}·ζ³"

    def approx(self) -> str:
        """Floating rendering for display only."""
        w = complex(self)
        return f"{w.real:+.6f}{w.imag:+.6f}i"


ZERO = Cyclo8((0, 0, 0, 0))
ONE = Cyclo8((1, 0, 0, 0))
ZETA = Cyclo8((0, 1, 0, 0))
I = Cyclo8((0, 0, 1, 0))


def add(a: Cyclo8, b: Cyclo8) -> Cyclo8:
    return a + b


def mul(a: Cyclo8, b: Cyclo8) -> Cyclo8:
    return a * b


def neg(a: Cyclo8) -> Cyclo8:
    return -a


def conjugate(a: Cyclo8) -> Cyclo8:
    return a.conjugate()


def hash_key(a: Cyclo8) -> bytes:
    return a.hash_key()


def root_of_unity(k: int) -> Cyclo8:
    """Primitive k-th root of unity exp(2*pi*i/k) for k dividing 8."""
    if k not in (1, 2, 4, 8):
        raise ValueError(f"no primitive {k}-th root of unity in Q(zeta_8)")
    return ZETA ** (8 // k)


def sqrt2() -> Cyclo8:
    # z - z^3 = 2 cos(pi/4)
    return Cyclo8((0, 1, 0, -1))


def inv_sqrt2() -> Cyclo8:
    return Cyclo8((0, 1, 0, -1), 1)


def multiplicative_order(x: Cyclo8, bound: int = 64) -> int | None:
    """Order of x in the unit group, or None if x is not a root of unity."""
    y = x
    for k in range(1, bound + 1):
        if y == ONE:
            return k
        y = y * x
    return None
