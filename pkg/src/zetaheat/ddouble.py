"""Double-double ("two-float") arithmetic for the extended-precision path.

A value is the unevaluated sum hi + lo of two binary64 numbers with
|lo| <= ulp(hi)/2, giving ~32 significant decimal digits.  The error-free
transforms follow Dekker and Knuth and are branch-free, so they work
elementwise on numpy arrays as well as on scalars; the heat-trace engine
uses the array forms, everything else the scalar ``DD`` class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_SPLITTER = 134217729.0  # 2**27 + 1, exact in binary64


def two_sum(a, b):
    """Error-free sum: (s, e) with s + e == a + b exactly."""
    s = a + b
    t = s - a
    e = (a - (s - t)) + (b - t)
    return s, e


def quick_two_sum(a, b):
    """two_sum under the assumption |a| >= |b|."""
    s = a + b
    e = b - (s - a)
    return s, e


def split(a):
    """Dekker split into 26+27-bit halves; exact while |a| < 2**996."""
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Error-free product: (p, e) with p + e == a * b exactly.

    Exact for products in the normal range; once a*b drops into
    denormals the error term is no longer representable.
    """
    p = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def array_square(hi, lo):
    """Elementwise (hi + lo)**2 as a double-double pair of arrays.

    The lo*lo cross term is below the result's ulp and is dropped.
    """
    p, e = two_prod(hi, hi)
    e = e + 2.0 * hi * lo
    return quick_two_sum(p, e)


def array_scale(hi, lo, c):
    """Elementwise c * (hi + lo) for a scalar float c."""
    p, e = two_prod(hi, c)
    e = e + lo * c
    return quick_two_sum(p, e)


@dataclass(frozen=True)
class DD:
    """Scalar double-double number."""

    hi: float
    lo: float = 0.0

    def __post_init__(self):
        # tolerate numpy scalars on input; keep the components plain floats
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "lo", float(self.lo))

    @staticmethod
    def from_decimal(text: str) -> "DD":
        """Exact decimal literal -> nearest double-double (via Fraction)."""
        exact = Fraction(text)
        hi = float(exact)
        lo = float(exact - Fraction(hi))
        return DD(hi, lo)

    def __float__(self) -> float:
        return self.hi + self.lo

    def __neg__(self) -> "DD":
        return DD(-self.hi, -self.lo)

    def __add__(self, other) -> "DD":
        o = _coerce(other)
        s, e = two_sum(self.hi, o.hi)
        e += self.lo + o.lo
        return DD(*quick_two_sum(s, e))

    __radd__ = __add__

    def __sub__(self, other) -> "DD":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "DD":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "DD":
        o = _coerce(other)
        p, e = two_prod(self.hi, o.hi)
        e += self.hi * o.lo + self.lo * o.hi
        return DD(*quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        o = _coerce(other)
        q1 = self.hi / o.hi
        r = self - o * DD(q1)
        q2 = (r.hi + r.lo) / o.hi
        r = r - o * DD(q2)
        q3 = (r.hi + r.lo) / o.hi
        s, e = two_sum(q1, q2)
        e += q3
        return DD(*quick_two_sum(s, e))

    def __rtruediv__(self, other) -> "DD":
        return _coerce(other) / self

    def ldexp(self, n: int) -> "DD":
        return DD(math.ldexp(self.hi, n), math.ldexp(self.lo, n))


def _coerce(x) -> DD:
    if isinstance(x, DD):
        return x
    return DD(float(x))


LN2 = DD.from_decimal("0.69314718055994530941723212145817656807550013436026")

# 1/n! for the exp Taylor core, exact to double-double.
_INV_FACT = tuple(
    DD(float(Fraction(1, math.factorial(n))),
       float(Fraction(1, math.factorial(n)) - Fraction(float(Fraction(1, math.factorial(n))))))
    for n in range(2, 14)
)


def exp(x: DD) -> DD:
    """exp(x) in double-double, |x.hi| <= 709.

    Argument reduction x = m*ln2 + r, |r| <= ln2/2, then r/2**6 into a
    12-term Taylor core and six squarings back.
    """
    if x.hi < -745.0:
        return DD(0.0)
    if x.hi > 709.0:
        raise OverflowError("exp argument too large for double-double")
    m = int(round(float(x) / 0.6931471805599453))
    r = (x - LN2 * DD(m)).ldexp(-6)
    # Horner over sum_{n>=2} r^n/n!, then (1 + r + core)
    acc = DD(0.0)
    for inv in reversed(_INV_FACT):
        acc = acc * r + inv
    acc = acc * r * r + r
    # undo the /2**6 scaling: y -> y**2 via (1+c)**2 = 1 + 2c + c**2
    for _ in range(6):
        acc = acc * 2.0 + acc * acc
    return (acc + 1.0).ldexp(m)
