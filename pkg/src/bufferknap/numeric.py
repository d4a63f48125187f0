"""Exact numbers: rationals, quadratic surds, and high-precision rendering.

Sizes and values are ``fractions.Fraction`` everywhere. The size-class
thresholds of the proportional algorithms are roots of quadratics with
rational coefficients, so they live in a field Q(sqrt(d)). ``Surd`` keeps
such numbers symbolically and decides every comparison with integer
arithmetic, so a class test at a knife-edge size is never a rounding
question.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Union

import mpmath

Number = Union[int, Fraction, "Surd"]

PRECISION_ENV = "BUFFERKNAP_PRECISION"
DEFAULT_PRECISION = 40


def decimal_digits() -> int:
    """Digits used when rendering ratios and bounds (env override allowed)."""
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    digits = int(raw)
    if digits < 15:
        raise ValueError(f"{PRECISION_ENV} must be at least 15, got {digits}")
    return digits


def working_digits() -> int:
    """Internal working precision: 20 guard digits above the rendered ones."""
    return decimal_digits() + 20


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or an integer string (ints and Fractions pass through).

    Binary floats are refused outright: they would smuggle rounding into
    an otherwise exact pipeline.
    """
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not accepted; pass 'p/q' strings")
    if not isinstance(text, str):
        raise TypeError(f"cannot read a rational from {type(text).__name__}")
    cleaned = text.strip()
    if not cleaned:
        raise ValueError("empty rational")
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def rational_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _split_square(n: int) -> tuple[int, int]:
    """Write n = k*k*rest, pulling out square factors of small primes."""
    k = 1
    p = 2
    while p <= 1000 and p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        p += 1 if p == 2 else 2
    root = math.isqrt(n)
    if root * root == n:
        return k * root, 1
    return k, n


class Surd:
    """The real number ``a + b*sqrt(d)`` with rational a, b and integer d >= 0.

    Instances are immutable. Arithmetic between surds is closed as long as
    both live in the same field; mixing Q(sqrt(2)) with Q(sqrt(3)) raises
    ``ValueError`` because the result would leave the representation.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Number = 0, b: Number = 0, d: Number = 0):
        if isinstance(a, Surd):
            if b or d:
                raise TypeError("cannot combine a Surd with extra coefficients")
            self.a, self.b, self.d = a.a, a.b, a.d
            return
        a = Fraction(a)
        b = Fraction(b)
        d = Fraction(d)
        if d < 0:
            raise ValueError("negative radicand")
        if b == 0 or d == 0:
            self.a, self.b, self.d = a, Fraction(0), 0
            return
        # sqrt(p/q) = sqrt(p*q)/q, then strip square factors from p*q
        b /= d.denominator
        k, rest = _split_square(d.numerator * d.denominator)
        b *= k
        if rest == 1:
            self.a, self.b, self.d = a + b, Fraction(0), 0
        else:
            self.a, self.b, self.d = a, b, rest

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> "Surd":
        obj = object.__new__(cls)
        if b == 0:
            obj.a, obj.b, obj.d = a, Fraction(0), 0
        else:
            obj.a, obj.b, obj.d = a, b, d
        return obj

    @staticmethod
    def sqrt_of(value: Number) -> "Surd":
        """Square root of a rational or of a surd that is a perfect square."""
        return as_surd(value).sqrt()

    # --- inspection -----------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 d
        gap = a * a - b * b * self.d
        if a > 0:
            return (gap > 0) - (gap < 0)
        return (gap < 0) - (gap > 0)

    # --- field alignment ------------------------------------------------
    def _align(self, other: "Surd") -> tuple[Fraction, Fraction, Fraction, Fraction, int]:
        if self.b == 0 or other.b == 0 or self.d == other.d:
            d = self.d or other.d
            return self.a, self.b, other.a, other.b, d
        joint = math.isqrt(self.d * other.d)
        if joint * joint == self.d * other.d:
            # sqrt(d2) = joint / sqrt(d1) = joint*sqrt(d1)/d1
            return self.a, self.b, other.a, other.b * Fraction(joint, self.d), self.d
        raise ValueError(f"{self} and {other} live in different quadratic fields")

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a1, b1, a2, b2, d = self._align(other)
        return Surd._raw(a1 + a2, b1 + b2, d)

    __radd__ = __add__

    def __neg__(self):
        return Surd._raw(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a1, b1, a2, b2, d = self._align(other)
        return Surd._raw(a1 * a2 + b1 * b2 * d, a1 * b2 + a2 * b1, d)

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd._raw(self.a, -self.b, self.d)

    def reciprocal(self) -> "Surd":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        return Surd._raw(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.reciprocal()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = Surd(1)
        for _ in range(exponent):
            result = result * self
        return result

    def sqrt(self) -> "Surd":
        """Exact square root, raising ValueError if it leaves Q(sqrt(d))."""
        if self.sign() < 0:
            raise ValueError("square root of a negative number")
        if self.b == 0:
            return Surd(0, 1, self.a)
        a, b, d = self.a, self.b, self.d
        root_norm = rational_sqrt(a * a - b * b * d)
        if root_norm is not None:
            for half in ((a + root_norm) / 2, (a - root_norm) / 2):
                p = rational_sqrt(half)
                if p:
                    candidate = Surd._raw(p, b / (2 * p), d)
                    return candidate if candidate.sign() >= 0 else -candidate
        raise ValueError(f"sqrt({self}) is not expressible in Q(sqrt({d}))")

    # --- comparisons ----------------------------------------------------
    def _cmp(self, other) -> int:
        other = _coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Surd with {type(other).__name__}")
        try:
            return (self - other).sign()
        except ValueError:
            pass
        # different fields: compare x = a1 + b1 sqrt(d1) with y = a2 + b2 sqrt(d2)
        # via x - a2 against b2 sqrt(d2), whose sign is known; then square
        left = self - other.a
        right = Surd._raw(Fraction(0), other.b, other.d)
        left_sign, right_sign = left.sign(), right.sign()
        if left_sign != right_sign:
            return (left_sign > right_sign) - (left_sign < right_sign)
        squares = (left * left - other.b * other.b * other.d).sign()
        return squares if left_sign > 0 else -squares

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        try:
            return (self - other).sign() == 0
        except ValueError:
            return False

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    # --- rounding -------------------------------------------------------
    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        radicand = self.b * self.b * self.d
        approx_root = Fraction(
            math.isqrt(radicand.numerator * radicand.denominator), radicand.denominator
        )
        guess = math.floor(self.a + (approx_root if self.b > 0 else -approx_root))
        while Surd._raw(self.a - guess, self.b, self.d).sign() < 0:
            guess -= 1
        while Surd._raw(self.a - guess - 1, self.b, self.d).sign() >= 0:
            guess += 1
        return guess

    def ceil(self) -> int:
        return -((-self).floor())

    def __floor__(self):
        return self.floor()

    def __ceil__(self):
        return self.ceil()

    def rational_below(self, denominator: int) -> Fraction:
        """Largest multiple of 1/denominator that is <= self."""
        return Fraction((self * denominator).floor(), denominator)

    def rational_above(self, denominator: int) -> Fraction:
        """Smallest multiple of 1/denominator that is >= self."""
        return Fraction((self * denominator).ceil(), denominator)

    # --- conversion -----------------------------------------------------
    def to_mpf(self):
        value = mpmath.mpf(self.a.numerator) / self.a.denominator
        if self.b:
            value += mpmath.mpf(self.b.numerator) / self.b.denominator * mpmath.sqrt(self.d)
        return value

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        radical = f"sqrt({self.d})" if self.b == 1 else f"{self.b}*sqrt({self.d})"
        if self.a == 0:
            return radical if self.b != -1 else f"-sqrt({self.d})"
        if self.b < 0:
            magnitude = f"sqrt({self.d})" if self.b == -1 else f"{-self.b}*sqrt({self.d})"
            return f"{self.a}-{magnitude}"
        return f"{self.a}+{radical}"


def _coerce(value):
    if isinstance(value, Surd):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Surd._raw(Fraction(value), Fraction(0), 0)
    return NotImplemented


def as_surd(value: Number) -> Surd:
    coerced = _coerce(value)
    if coerced is NotImplemented:
        raise TypeError(f"cannot treat {type(value).__name__} as an exact number")
    return coerced


def simplify(value: Number) -> Number:
    """Collapse rational surds back to Fraction so hot paths stay cheap."""
    if isinstance(value, Surd) and value.is_rational:
        return value.a
    return value


def floor_exact(value: Number) -> int:
    if isinstance(value, Surd):
        return value.floor()
    return math.floor(value)


def ceil_exact(value: Number) -> int:
    if isinstance(value, Surd):
        return value.ceil()
    return math.ceil(value)


def to_mpf(value):
    """Convert an exact number (or mpf/inf) to mpmath at the current precision."""
    if isinstance(value, Surd):
        return value.to_mpf()
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, float) and math.isinf(value):
        return mpmath.inf
    return mpmath.mpf(value)


def format_number(value) -> str:
    """Render an exact R for reports: ``p/q`` or ``a+b*sqrt(d)``."""
    if isinstance(value, Surd):
        return str(simplify(value))
    return format_rational(value)


def format_decimal(value, digits: int | None = None) -> str:
    """Fixed-point decimal with ``digits`` significant digits, or ``inf``."""
    digits = digits or decimal_digits()
    with mpmath.workdps(digits + 10):
        x = to_mpf(value)
        if mpmath.isinf(x):
            return "inf" if x > 0 else "-inf"
        return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
