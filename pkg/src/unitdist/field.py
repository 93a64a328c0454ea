"""Exact arithmetic over Q and real quadratic fields Q[sqrt(m)].

Rationals are :class:`fractions.Fraction`. Elements ``a + b*sqrt(m)`` are
:class:`QuadElem`. Points are fixed-dimension tuples of one field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Union

from .errors import FieldMismatchError, ParseError

Scalar = Union[Fraction, "QuadElem"]


def reduce(num: int, den: int) -> Fraction:
    """Canonical rational num/den with positive denominator."""
    if den == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(num, den)


@lru_cache(maxsize=None)
def is_squarefree(m: int) -> bool:
    if m < 1:
        return False
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return True


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


class QuadElem:
    """``a + b*sqrt(m)`` with rational a, b and square-free m >= 2."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a, b, m: int):
        if not isinstance(m, int) or m < 2 or not is_squarefree(m):
            raise ValueError(f"m must be a square-free integer >= 2, got {m!r}")
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    def __reduce__(self):
        return (QuadElem, (self.a, self.b, self.m))

    def _coerce(self, other) -> QuadElem | None:
        if isinstance(other, QuadElem):
            if other.m != self.m:
                raise FieldMismatchError(f"field mismatch: sqrt({self.m}) vs sqrt({other.m})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.m)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.m)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.m)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(
            self.a * o.a + self.b * o.b * self.m,
            self.a * o.b + self.b * o.a,
            self.m,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.m)

    def __pos__(self):
        return self

    def conjugate(self) -> QuadElem:
        return QuadElem(self.a, -self.b, self.m)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.m

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return QuadElem(self.a / n, -self.b / n, self.m)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def sign(self) -> int:
        # a + b*sqrt(m) against 0, decided from signs and a^2 vs b^2*m
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        return sa if self.a * self.a > self.b * self.b * self.m else sb

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            if other.m == self.m:
                return self.a == other.a and self.b == other.b
            return self.b == 0 and other.b == 0 and self.a == other.a
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadElem with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * self.m**0.5

    def __repr__(self):
        return f"QuadElem({self.a!s}, {self.b!s}, {self.m})"

    def __str__(self):
        return format_scalar(self)


def add(x: Scalar, y: Scalar) -> Scalar:
    """Exact sum; a rational operand is promoted into the other's quadratic field."""
    return x + y


def mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def field_of(x) -> int | None:
    """The m tag of a scalar, or None for rationals."""
    return x.m if isinstance(x, QuadElem) else None


def promote(x, m: int | None) -> Scalar:
    if isinstance(x, QuadElem):
        if m is None and x.b == 0:
            return x.a
        if x.m != m:
            raise FieldMismatchError(f"field mismatch: sqrt({x.m}) vs {_field_name(m)}")
        return x
    x = _as_fraction(x)
    return x if m is None else QuadElem(x, 0, m)


def _field_name(m: int | None) -> str:
    return "Q" if m is None else f"Q[sqrt({m})]"


# --- textual scalar syntax -------------------------------------------------

_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(_RAT)
_QUAD_RE = re.compile(
    rf"(?:(?P<a>{_RAT})(?P<b1>[+-]\d+(?:/\d+)?)|(?P<b2>{_RAT}))\*sqrt\((?P<m>\d+)\)"
)


def _parse_rat(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return reduce(int(num), int(den) if den else 1)


def parse_scalar(text: str) -> Scalar:
    """Parse ``p``, ``p/q`` or ``a/b+c/d*sqrt(m)``; raises ParseError."""
    try:
        if _RAT_RE.fullmatch(text):
            return _parse_rat(text)
        mt = _QUAD_RE.fullmatch(text)
        if mt:
            a = _parse_rat(mt["a"]) if mt["a"] else Fraction(0)
            b = _parse_rat(mt["b1"] or mt["b2"])
            return QuadElem(a, b, int(mt["m"]))
    except (ZeroDivisionError, ValueError) as exc:
        raise ParseError(f"bad scalar {text!r}: {exc}") from None
    raise ParseError(f"bad scalar {text!r}")


def format_scalar(x: Scalar) -> str:
    if isinstance(x, QuadElem):
        sign = "-" if x.b < 0 else "+"
        return f"{x.a}{sign}{abs(x.b)}*sqrt({x.m})"
    return str(Fraction(x))


# --- points ------------------------------------------------------------------


class Point:
    """Immutable vector of exact scalars, all from one field (``m`` None means Q)."""

    __slots__ = ("coords", "m")

    def __init__(self, coords: Iterable, m: int | None = None):
        raw = [parse_scalar(c) if isinstance(c, str) else c for c in coords]
        if len(raw) < 2:
            raise ValueError(f"points need dimension >= 2, got {len(raw)}")
        if m is None:
            tags = {x.m for x in raw if isinstance(x, QuadElem)}
            if len(tags) > 1:
                raise FieldMismatchError(f"field mismatch: mixed radicals {sorted(tags)}")
            m = tags.pop() if tags else None
        object.__setattr__(self, "coords", tuple(promote(x, m) for x in raw))
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")

    def __reduce__(self):
        return (Point, (self.coords, self.m))

    @classmethod
    def origin(cls, dim: int, m: int | None = None) -> Point:
        return cls([0] * dim, m)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def field(self) -> int | None:
        return self.m

    def _check(self, other: Point) -> None:
        if not isinstance(other, Point):
            raise TypeError(f"expected Point, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.m != self.m:
            raise FieldMismatchError(
                f"field mismatch: {_field_name(self.m)} vs {_field_name(other.m)}"
            )

    def __add__(self, other: Point) -> Point:
        self._check(other)
        return Point([x + y for x, y in zip(self.coords, other.coords)], self.m)

    def __sub__(self, other: Point) -> Point:
        self._check(other)
        return Point([x - y for x, y in zip(self.coords, other.coords)], self.m)

    def __neg__(self) -> Point:
        return Point([-x for x in self.coords], self.m)

    def scale(self, k) -> Point:
        return Point([k * x for x in self.coords], self.m)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.m == other.m and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other: Point) -> bool:
        self._check(other)
        return self.coords < other.coords

    def __repr__(self):
        return f"Point({' '.join(map(format_scalar, self.coords))}{'' if self.m is None else f'; m={self.m}'})"

    def __str__(self):
        return " ".join(format_scalar(x) for x in self.coords)


def sq_distance(p: Point, q: Point) -> Scalar:
    """Exact squared Euclidean distance; unit distance means this equals 1."""
    p._check(q)
    total = Fraction(0) if p.m is None else QuadElem(0, 0, p.m)
    for x, y in zip(p.coords, q.coords):
        d = x - y
        total = total + d * d
    return total


def is_unit(p: Point) -> bool:
    return sq_distance(p, Point.origin(p.dim, p.m)) == 1
