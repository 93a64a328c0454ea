"""Exact unit vectors over Q^2, Q^3, Q^4 and Q[sqrt(m)]^2.

Enumeration is bounded and returned in lexicographic order of the exact
coordinate tuple. In the plane, :func:`approx_direction` finds a rational
unit vector within any requested distance of a given direction.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Sequence

from .errors import UnsupportedError
from .field import Point, QuadElem, is_squarefree

UnitVector = Point


def parse_field(name: str | int | None) -> int | None:
    """``"Q"`` -> None, ``"Qsqrt:m"`` -> m. Integers and None pass through."""
    if name is None or isinstance(name, int):
        if isinstance(name, int) and not (name >= 2 and is_squarefree(name)):
            raise UnsupportedError(f"unsupported field/dimension: m={name} is not square-free >= 2")
        return name
    if name == "Q":
        return None
    head, sep, tail = name.partition(":")
    if head == "Qsqrt" and sep and tail.isdigit():
        return parse_field(int(tail))
    raise UnsupportedError(f"unsupported field/dimension: unknown field {name!r}")


def pythagorean_triples(max_c: int) -> list[tuple[int, int, int]]:
    """Primitive triples (a, b, c) with a odd, b even, c <= max_c, ordered by (c, a)."""
    out = []
    s = 2
    while s * s + 1 <= max_c:
        for t in range(1 + s % 2, s, 2):
            c = s * s + t * t
            if c > max_c:
                break
            if gcd(s, t) == 1:
                out.append((s * s - t * t, 2 * s * t, c))
        s += 1
    out.sort(key=lambda abc: (abc[2], abc[0]))
    return out


def _square_sums(dim: int, n: int) -> tuple[tuple[int, ...], ...]:
    return _square_sums_cached(dim, n)


@lru_cache(maxsize=None)
def _square_sums_cached(dim: int, n: int) -> tuple[tuple[int, ...], ...]:
    # all integer tuples of length dim whose squares sum to n
    if dim == 1:
        r = isqrt(n)
        if r * r != n:
            return ()
        return ((0,),) if r == 0 else ((-r,), (r,))
    out = []
    r = isqrt(n)
    for a in range(-r, r + 1):
        for rest in _square_sums_cached(dim - 1, n - a * a):
            out.append((a, *rest))
    return tuple(out)


@lru_cache(maxsize=None)
def _primitive_sphere_points(dim: int, d: int) -> tuple[Point, ...]:
    # unit vectors whose lowest common denominator is exactly d
    pts = []
    for tup in _square_sums(dim, d * d):
        g = d
        for a in tup:
            g = gcd(g, a)
        if g == 1:
            pts.append(Point([Fraction(a, d) for a in tup]))
    return tuple(pts)


def _plane_rational(bound: int) -> list[Point]:
    vecs = {Point([1, 0]), Point([-1, 0]), Point([0, 1]), Point([0, -1])}
    for a, b, c in pythagorean_triples(bound):
        x, y = Fraction(a, c), Fraction(b, c)
        for sx in (1, -1):
            for sy in (1, -1):
                vecs.add(Point([sx * x, sy * y]))
                vecs.add(Point([sy * y, sx * x]))
    return sorted(vecs)


def _reduced_rationals(h: int) -> list[Fraction]:
    vals = {Fraction(a, b) for b in range(1, h + 1) for a in range(-h, h + 1) if gcd(a, b) == 1}
    return sorted(vals)


def _plane_quadratic(m: int, bound: int) -> list[Point]:
    rats = _reduced_rationals(bound)
    values = [QuadElem(a, b, m) for a in rats for b in rats]
    by_square: dict[QuadElem, list[QuadElem]] = {}
    for y in values:
        by_square.setdefault(y * y, []).append(y)
    one = QuadElem(1, 0, m)
    vecs = []
    for x in values:
        for y in by_square.get(one - x * x, ()):
            vecs.append(Point([x, y], m))
    return sorted(vecs)


def enum_unit_vectors(dim: int, field: str | int | None, bound: int) -> list[UnitVector]:
    """All unit vectors within ``bound``, deduplicated, in lexicographic order.

    The bound is the largest hypotenuse for Q^2, the largest common
    denominator for Q^3 and Q^4, and the largest integer appearing in the
    reduced form ``a/b + c/d*sqrt(m)`` of any coordinate for Q[sqrt(m)]^2.
    """
    m = parse_field(field)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if m is None and dim == 2:
        return _plane_rational(bound)
    if m is None and dim in (3, 4):
        pts = [p for d in range(1, bound + 1) for p in _primitive_sphere_points(dim, d)]
        return sorted(pts)
    if m is not None and dim == 2:
        return _plane_quadratic(m, bound)
    raise UnsupportedError(f"unsupported field/dimension: dim={dim}, field={field!r}")


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def _sqrt_bracket(x: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # lo <= sqrt(x) < hi, with hi - lo = 1 / (den * 2**bits)
    p, q = x.numerator, x.denominator
    s = isqrt(p * q << (2 * bits))
    scale = q << bits
    return Fraction(s, scale), Fraction(s + 1, scale)


def _half_angle_point(t: Fraction) -> tuple[Fraction, Fraction]:
    w = 1 + t * t
    return (1 - t * t) / w, 2 * t / w


def approx_direction(target: Sequence, eps) -> UnitVector:
    """A rational unit vector strictly within ``eps`` of ``target / |target|``.

    Uses the rational parametrization ``t -> ((1-t^2)/(1+t^2), 2t/(1+t^2))``
    with ``t`` a continued-fraction approximation of the half-angle tangent.
    The result is accepted only after an exact check against an upper
    bracket of ``|target|``.
    """
    tx, ty = (Fraction(c) for c in target)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if tx == 0 and ty == 0:
        raise ValueError("zero direction")
    n2 = tx * tx + ty * ty
    root = _rational_sqrt(n2)
    if root is not None:
        return Point([tx / root, ty / root])

    # keep the half angle away from +-pi/2, where its tangent blows up
    flip = tx < 0
    if flip:
        tx, ty = -tx, -ty
    eps2 = eps * eps
    bits = max(32, 2 * eps.denominator.bit_length() + 8)
    while True:
        lo, hi = _sqrt_bracket(n2, bits)
        t_fine = ty / (tx + lo)
        # tan(theta/2) = ty / (tx + |target|)
        max_den = 2
        while max_den <= (1 << bits):
            t = t_fine.limit_denominator(max_den)
            ux, uy = _half_angle_point(t)
            dot = ux * tx + uy * ty
            # |u - target/|target||^2 = 2 - 2*dot/|target| <= 2 - 2*dot/hi
            if dot > 0 and 2 - 2 * dot / hi < eps2:
                if flip:
                    ux, uy = -ux, -uy
                return Point([ux, uy])
            max_den *= 2
        bits *= 2
