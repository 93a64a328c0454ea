"""Choice-free proper 2-colourings of Q^2 and Q^3, and colouring verification.

Every rational x splits uniquely as ``r/2^k + y`` where ``r/2^k`` lies in
[0, 1) and y has odd denominator. Rational unit vectors in dimensions 2 and
3 have odd denominators and an odd numerator sum, so adding one leaves the
dyadic parts alone and flips the parity of the residual's numerator sum.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction
from typing import Union

from .errors import UnsupportedError
from .field import Point
from .graph import UDGraph

Coloring = Union[Sequence[int], Mapping[int, int], Callable[[Point], int]]


def _two_adic(q: int) -> int:
    return (q & -q).bit_length() - 1


def dyadic_rep(x: Fraction) -> Fraction:
    """The unique ``r/2^k`` in [0, 1) with ``x - r/2^k`` of odd denominator."""
    x = Fraction(x)
    p, q = x.numerator, x.denominator
    k = _two_adic(q)
    if k == 0:
        return Fraction(0)
    mod = 1 << k
    r = p * pow(q >> k, -1, mod) % mod
    return Fraction(r, mod)


def odd_residual(x: Point) -> tuple[Fraction, ...]:
    """``x`` minus its coordinatewise dyadic representative."""
    return tuple(Fraction(c) - dyadic_rep(c) for c in x.coords)


def _check_parity_domain(x: Point) -> None:
    if x.m is not None:
        raise UnsupportedError("parity coloring undefined: coordinates must be rational")
    if x.dim not in (2, 3):
        # (1,1,1,1)/2 is a unit vector with even denominator
        raise UnsupportedError(f"parity coloring undefined in dimension {x.dim}")


def parity_color(x: Point) -> int:
    """Colour in {0, 1} of a rational point of Q^2 or Q^3."""
    _check_parity_domain(x)
    total = 0
    for c in x.coords:
        p, q = c.numerator, c.denominator
        k = _two_adic(q)
        odd = q >> k
        if k:
            mod = 1 << k
            r = p * pow(odd, -1, mod) % mod
            p = (p - r * odd) >> k
        # residual is p/odd; over any odd common denominator its numerator keeps p's parity
        total += p
    return total & 1


def numerator_sum_parity(y: Sequence[Fraction], denominator: int) -> int:
    """Parity of the numerator sum of ``y`` written over ``denominator``.

    ``denominator`` must be an odd common multiple of the denominators of y.
    """
    if denominator % 2 == 0:
        raise ValueError("denominator must be odd")
    total = 0
    for c in y:
        scaled = c * denominator
        if scaled.denominator != 1:
            raise ValueError(f"{denominator} is not a common denominator of {c}")
        total += scaled.numerator
    return total & 1


def _color_of(c: Coloring, g: UDGraph, v: int) -> int:
    if callable(c) and not isinstance(c, (Mapping, Sequence)):
        if g.points is None:
            raise ValueError("a colour function needs a graph with coordinates")
        return c(g.points[v])
    try:
        return c[v]
    except (KeyError, IndexError):
        raise ValueError(f"vertex {v} has no color") from None


def verify_coloring(g: UDGraph, c: Coloring) -> list[tuple[int, int]]:
    """Monochromatic edges of ``g`` under ``c``, in edge order. Empty means proper."""
    colors = [_color_of(c, g, v) for v in range(g.n)]
    for v, col in enumerate(colors):
        if not isinstance(col, int) or col < 0:
            raise ValueError(f"vertex {v} has invalid color {col!r}")
    return [(i, j) for i, j in g.edges if colors[i] == colors[j]]
