"""Periodic polygonal colourings of the plane.

A tiling is a period lattice plus coloured polygons covering its
fundamental parallelogram. A point is coloured by reducing it into the
fundamental parallelogram and taking the first polygon, in file order,
whose closed region contains it. All geometry is exact: coordinates are put
over a common denominator and every predicate is an integer sign test.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from math import floor, lcm
from typing import Sequence

from .errors import ParseError, TilingError
from .field import Point, QuadElem, parse_scalar, sq_distance

BUNDLED = ("stripes2.til", "squares9.til")
COVERAGE_GRID = 8
SAMPLE_BITS = 64
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class PeriodLattice:
    v1: Point
    v2: Point

    @property
    def det(self) -> Fraction:
        return self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]

    def coordinates(self, x: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
        """(a, b) with x = a*v1 + b*v2."""
        d = self.det
        a = (x[0] * self.v2[1] - x[1] * self.v2[0]) / d
        b = (self.v1[0] * x[1] - self.v1[1] * x[0]) / d
        return a, b

    def combine(self, a: Fraction, b: Fraction) -> Point:
        return Point([a * self.v1[0] + b * self.v2[0], a * self.v1[1] + b * self.v2[1]])

    def reduce(self, x: Sequence[Fraction]) -> Point:
        a, b = self.coordinates(x)
        return self.combine(a - floor(a), b - floor(b))


@dataclass(frozen=True)
class ColoredPolygon:
    color: int
    vertices: tuple[Point, ...]

    def signed_area2(self) -> Fraction:
        vs = self.vertices
        total = Fraction(0)
        for k in range(len(vs)):
            p, q = vs[k], vs[(k + 1) % len(vs)]
            total += p[0] * q[1] - p[1] * q[0]
        return total


@dataclass(frozen=True)
class DensityEstimate:
    point: Point
    color: int
    eps: Fraction
    samples: int
    hits: int
    seed: int

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.hits, self.samples)


@dataclass(frozen=True)
class MonoEdge:
    """A unit edge ``(x, x + direction)`` whose endpoints share ``color``."""

    x: Point
    y: Point
    direction: Point
    color: int
    scan_index: int


# --- exact integer geometry ------------------------------------------------


def _orient(ax, ay, bx, by, cx, cy) -> int:
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (v > 0) - (v < 0)


def _on_segment(ax, ay, bx, by, cx, cy) -> bool:
    # c collinear with a-b assumed
    return min(ax, bx) <= cx <= max(ax, bx) and min(ay, by) <= cy <= max(ay, by)


def _segments_meet(p1, p2, q1, q2) -> bool:
    o1 = _orient(*p1, *p2, *q1)
    o2 = _orient(*p1, *p2, *q2)
    o3 = _orient(*q1, *q2, *p1)
    o4 = _orient(*q1, *q2, *p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(*p1, *p2, *q1):
        return True
    if o2 == 0 and _on_segment(*p1, *p2, *q2):
        return True
    if o3 == 0 and _on_segment(*q1, *q2, *p1):
        return True
    if o4 == 0 and _on_segment(*q1, *q2, *p2):
        return True
    return False


def _is_simple(vs: Sequence[tuple[Fraction, Fraction]]) -> bool:
    n = len(vs)
    if len(set(vs)) != n:
        return False
    edges = [(vs[k], vs[(k + 1) % n]) for k in range(n)]
    for i in range(n):
        a, b = edges[i]
        c = edges[(i + 1) % n][1]
        # consecutive edges may only share their common vertex
        if _orient(*a, *b, *c) == 0 and (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) < 0:
            return False
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_meet(*edges[i], *edges[j]):
                return False
    return True


class _Locator:
    """Polygon edges scaled to integers over one denominator ``den``."""

    def __init__(self, polys: list[tuple[int, list[tuple[int, int]]]], den_scale: int):
        self.polys = []
        for color, verts in polys:
            sv = [(x * den_scale, y * den_scale) for x, y in verts]
            xs = [p[0] for p in sv]
            ys = [p[1] for p in sv]
            edges = [(*sv[k], *sv[(k + 1) % len(sv)]) for k in range(len(sv))]
            self.polys.append((color, min(xs), max(xs), min(ys), max(ys), edges))

    def find(self, rx: int, ry: int) -> int | None:
        for color, x0, x1, y0, y1, edges in self.polys:
            if rx < x0 or rx > x1 or ry < y0 or ry > y1:
                continue
            wn = 0
            for px, py, qx, qy in edges:
                cr = (qx - px) * (ry - py) - (qy - py) * (rx - px)
                if cr == 0 and min(px, qx) <= rx <= max(px, qx) and min(py, qy) <= ry <= max(py, qy):
                    return color
                if py <= ry:
                    if qy > ry and cr > 0:
                        wn += 1
                elif qy <= ry and cr < 0:
                    wn -= 1
            if wn:
                return color
        return None


class _Compiled:
    def __init__(self, t: Tiling):
        den = 1
        for p in (t.lattice.v1, t.lattice.v2, *(v for poly in t.polygons for v in poly.vertices)):
            for c in p:
                den = lcm(den, c.denominator)
        self.den = den

        def scaled(p: Point) -> tuple[int, int]:
            return int(p[0] * den), int(p[1] * den)

        self.v1 = scaled(t.lattice.v1)
        self.v2 = scaled(t.lattice.v2)
        self.det = self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]
        self.polys = [(poly.color, [scaled(v) for v in poly.vertices]) for poly in t.polygons]
        self._locators = lru_cache(maxsize=512)(self._make_locator)

    def _make_locator(self, dn: int) -> _Locator:
        return _Locator(self.polys, dn)

    def reduced(self, sx: int, sy: int, w: int) -> tuple[int, int, int]:
        """Reduce s = (sx, sy)/w. Returns (rx, ry, dn): reduced point (rx, ry)/(dn*den)."""
        (v1x, v1y), (v2x, v2y) = self.v1, self.v2
        a = (sx * v2y - sy * v2x) * self.den
        b = (v1x * sy - v1y * sx) * self.den
        dn = w * self.det
        if dn < 0:
            dn, a, b = -dn, -a, -b
        a %= dn
        b %= dn
        return a * v1x + b * v2x, a * v1y + b * v2y, dn

    def color(self, sx: int, sy: int, w: int) -> int | None:
        rx, ry, dn = self.reduced(sx, sy, w)
        return self._locators(dn).find(rx, ry)


@dataclass(frozen=True)
class Tiling:
    lattice: PeriodLattice
    polygons: tuple[ColoredPolygon, ...]

    @cached_property
    def compiled(self) -> _Compiled:
        return _Compiled(self)

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("compiled", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)

    @property
    def colors(self) -> list[int]:
        return sorted({p.color for p in self.polygons})


def _scaled(x: Sequence[Fraction]) -> tuple[int, int, int]:
    w = lcm(x[0].denominator, x[1].denominator)
    return x[0].numerator * (w // x[0].denominator), x[1].numerator * (w // x[1].denominator), w


def _rational_pair(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, Point):
        if x.m is not None or x.dim != 2:
            raise ValueError("tiling points must be rational points of the plane")
        return x[0], x[1]
    a, b = x
    if isinstance(a, QuadElem) or isinstance(b, QuadElem):
        raise ValueError("tiling points must be rational")
    return Fraction(a), Fraction(b)


def point_color(t: Tiling, x) -> int:
    """Colour of the rational point ``x``; raises TilingError on a coverage gap."""
    xy = _rational_pair(x)
    c = t.compiled.color(*_scaled(xy))
    if c is None:
        raise TilingError(f"coverage gap at {t.lattice.reduce(xy)}")
    return c


# --- validation and file format ------------------------------------------------


def validate_tiling(t: Tiling) -> Tiling:
    lat = t.lattice
    for v in (lat.v1, lat.v2):
        if v.m is not None or v.dim != 2:
            raise TilingError("lattice vectors must be rational points of the plane")
    if lat.det == 0:
        raise TilingError("degenerate lattice")
    if not t.polygons:
        raise TilingError("coverage failure: no polygons")
    area2 = Fraction(0)
    for k, poly in enumerate(t.polygons):
        if len(poly.vertices) < 3:
            raise TilingError(f"polygon {k} has fewer than 3 vertices")
        if poly.color < 0:
            raise TilingError(f"polygon {k} has a negative color")
        if not _is_simple([(v[0], v[1]) for v in poly.vertices]):
            raise TilingError(f"polygon {k} is not simple")
        a2 = poly.signed_area2()
        if a2 <= 0:
            raise TilingError(f"polygon {k} is not counterclockwise")
        area2 += a2
    if area2 < 2 * abs(lat.det):
        raise TilingError("coverage failure: polygon area is less than the fundamental parallelogram")
    g = COVERAGE_GRID
    for i in range(g):
        for j in range(g):
            p = lat.combine(Fraction(2 * i + 1, 2 * g), Fraction(2 * j + 1, 2 * g))
            if t.compiled.color(*_scaled((p[0], p[1]))) is None:
                raise TilingError(f"coverage failure: {p} is in no polygon")
    return t


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    while col < len(line):
        if line[col].isspace():
            col += 1
            continue
        start = col
        while col < len(line) and not line[col].isspace():
            col += 1
        out.append((line[start:col], start + 1))
    return out


def _rational_token(tok: str, lineno: int, col: int) -> Fraction:
    try:
        x = parse_scalar(tok)
    except ParseError as exc:
        raise ParseError(str(exc), lineno, col) from None
    if isinstance(x, QuadElem):
        raise ParseError(f"quadratic scalar {tok!r} not allowed in tiling files", lineno, col)
    return x


def parse_tiling(text: str) -> Tiling:
    """Parse and validate the tiling text format (``period`` and ``polygon`` lines)."""
    lattice = None
    polys = []
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line)
        if not toks or toks[0][0].startswith("#"):
            continue
        head, col = toks[0]
        args = toks[1:]
        if head == "period":
            if lattice is not None:
                raise ParseError("duplicate period line", lineno, col)
            if len(args) != 4:
                raise ParseError(f"period needs 4 scalars, got {len(args)}", lineno, col)
            v = [_rational_token(tok, lineno, c) for tok, c in args]
            lattice = PeriodLattice(Point(v[:2]), Point(v[2:]))
        elif head == "polygon":
            if not args:
                raise ParseError("polygon needs a color", lineno, col)
            ctok, ccol = args[0]
            if not ctok.isdigit():
                raise ParseError(f"bad color {ctok!r}", lineno, ccol)
            coords = args[1:]
            if len(coords) < 6 or len(coords) % 2:
                raise ParseError(
                    f"polygon needs an even number >= 6 of scalars, got {len(coords)}", lineno, col
                )
            vals = [_rational_token(tok, lineno, c) for tok, c in coords]
            verts = tuple(Point(vals[k : k + 2]) for k in range(0, len(vals), 2))
            polys.append(ColoredPolygon(int(ctok), verts))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    if lattice is None:
        raise ParseError("missing period line")
    return validate_tiling(Tiling(lattice, tuple(polys)))


def format_tiling(t: Tiling) -> str:
    lat = t.lattice
    lines = [f"period {lat.v1} {lat.v2}"]
    for poly in t.polygons:
        lines.append(f"polygon {poly.color} " + " ".join(str(v) for v in poly.vertices))
    return "\n".join(lines) + "\n"


def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise FileNotFoundError(f"no bundled tiling {name!r}")
    return resources.files("unitdist").joinpath("data", name).read_text("utf-8")


def load_bundled(name: str) -> Tiling:
    return parse_tiling(bundled_text(name))


# --- monochromatic unit edges --------------------------------------------------


def _scan_rows(t: Tiling, dirs: list[tuple[Fraction, Fraction]], d: int, rows: range):
    lat = t.lattice
    comp = t.compiled
    for i in rows:
        for j in range(d):
            x = lat.combine(Fraction(i, d), Fraction(j, d))
            x0, x1 = x[0], x[1]
            cx = comp.color(*_scaled((x0, x1)))
            if cx is None:
                raise TilingError(f"coverage gap at {lat.reduce((x0, x1))}")
            for k, (ux, uy) in enumerate(dirs):
                y = (x0 + ux, x1 + uy)
                cy = comp.color(*_scaled(y))
                if cy is None:
                    raise TilingError(f"coverage gap at {lat.reduce(y)}")
                if cy == cx:
                    return ((i * d + j) * len(dirs) + k, (x0, x1), k, cx)
    return None


def _scan_rows_job(args):
    return _scan_rows(*args)


def find_mono_unit_edge(
    t: Tiling, directions: Sequence[Point], grid_resolution: int, jobs: int = 1
) -> MonoEdge | None:
    """First monochromatic unit edge in scan order, or None.

    Sample points are ``(i/D)*v1 + (j/D)*v2`` for ``0 <= i, j < D`` with ``i``
    the outer loop; at each point the directions are tried in the given
    order. With ``jobs > 1`` rows are scanned in parallel and the hit with
    the smallest scan index wins, so the result does not depend on ``jobs``.
    """
    d = grid_resolution
    if d < 1:
        raise ValueError("grid_resolution must be >= 1")
    dirs = []
    for u in directions:
        if u.m is not None or u.dim != 2 or sq_distance(u, Point.origin(2)) != 1:
            raise ValueError(f"{u} is not a rational unit vector of the plane")
        dirs.append((u[0], u[1]))
    if jobs <= 1 or d == 1:
        hit = _scan_rows(t, dirs, d, range(d))
    else:
        jobs = min(jobs, d)
        chunks = [range(k * d // jobs, (k + 1) * d // jobs) for k in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_scan_rows_job, [(t, dirs, d, rows) for rows in chunks]))
        hits = [r for r in results if r is not None]
        hit = min(hits) if hits else None
    if hit is None:
        return None
    index, (x0, x1), k, color = hit
    u = Point(dirs[k])
    x = Point([x0, x1])
    return MonoEdge(x, x + u, u, color, index)


# --- Lebesgue density estimates --------------------------------------------------


def _dist2_to_segment(p, a, b) -> Fraction:
    dx, dy = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    len2 = dx * dx + dy * dy
    s = (px * dx + py * dy) / len2
    s = min(max(s, Fraction(0)), Fraction(1))
    ex, ey = px - s * dx, py - s * dy
    return ex * ex + ey * ey


def _disc_is_uniform(t: Tiling, x: tuple[Fraction, Fraction], eps: Fraction) -> bool:
    """True when the open disc of radius eps around x provably holds one colour.

    Sufficient condition: the reduced centre is farther than eps from every
    side of the fundamental parallelogram and from every polygon edge, so no
    lattice wrap and no polygon boundary crosses the disc.
    """
    lat = t.lattice
    r = lat.reduce(x)
    eps2 = eps * eps
    o = Point([0, 0])
    corners = [o, lat.v1, lat.v1 + lat.v2, lat.v2]
    for k in range(4):
        a, b = corners[k], corners[(k + 1) % 4]
        dx, dy = b[0] - a[0], b[1] - a[1]
        cr = dx * (r[1] - a[1]) - dy * (r[0] - a[0])
        if cr * cr <= eps2 * (dx * dx + dy * dy):
            return False
    for poly in t.polygons:
        vs = poly.vertices
        for k in range(len(vs)):
            if _dist2_to_segment(r, vs[k], vs[(k + 1) % len(vs)]) <= eps2:
                return False
    return True


def _block_seed(seed: int, block: int) -> str:
    return f"unitdist-density:{seed}:{block}"


def _sample_block(t: Tiling, color: int, x, eps: Fraction, count: int, seed: int, block: int) -> int:
    rng = random.Random(_block_seed(seed, block))
    half = 1 << (SAMPLE_BITS - 1)
    limit = half * half
    dc = lcm(x[0].denominator, x[1].denominator)
    xn = (x[0].numerator * (dc // x[0].denominator), x[1].numerator * (dc // x[1].denominator))
    en, ed = eps.numerator, eps.denominator
    # sample = x + eps * (j / 2^63), j uniform in [-2^63, 2^63)^2 with |j| < 2^63
    w = dc * ed * half
    bx, by = xn[0] * ed * half, xn[1] * ed * half
    step = en * dc
    comp = t.compiled
    hits = 0
    drawn = 0
    getrandbits = rng.getrandbits
    while drawn < count:
        jx = getrandbits(SAMPLE_BITS) - half
        jy = getrandbits(SAMPLE_BITS) - half
        if jx * jx + jy * jy >= limit:
            continue
        drawn += 1
        c = comp.color(bx + step * jx, by + step * jy, w)
        if c is None:
            sx = x[0] + eps * Fraction(jx, half)
            sy = x[1] + eps * Fraction(jy, half)
            raise TilingError(f"coverage gap at {t.lattice.reduce((sx, sy))}")
        if c == color:
            hits += 1
    return hits


def _sample_block_job(args):
    return _sample_block(*args)


def estimate_density(
    t: Tiling,
    color: int,
    x,
    eps,
    samples: int,
    seed: int,
    jobs: int = 1,
    shortcut: bool = True,
) -> DensityEstimate:
    """Monte Carlo estimate of the share of the disc B_eps(x) coloured ``color``.

    Samples come in blocks of BLOCK_SIZE, block b seeded from (seed, b), so
    the result depends only on the arguments and not on ``jobs``. When the
    disc provably holds a single colour the count is exact without drawing
    (``shortcut``); it equals what sampling would return.
    """
    xy = _rational_pair(x)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    point = Point(list(xy))
    if shortcut and _disc_is_uniform(t, xy, eps):
        hits = samples if point_color(t, xy) == color else 0
        return DensityEstimate(point, color, eps, samples, hits, seed)
    blocks = [
        (t, color, xy, eps, min(BLOCK_SIZE, samples - start), seed, b)
        for b, start in enumerate(range(0, samples, BLOCK_SIZE))
    ]
    if jobs <= 1 or len(blocks) == 1:
        hits = sum(_sample_block(*args) for args in blocks)
    else:
        with ProcessPoolExecutor(min(jobs, len(blocks))) as pool:
            hits = sum(pool.map(_sample_block_job, blocks))
    return DensityEstimate(point, color, eps, samples, hits, seed)
