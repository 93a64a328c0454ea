"""Finite unit-distance graphs and the points file format."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from .errors import FieldMismatchError, ParseError
from .field import Point, QuadElem, parse_scalar, promote, sq_distance


@dataclass(frozen=True)
class UDGraph:
    """A finite graph on ``n`` vertices with sorted edges ``(i, j)``, ``i < j``.

    ``points`` is None for abstract graphs (e.g. the Moser spindle fixture).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    points: tuple[Point, ...] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> UDGraph:
        norm = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for {n} vertices")
            norm.add((min(i, j), max(i, j)))
        return cls(n, tuple(sorted(norm)))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def with_edge(self, i: int, j: int) -> UDGraph:
        """Copy with one extra edge; the result is abstract (not a unit-distance graph)."""
        return UDGraph.from_edges(self.n, [*self.edges, (i, j)])

    def permuted(self, perm: Sequence[int]) -> UDGraph:
        """Relabel vertex ``v`` as ``perm[v]``."""
        edges = [(perm[i], perm[j]) for i, j in self.edges]
        g = UDGraph.from_edges(self.n, edges)
        if self.points is None:
            return g
        pts: list[Point | None] = [None] * self.n
        for v, p in enumerate(self.points):
            pts[perm[v]] = p
        return UDGraph(g.n, g.edges, tuple(pts))


def _common_field(points: Sequence[Point]) -> tuple[int, int | None]:
    dim, m = points[0].dim, points[0].m
    for k, p in enumerate(points):
        if p.dim != dim:
            raise ValueError(f"dimension mismatch at point {k}: {p.dim} vs {dim}")
        if p.m != m:
            raise FieldMismatchError(f"field mismatch at point {k}")
    return dim, m


def _unit_pairs_rational(points: Sequence[Point]) -> list[tuple[int, int]]:
    # integer numerators over one common denominator L: unit <=> sum of squares == L^2
    den = 1
    for p in points:
        for x in p.coords:
            den = lcm(den, x.denominator)
    ints = [tuple(x.numerator * (den // x.denominator) for x in p.coords) for p in points]
    target = den * den
    out = []
    for i in range(len(ints)):
        pi = ints[i]
        for j in range(i + 1, len(ints)):
            s = 0
            for a, b in zip(pi, ints[j]):
                s += (a - b) * (a - b)
                if s > target:
                    break
            if s == target:
                out.append((i, j))
    return out


def build_graph(points: Sequence[Point]) -> UDGraph:
    """The induced unit-distance graph: every pair at exact distance 1 is an edge."""
    points = tuple(points)
    if not points:
        return UDGraph(0, (), ())
    _, m = _common_field(points)
    seen: dict[Point, int] = {}
    for k, p in enumerate(points):
        if p in seen:
            raise ValueError(f"duplicate point: indices {seen[p]} and {k}")
        seen[p] = k
    if m is None:
        edges = _unit_pairs_rational(points)
    else:
        edges = [
            (i, j)
            for i in range(len(points))
            for j in range(i + 1, len(points))
            if sq_distance(points[i], points[j]) == 1
        ]
    return UDGraph(len(points), tuple(edges), points)


def local_neighbors(x: Point, unit_vectors: Iterable[Point]) -> list[Point]:
    """Neighbours ``x + u`` of ``x`` in the translate graph, one per supplied direction."""
    return [x + u for u in unit_vectors]


def translate_graph(g: UDGraph, t: Point) -> UDGraph:
    if g.points is None:
        raise ValueError("cannot translate an abstract graph")
    return UDGraph(g.n, g.edges, tuple(p + t for p in g.points))


def components(g: UDGraph) -> list[list[int]]:
    parent = list(range(g.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


# --- points file ---------------------------------------------------------------


def parse_points(text: str) -> list[Point]:
    """One point per line, coordinates separated by single spaces; ``#`` lines ignored.

    If any scalar uses ``sqrt(m)`` every point is promoted into Q[sqrt(m)].
    """
    rows: list[tuple[int, list]] = []
    dim = None
    tags: set[int] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split(" ")
        coords = []
        col = 1
        for tok in fields:
            try:
                x = parse_scalar(tok)
            except ParseError as exc:
                raise ParseError(str(exc), lineno, col) from None
            if isinstance(x, QuadElem):
                tags.add(x.m)
            coords.append(x)
            col += len(tok) + 1
        if dim is None:
            dim = len(coords)
            if dim < 2:
                raise ParseError("points need dimension >= 2", lineno, 1)
        elif len(coords) != dim:
            raise ParseError(f"expected {dim} coordinates, got {len(coords)}", lineno, 1)
        rows.append((lineno, coords))
    if len(tags) > 1:
        raise ParseError(f"field mismatch: mixed radicals {sorted(tags)}")
    m = tags.pop() if tags else None
    return [Point([promote(x, m) for x in coords], m) for _, coords in rows]


def format_points(points: Iterable[Point]) -> str:
    return "".join(f"{p}\n" for p in points)

