"""Exact chromatic numbers with checkable certificates, and the bundled graph fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coloring import verify_coloring
from .errors import BudgetExceeded
from .field import Point, QuadElem, sq_distance
from .graph import UDGraph, build_graph

MAX_VERTICES = 64


@dataclass(frozen=True)
class Certificate:
    """``witness`` is a proper colouring using exactly ``chi`` colours.

    With ``lower_bound_method == "clique"`` the attached clique has ``chi``
    vertices. With ``"exhaustive-search"`` a complete search found no
    colouring with ``chi - 1`` colours.
    """

    chi: int
    witness: tuple[int, ...]
    lower_bound_method: str
    nodes_explored: int
    clique: tuple[int, ...]

    def check(self, g: UDGraph) -> None:
        if len(self.witness) != g.n:
            raise AssertionError("witness does not colour every vertex")
        if verify_coloring(g, self.witness):
            raise AssertionError("witness is not proper")
        if len(set(self.witness)) != self.chi:
            raise AssertionError("witness does not use exactly chi colours")
        adj = g.adjacency
        for a, u in enumerate(self.clique):
            for v in self.clique[a + 1 :]:
                if v not in adj[u]:
                    raise AssertionError(f"clique vertices {u}, {v} are not adjacent")
        if self.lower_bound_method == "clique" and len(self.clique) != self.chi:
            raise AssertionError("clique certificate has the wrong size")


def greedy_dsatur(g: UDGraph) -> tuple[int, ...]:
    """DSATUR colouring; ties go to higher degree, then lowest vertex id."""
    adj = g.adjacency
    colors = [-1] * g.n
    seen: list[set[int]] = [set() for _ in range(g.n)]
    for _ in range(g.n):
        v = min(
            (u for u in range(g.n) if colors[u] < 0),
            key=lambda u: (-len(seen[u]), -len(adj[u]), u),
        )
        c = 0
        while c in seen[v]:
            c += 1
        colors[v] = c
        for w in adj[v]:
            seen[w].add(c)
    return tuple(colors)


def _masks(g: UDGraph) -> list[int]:
    masks = [0] * g.n
    for i, j in g.edges:
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    return masks


def max_clique(g: UDGraph) -> tuple[int, ...]:
    """A maximum clique, by branch and bound over bitmasks."""
    masks = _masks(g)
    best: list[int] = []

    def expand(clique: list[int], cand: int) -> None:
        nonlocal best
        if len(clique) > len(best):
            best = clique[:]
        while cand:
            if len(clique) + cand.bit_count() <= len(best):
                return
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            clique.append(v)
            expand(clique, cand & masks[v])
            clique.pop()

    expand([], (1 << g.n) - 1)
    return tuple(sorted(best))


def _k_coloring(g: UDGraph, k: int, masks: list[int]) -> tuple[tuple[int, ...] | None, int]:
    """Complete backtracking search for a proper k-colouring.

    Vertex 0 is fixed to colour 0; every other choice is enumerated. The next
    vertex is the uncoloured one with fewest remaining colours (ties: higher
    degree, then lowest id). Returns (colouring or None, nodes explored).
    """
    n = g.n
    if n == 0:
        return (), 0
    if k <= 0:
        return None, 0
    full = (1 << k) - 1
    domain = [full] * n
    colors = [-1] * n
    degree = [m.bit_count() for m in masks]
    nodes = 0

    def assign(v: int, c: int) -> list[int] | None:
        # forward checking; returns the neighbours whose domain shrank
        colors[v] = c
        bit = 1 << c
        touched = []
        nb = masks[v]
        while nb:
            w = (nb & -nb).bit_length() - 1
            nb &= nb - 1
            if colors[w] < 0 and domain[w] & bit:
                domain[w] &= ~bit
                touched.append(w)
                if not domain[w]:
                    undo(v, c, touched)
                    return None
        return touched

    def undo(v: int, c: int, touched: list[int]) -> None:
        bit = 1 << c
        for w in touched:
            domain[w] |= bit
        colors[v] = -1

    def solve(remaining: int) -> bool:
        nonlocal nodes
        if remaining == 0:
            return True
        v = -1
        key = None
        for u in range(n):
            if colors[u] < 0:
                ku = (domain[u].bit_count(), -degree[u], u)
                if key is None or ku < key:
                    key, v = ku, u
        dom = domain[v]
        while dom:
            c = (dom & -dom).bit_length() - 1
            dom &= dom - 1
            nodes += 1
            touched = assign(v, c)
            if touched is None:
                continue
            if solve(remaining - 1):
                return True
            undo(v, c, touched)
        return False

    nodes += 1
    if assign(0, 0) is None:
        return None, nodes
    if solve(n - 1):
        return tuple(colors), nodes
    return None, nodes


def _canonical(colors: tuple[int, ...]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(c, len(relabel)) for c in colors)


def exact_chromatic(g: UDGraph, max_k: int = 8) -> Certificate:
    """Exact chromatic number of ``g`` (at most 64 vertices) with a certificate.

    The DSATUR colouring is the first incumbent. Smaller colour counts are
    tried downward until a search fails (exhaustive-search certificate) or the
    count reaches the maximum clique size (clique certificate).
    """
    if g.n > MAX_VERTICES:
        raise ValueError(f"graph has {g.n} vertices; the exact solver accepts at most {MAX_VERTICES}")
    if max_k < 1:
        raise ValueError("max_k must be >= 1")
    if g.n == 0:
        return Certificate(0, (), "clique", 0, ())
    masks = _masks(g)
    best = _canonical(greedy_dsatur(g))
    upper = max(best) + 1
    clique = max_clique(g)
    lower = len(clique)
    if lower > max_k:
        raise BudgetExceeded(max_k, upper)

    nodes = 0
    k = min(upper - 1, max_k)
    if k < upper - 1:
        found, explored = _k_coloring(g, k, masks)
        nodes += explored
        if found is None:
            raise BudgetExceeded(max_k, upper)
        best = _canonical(found)
        upper = len(set(best))
        k = upper - 1
    while k >= lower:
        found, explored = _k_coloring(g, k, masks)
        nodes += explored
        if found is None:
            cert = Certificate(upper, best, "exhaustive-search", nodes, clique)
            break
        best = _canonical(found)
        upper = len(set(best))
        k = upper - 1
    else:
        cert = Certificate(upper, best, "clique", nodes, clique)
    if cert.chi > max_k:
        raise BudgetExceeded(max_k, cert.chi)
    cert.check(g)
    return cert


# --- fixtures --------------------------------------------------------------

FIXTURES = ("moser-spindle", "k4-q4", "triangle-sqrt3", "trilattice-19")

# apex 0; rhombi {0,1,2,3} and {0,4,5,6} made of two triangles each; tips 3 and 6 joined
MOSER_EDGES = (
    (0, 1), (0, 2), (1, 2), (1, 3), (2, 3),
    (0, 4), (0, 5), (4, 5), (4, 6), (5, 6),
    (3, 6),
)  # fmt: skip


def _half(x) -> Fraction:
    return Fraction(x, 2)


def fixture_points(name: str) -> list[Point]:
    if name == "k4-q4":
        h = _half(1)
        return [
            Point([0, 0, 0, 0]),
            Point([1, 0, 0, 0]),
            Point([h, h, h, h]),
            Point([h, h, -h, h]),
        ]
    if name == "triangle-sqrt3":
        return [
            Point([0, 0], 3),
            Point([1, 0], 3),
            Point([_half(1), QuadElem(0, _half(1), 3)], 3),
        ]
    if name == "trilattice-19":
        # a*(1, 0) + b*(1/2, sqrt(3)/2) within hexagonal distance 2 of the origin
        pts = []
        for a in range(-2, 3):
            for b in range(-2, 3):
                if abs(a) + abs(b) + abs(a + b) <= 4:
                    pts.append(Point([a + _half(b), QuadElem(0, _half(b), 3)], 3))
        return pts
    if name == "moser-spindle":
        raise ValueError("moser-spindle is an abstract graph without coordinates")
    raise ValueError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


def fixture(name: str) -> UDGraph:
    if name == "moser-spindle":
        return UDGraph.from_edges(7, MOSER_EDGES)
    return build_graph(fixture_points(name))


def pairwise_unit(points: list[Point]) -> bool:
    return all(
        sq_distance(p, q) == 1 for i, p in enumerate(points) for q in points[i + 1 :]
    )
