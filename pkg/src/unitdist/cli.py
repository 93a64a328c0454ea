"""Command-line interface.

Exit codes: 0 success or no violation found, 1 mathematical finding
(violation, witness, colour budget exceeded), 2 usage error, 3 input-format
error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from .coloring import parity_color, verify_coloring
from .errors import BudgetExceeded, ParseError, TilingError, UnsupportedError
from .field import Point, parse_scalar
from .graph import build_graph, components, parse_points
from .solver import FIXTURES, exact_chromatic, fixture
from .tiling import (
    BUNDLED,
    bundled_text,
    estimate_density,
    find_mono_unit_edge,
    parse_tiling,
    point_color,
)
from .unitvectors import approx_direction, enum_unit_vectors, parse_field

EXIT_OK, EXIT_FINDING, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

REFUTER_NOTE = (
    "This refutes supplied candidate colorings only. Finding no violation at the "
    "tested resolution proves nothing about other colorings, and no finite scan "
    "can prove that every measurable coloring with few colors fails."
)


class InputError(Exception):
    pass


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _read_tiling(path: str):
    # bundled fixtures are found by bare name when no such file exists
    if not os.path.exists(path) and path in BUNDLED:
        return parse_tiling(bundled_text(path))
    return parse_tiling(_read(path))


def _rational(text: str) -> Fraction:
    x = parse_scalar(text)
    if not isinstance(x, Fraction):
        raise InputError(f"expected a rational, got {text!r}")
    return x


def _pair(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"expected x,y, got {text!r}")
    return _rational(parts[0]), _rational(parts[1])


def _parse_colors(text: str) -> list[int]:
    colors = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        tok = line.split("\t")[-1].strip()
        if not tok.isdigit():
            raise ParseError(f"bad color {tok!r}", lineno)
        colors.append(int(tok))
    return colors


def cmd_unitvecs(args, out: TextIO) -> int:
    for v in enum_unit_vectors(args.dim, parse_field(args.field), args.bound):
        out.write(f"{v}\n")
    return EXIT_OK


def cmd_build_graph(args, out: TextIO) -> int:
    g = build_graph(parse_points(_read(args.points)))
    out.write(f"vertices={g.n}\nedges={len(g.edges)}\n")
    for i, j in g.edges:
        out.write(f"edge\t{i}\t{j}\n")
    for comp in components(g):
        out.write("component\t" + " ".join(map(str, comp)) + "\n")
    return EXIT_OK


def cmd_color(args, out: TextIO) -> int:
    for p in parse_points(_read(args.points)):
        out.write(f"{p}\t{parity_color(p)}\n")
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    g = build_graph(parse_points(_read(args.points)))
    colors = _parse_colors(_read(args.colors))
    if len(colors) != g.n:
        raise InputError(f"{len(colors)} colors for {g.n} points")
    bad = verify_coloring(g, colors)
    if not bad:
        out.write("proper\n")
        return EXIT_OK
    for i, j in bad:
        out.write(f"violation\t{i}\t{j}\tcolor={colors[i]}\n")
    return EXIT_FINDING


def cmd_solve(args, out: TextIO) -> int:
    if args.fixture:
        g = fixture(args.fixture)
    elif args.points:
        g = build_graph(parse_points(_read(args.points)))
    else:
        raise UsageError("solve needs --fixture or a points file")
    try:
        cert = exact_chromatic(g, args.max_k)
    except BudgetExceeded as exc:
        out.write(f"budget-exceeded max-k={exc.max_k} upper={exc.upper_bound}\n")
        return EXIT_FINDING
    out.write(f"chi={cert.chi}\n")
    for v, c in enumerate(cert.witness):
        out.write(f"{v}\t{c}\n")
    out.write(f"method={cert.lower_bound_method}\n")
    out.write("clique=" + " ".join(map(str, cert.clique)) + "\n")
    out.write(f"nodes={cert.nodes_explored}\n")
    return EXIT_OK


def _angle_key(u: Point):
    # counterclockwise from +x: half-plane first, then exact cross-product order
    x, y = u[0], u[1]
    upper = y > 0 or (y == 0 and x > 0)
    return (0 if upper else 1, _Slope(x, y))


class _Slope:
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x, self.y = x, y

    def __lt__(self, other):
        return self.x * other.y - self.y * other.x > 0


def refuter_directions(max_denom: int) -> list[Point]:
    """Rational unit directions with denominator <= max_denom, counterclockwise from (1, 0)."""
    return sorted(enum_unit_vectors(2, None, max_denom), key=_angle_key)


def cmd_refute(args, out: TextIO) -> int:
    t = _read_tiling(args.tiling)
    dirs = refuter_directions(args.max_denom)
    hit = find_mono_unit_edge(t, dirs, args.grid, jobs=args.jobs)
    if hit is None:
        out.write(f"no-violation-found grid={args.grid} directions={len(dirs)}\n")
        return EXIT_OK
    # independent re-check of the witness
    assert point_color(t, hit.x) == point_color(t, hit.y) == hit.color
    out.write(f"witness {hit.x} {hit.y} color={hit.color}\n")
    return EXIT_FINDING


def cmd_density(args, out: TextIO) -> int:
    t = _read_tiling(args.tiling)
    est = estimate_density(
        t, args.color, _pair(args.point), _rational(args.eps), args.samples, args.seed, jobs=args.jobs
    )
    out.write(f"estimate={est.hits}/{est.samples}\n")
    return EXIT_OK


def cmd_approx_dir(args, out: TextIO) -> int:
    u = approx_direction(_pair(args.target), _rational(args.eps))
    out.write(f"{u}\n")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unitdist", description="Exact unit-distance graph laboratory.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("unitvecs", help="enumerate exact unit vectors")
    s.add_argument("--dim", type=int, required=True, choices=(2, 3, 4))
    s.add_argument("--field", default="Q", help="Q or Qsqrt:m")
    s.add_argument("--bound", type=_positive, required=True)
    s.set_defaults(func=cmd_unitvecs)

    s = sub.add_parser("build-graph", help="unit-distance graph of a points file")
    s.add_argument("points")
    s.set_defaults(func=cmd_build_graph)

    s = sub.add_parser("color", help="colour points with a constructive scheme")
    s.add_argument("--scheme", choices=("parity",), default="parity")
    s.add_argument("points")
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("verify", help="check a colouring of a points file")
    s.add_argument("points")
    s.add_argument("colors", help="one colour per line; the last tab-separated field is used")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="exact chromatic number with certificate")
    s.add_argument("points", nargs="?")
    s.add_argument("--fixture", choices=FIXTURES)
    s.add_argument("--max-k", type=_positive, default=8)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser(
        "refute-tiling",
        help="search a periodic colouring for monochromatic unit edges",
        description=REFUTER_NOTE,
    )
    s.add_argument("tiling")
    s.add_argument("--max-denom", type=_positive, required=True)
    s.add_argument("--grid", type=_positive, required=True)
    s.add_argument("--jobs", type=_positive, default=1)
    s.set_defaults(func=cmd_refute)

    s = sub.add_parser("density", help="Monte Carlo colour density in a small disc")
    s.add_argument("tiling")
    s.add_argument("--point", required=True, help="x,y")
    s.add_argument("--color", type=int, required=True)
    s.add_argument("--eps", required=True)
    s.add_argument("--samples", type=_positive, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--jobs", type=_positive, default=1)
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("approx-dir", help="rational unit vector close to a direction")
    s.add_argument("--target", required=True, help="x,y")
    s.add_argument("--eps", required=True)
    s.set_defaults(func=cmd_approx_dir)
    return p


def run(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"{parser.format_usage()}{exc}\n")
        return EXIT_USAGE
    except (InputError, ParseError, TilingError, UnsupportedError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
