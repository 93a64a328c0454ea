"""Acceptance criteria, one test per criterion.

Each test is tagged with ``criterion(n, title)``; ``conftest.py`` prints a
PASS/FAIL line per criterion at the end of the run.
"""

import io
import itertools
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from math import lcm

import pytest
from oracles import lattice_oracle

from unitdist.cli import run
from unitdist.coloring import parity_color, verify_coloring
from unitdist.field import Point, sq_distance
from unitdist.graph import build_graph, format_points
from unitdist.solver import exact_chromatic, fixture, fixture_points
from unitdist.tiling import estimate_density, load_bundled, point_color
from unitdist.unitvectors import enum_unit_vectors

criterion = pytest.mark.criterion


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def parity_violations(points, vecs):
    bad = []
    for x in points:
        c = parity_color(x)
        bad.extend((x, u) for u in vecs if parity_color(x + u) == c)
    return bad


def expected_vectors(oracle, bound):
    return sorted(v for v, den in oracle.items() if den <= bound)


@criterion(1, "parity colouring of Q^2 is proper")
def test_criterion_1_q2_parity():
    with Clock() as clock:
        vecs = enum_unit_vectors(2, None, 100)
        assert len(enum_unit_vectors(2, None, 25)) == 36
        assert [tuple(v) for v in vecs] == expected_vectors(lattice_oracle(2, 100), 100)
        assert len(vecs) == 132
        grid = [Point([F(i, 50), F(j, 50)]) for i in range(50) for j in range(50)]
        rng = random.Random(20241)
        rand = [
            Point([F(rng.randint(-10**4, 10**4), rng.randint(1, 1000)) for _ in range(2)])
            for _ in range(1000)
        ]
        assert parity_violations(grid + rand, vecs) == []
    assert clock.elapsed < 60


@criterion(2, "parity colouring of Q^3 is proper")
def test_criterion_2_q3_parity():
    with Clock() as clock:
        vecs = enum_unit_vectors(3, None, 30)
        rng = random.Random(20242)
        pts = [
            Point([F(rng.randint(-3 * d, 3 * d), d) for _ in range(3)])
            for d in range(1, 21)
            for _ in range(25)
        ]
        pts += [Point([F(rng.randint(-60, 60), rng.randint(1, 20)) for _ in range(3)]) for _ in range(250)]
        assert max(c.denominator for p in pts for c in p) <= 20
        assert parity_violations(pts, vecs) == []
    assert clock.elapsed < 60


@criterion(3, "unit-distance K4 in Q^4 needs 4 colours")
def test_criterion_3_k4_q4():
    with Clock() as clock:
        pts = fixture_points("k4-q4")
        assert [sq_distance(p, q) for p, q in itertools.combinations(pts, 2)] == [1] * 6
        g = build_graph(pts)
        assert len(g.edges) == 6
        cert = exact_chromatic(g)
        assert cert.chi == 4
        assert cert.lower_bound_method in ("clique", "exhaustive-search")
        cert.check(g)
    assert clock.elapsed < 1


@criterion(4, "triangle lattice in Q[sqrt 3]^2 needs 3 colours")
def test_criterion_4_triangle_lattice():
    with Clock() as clock:
        for name in ("triangle-sqrt3", "trilattice-19"):
            pts = fixture_points(name)
            g = build_graph(pts)
            assert g == fixture(name)
            assert all(sq_distance(pts[i], pts[j]) == 1 for i, j in g.edges)
            cert = exact_chromatic(g)
            assert cert.chi == 3
            cert.check(g)
    assert clock.elapsed < 10


@criterion(5, "Moser spindle has chromatic number 4")
def test_criterion_5_moser():
    g = fixture("moser-spindle")
    with Clock() as clock:
        cert = exact_chromatic(g)
    assert clock.elapsed < 1
    assert cert.chi == 4 and cert.lower_bound_method == "exhaustive-search"
    assert verify_coloring(g, cert.witness) == []
    proper3 = [c for c in itertools.product(range(3), repeat=7) if all(c[i] != c[j] for i, j in g.edges)]
    assert len(proper3) == 0


@criterion(6, "unit-vector enumeration matches the lattice oracle")
def test_criterion_6_enumeration():
    assert len(enum_unit_vectors(2, None, 25)) == 36
    oracle2 = lattice_oracle(2, 200)
    for bound in range(1, 201):
        assert [tuple(v) for v in enum_unit_vectors(2, None, bound)] == expected_vectors(oracle2, bound)
    oracle3 = lattice_oracle(3, 30)
    for bound in range(1, 31):
        vecs = enum_unit_vectors(3, None, bound)
        assert [tuple(v) for v in vecs] == expected_vectors(oracle3, bound)
    for v in enum_unit_vectors(3, None, 30):
        d = lcm(*(c.denominator for c in v))
        assert d % 2 == 1
        assert sum((c * d).numerator for c in v) % 2 == 1


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return run([str(a) for a in argv], out, err), out.getvalue()


@criterion(7, "refuter finds stripes2 and clears squares9")
def test_criterion_7_refuter():
    with Clock() as clock:
        code, out = _cli("refute-tiling", "stripes2.til", "--max-denom", 5, "--grid", 4)
        assert code == 1
        x0, x1, y0, y1 = out.split()[1:5]
        x, y = Point([x0, x1]), Point([y0, y1])
        stripes = load_bundled("stripes2.til")
        assert sq_distance(x, y) == 1
        assert point_color(stripes, x) == point_color(stripes, y)
        code, out = _cli("refute-tiling", "squares9.til", "--max-denom", 25, "--grid", 30)
        assert code == 0 and out.startswith("no-violation-found")
    assert clock.elapsed < 120


EPS = F(1, 100)
SAMPLES = 10**5
SIDE = F(3, 5)


def _margin(t, p):
    """Distance from p to the nearest square edge of squares9 (axis-aligned grid)."""
    return min(min(c % SIDE, SIDE - c % SIDE) for c in t.lattice.reduce(p))


@criterion(8, "density 1 at a point forces density 0 one unit away")
def test_criterion_8_density_shadow():
    t = load_bundled("squares9.til")
    dirs = enum_unit_vectors(2, None, 100)
    rng = random.Random(20248)
    with Clock() as clock:
        checked = 0
        for _ in range(20):
            while True:
                y = Point([F(rng.randint(0, 1799), 1000), F(rng.randint(0, 1799), 1000)])
                if _margin(t, y) > EPS:
                    break
            c = point_color(t, y)
            partners = [u for u in rng.sample(dirs, len(dirs)) if _margin(t, y + u) > EPS][:20]
            assert len(partners) == 20
            assert estimate_density(t, c, y, EPS, SAMPLES, rng.randrange(2**32)).estimate == 1
            for u in partners:
                assert estimate_density(t, c, y + u, EPS, SAMPLES, rng.randrange(2**32)).estimate == 0
                checked += 1
        assert checked == 400

        edge = Point([SIDE, F(3, 10)])
        e = estimate_density(t, point_color(t, edge), edge, EPS, SAMPLES, 8)
        assert F(48, 100) <= e.estimate <= F(52, 100)

        # complementary densities across unit edges near tile boundaries
        for k in range(6):
            x = Point([SIDE * rng.randint(0, 2) + F(rng.randint(-5, 5), 1000), F(rng.randint(0, 1799), 1000)])
            u = rng.choice(dirs)
            c = point_color(t, x)
            total = estimate_density(t, c, x, EPS, SAMPLES, 100 + k).estimate
            total += estimate_density(t, c, x + u, EPS, SAMPLES, 200 + k).estimate
            assert total <= F(102, 100), (x, u)
    assert clock.elapsed < 60


def _battery(tmp_path, jobs):
    pts = tmp_path / "tri.txt"
    pts.write_text(format_points(fixture_points("trilattice-19")), encoding="utf-8")
    q2 = tmp_path / "q2.txt"
    q2.write_text("0 0\n3/5 4/5\n3/4 1/6\n8/5 4/5\n1 0\n7/3 -2\n", encoding="utf-8")
    commands = [
        ["unitvecs", "--dim", "2", "--bound", "100"],
        ["unitvecs", "--dim", "3", "--bound", "12"],
        ["unitvecs", "--dim", "2", "--field", "Qsqrt:3", "--bound", "3"],
        ["build-graph", str(pts)],
        ["color", "--scheme", "parity", str(q2)],
        ["solve", "--fixture", "moser-spindle"],
        ["solve", str(pts)],
        ["refute-tiling", "stripes2.til", "--max-denom", "13", "--grid", "6", "--jobs", str(jobs)],
        ["refute-tiling", "squares9.til", "--max-denom", "13", "--grid", "8", "--jobs", str(jobs)],
        ["density", "squares9.til", "--point", "3/5,3/10", "--color", "0", "--eps", "1/100",
         "--samples", "20000", "--seed", "9", "--jobs", str(jobs)],
        ["approx-dir", "--target", "1,2", "--eps", "1/100000"],
    ]
    outputs = []
    for argv in commands:
        proc = subprocess.run([sys.executable, "-m", "unitdist", *argv], capture_output=True)
        outputs.append((proc.returncode, proc.stdout))
    return outputs


@criterion(9, "CLI output is byte-identical across runs and job counts")
def test_criterion_9_determinism(tmp_path):
    first = _battery(tmp_path, 1)
    assert first == _battery(tmp_path, 1)
    assert first == _battery(tmp_path, 3)
    assert all(code in (0, 1) and out for code, out in first)
