"""Acceptance suite: one test per criterion, each with its own time budget.

Every test prints a single ``ACCEPT <n> PASS|FAIL`` line (visible even when
pytest captures output) and fails if the budget is exceeded.
"""

from __future__ import annotations

import json
import random
import time
from contextlib import contextmanager
from itertools import combinations

import pytest

from confmat import configuration as cf
from confmat.cli import main
from confmat.families import (
    catalog,
    connected_catalog,
    generic_uniform,
    graph_configuration,
    matroid_polynomial,
    momentum_covector,
    prism_realization,
    random_graph,
    random_momentum,
    random_realization,
    second_kirchhoff,
    ternary_handles_realization,
    triangle_realization,
    u36_example_realization,
    wheel_whirl_realization,
)
from confmat.fields import GF, QQ
from confmat.groebner import Ideal, ideal_equal, ideal_intersect, ideal_quotient
from confmat.linalg import Matrix, rank
from confmat.poly import PolyRing, proportionality

F101 = GF(101)
PRISM_PSI = "x1*x2*(x3+x4)*(x5+x6) + x3*x4*(x1+x2)*(x5+x6) + x5*x6*(x1+x2)*(x3+x4)"


@pytest.fixture
def criterion(capsys):
    """Context manager timing a criterion and printing its verdict line."""

    @contextmanager
    def run(number: int, title: str, limit: float):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            in_time = elapsed < limit
            verdict = "PASS" if ok and in_time else "FAIL"
            with capsys.disabled():
                print(f"\nACCEPT {number:2d} {verdict} {title} ({elapsed:.2f}s, limit {limit:g}s)")
        assert in_time, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"

    return run


def random_pool(field, count, seed, r_max=5, n_max=8):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, n_max)
        out.append(random_realization(field, rng.randint(0, min(r_max, n)), n, rng))
    return out


def test_01_prism_polynomial(criterion, tmp_path, capsys):
    path = tmp_path / "prism.json"
    path.write_text(json.dumps(prism_realization().to_json()))
    with criterion(1, "prism polynomial via the CLI", 1.0):
        code = main(["poly", "--file", str(path)])
        out = json.loads(capsys.readouterr().out)
        ring = PolyRing(QQ, [str(i) for i in range(1, 7)])
        got = ring(out["polynomial"])
        assert code == 0
        assert got == ring(PRISM_PSI)
        assert out["terms"] == 12 and all(c == 1 for c in got.coeffs.values())


def test_02_cauchy_binet(criterion):
    with criterion(2, "det of the form equals the basis expansion", 30.0):
        pool = random_pool(F101, 200, seed=2) + list(catalog(F101).values()) + list(catalog(QQ).values())
        for W in pool:
            assert W.det_form() == W.config_poly()


def test_03_triangle(criterion):
    with criterion(3, "triangle ideals over Q and F_2", 1.0):
        W = triangle_realization(QQ)
        R = W.ring
        m = Ideal(R, R.gens())
        assert ideal_equal(W.minors_ideal(), m)
        assert ideal_equal(W.jacobian_ideal(), m)
        T = triangle_realization(GF(2))
        R2 = T.ring
        J = T.jacobian_ideal()
        assert ideal_equal(J, Ideal(R2, [R2("x1 - x3"), R2("x2 - x3"), R2("x3^2")]))
        assert J.radical_contains(R2("x3"))
        assert not J.contains(R2("x3"))


def test_04_codimension_three(criterion):
    with criterion(4, "codimension 3 of the minors ideal", 300.0):
        cases = [
            ("prism", prism_realization(F101)),
            ("W_3", wheel_whirl_realization(3, 1, F101)),
            ("W_4", wheel_whirl_realization(4, 1, F101)),
            ("W^3", wheel_whirl_realization(3, 2, F101)),
            ("prism/Q", prism_realization(QQ)),
            ("W_3/Q", wheel_whirl_realization(3, 1, QQ)),
        ]
        for name, W in cases:
            assert W.minors_ideal().codimension() == 3, name


def test_05_whirl_codimensions(criterion):
    expected = [(QQ, 4), (GF(7), 4), (GF(2), 4), (GF(5), 4), (GF(3), 3)]
    with criterion(5, "whirl partial-derivative codimensions", 300.0):
        bases = wheel_whirl_realization(3, 2, QQ).matroid.bases()
        labels = wheel_whirl_realization(3, 2, QQ).labels
        for field, codim in expected:
            pM = matroid_polynomial(bases, labels, field)
            I = Ideal(pM.ring, [pM.diff(l) for l in pM.ring.labels])
            assert I.codimension() == codim, str(field)
        psi = wheel_whirl_realization(3, 2, QQ).config_poly()
        assert Ideal(psi.ring, [psi.diff(l) for l in psi.ring.labels]).codimension() == 3


def test_06_prism_colons(criterion):
    cases = [
        ("2*((x3+x4)*x5^2 - (x3+x4)*x6^2)", ["x1", "x2", "x3*x4*x5 + x3*x4*x6 + x3*x5*x6 + x4*x5*x6"]),
        ("2*(x1+x2)^2*x4*x6", ["x3", "x4", "x5", "x6"]),
        ("2*x2*(x3+x4)*x6^2", ["x1", "x2", "x3 + x4", "x5 + x6"]),
        ("2*(x1+x2)*(x3+x4)*x6", ["x1", "x2", "x3", "x4", "x5", "x6"]),
    ]
    with criterion(6, "prism Jacobian colon identities over Q and F_101", 600.0):
        for field in (QQ, F101):
            W = prism_realization(field)
            R = W.ring
            J = W.jacobian_ideal()
            for f, gens in cases:
                Q = ideal_quotient(J, R(f))
                target = Ideal(R, [R(g) for g in gens])
                assert Q.contains_ideal(target) and target.contains_ideal(Q), (str(field), f)


def test_07_radical_cross_membership(criterion):
    with criterion(7, "M_W in rad J_W and J_W in M_W", 600.0):
        for field in (F101, QQ):
            for W in (triangle_realization(field), prism_realization(field),
                      wheel_whirl_realization(3, 1, field), wheel_whirl_realization(3, 2, field)):
                J, M = W.jacobian_ideal(), W.minors_ideal()
                assert all(J.radical_contains(g) for g in M.gens)
                assert all(M.contains(g) for g in J.gens)


def test_08_duality(criterion):
    with criterion(8, "Cremona transform against the dual polynomial", 60.0):
        for W in random_pool(F101, 100, seed=8) + list(catalog(F101).values()):
            c = proportionality(cf.cremona_transform(W.config_poly()), W.dual().config_poly())
            assert c is not None and c.is_square()[0]
        for W in catalog(QQ).values():
            c = cf.duality_ratio(W)
            ok, root = c.is_square()
            assert ok and root * root == c


def test_09_deletion_contraction(criterion):
    with criterion(9, "adapted-basis deletion-contraction", 60.0):
        pool = list(catalog(F101).values()) + list(catalog(QQ).values()) + random_pool(F101, 100, seed=9)
        for W in pool:
            for e in W.labels:
                assert cf.deletion_contraction_check(W, e)


def test_10_handles(criterion):
    def partition(W):
        return [(h.elements, h.disconnective) for h in W.matroid.handle_partition()]

    with criterion(10, "handle partitions and non-disconnective counts", 60.0):
        assert partition(prism_realization()) == [(("1", "2"), False), (("3", "4"), False), (("5", "6"), False)]
        assert partition(ternary_handles_realization()) == [
            (("1", "2"), False), (("3", "4"), False), (("5",), False), (("6",), False)]
        for n in (3, 4, 5, 6):
            for t in (1, 2):
                hp = wheel_whirl_realization(n, t, QQ).matroid.handle_partition()
                assert len(hp) == 2 * n and all(h.size == 1 and not h.disconnective for h in hp)
        cat = connected_catalog(QQ)
        assert len(cat) >= 20
        for name, W in cat:
            M = W.matroid
            d = M.handle_decomposition()
            nd = sum(1 for h in M.handle_partition() if not h.disconnective)
            if d.length >= 2:
                assert nd >= d.length + 1, name


def test_11_hessian_rank(criterion):
    with criterion(11, "rank 3 of the rank-2 coefficient matrix", 10.0):
        for n in range(4, 9):
            W = generic_uniform(2, n, seed=n, field=QQ)
            rows = [[0] * n for _ in range(n)]
            for i, j in combinations(range(n), 2):
                c = W.coefficient([W.labels[i], W.labels[j]])
                rows[i][j] = rows[j][i] = str(c)
            assert rank(Matrix(QQ, rows)) == 3, n


def test_12_linear_relation(criterion):
    with criterion(12, "q12 + q13 = q23 for the rank-3 example", 1.0):
        Q = u36_example_realization(QQ).config_form()
        assert Q[0][1] + Q[0][2] == Q[1][2]


def test_13_quotients(criterion):
    with criterion(13, "elementary quotient formula and second Kirchhoff polynomial", 120.0):
        rng = random.Random(13)
        done = 0
        while done < 100:
            n = rng.randint(1, 8)
            W = random_realization(F101, rng.randint(1, min(5, n)), n, rng)
            phi = [rng.randrange(101) for _ in range(W.rank)]
            if not any(phi):
                continue
            c = proportionality(cf.quotient_poly_formula(W, phi), cf.elementary_quotient(W, phi).config_poly())
            assert c is not None and c.is_square()[0]
            done += 1
        done = 0
        while done < 10:
            G = random_graph(rng)
            W = graph_configuration(G, F101)
            if W.rank == 0:
                continue
            p = random_momentum(G, rng, F101)
            f = second_kirchhoff(G, p, "forest", F101)
            g = cf.elementary_quotient(W, momentum_covector(G, p, F101)).config_poly()
            c = proportionality(f, g)
            assert c is not None and c.is_square()[0]
            done += 1


def test_14_direct_sums(criterion):
    with criterion(14, "direct sums of two triangles over Q", 60.0):
        T1 = triangle_realization(QQ)
        T2 = T1.relabel({"1": "4", "2": "5", "3": "6"})
        S = T1.direct_sum(T2)
        R = S.ring
        psi1, psi2 = T1.config_poly().embed(R), T2.config_poly().embed(R)
        assert S.config_poly() == psi1 * psi2
        J1 = Ideal(R, [g.embed(R) for g in T1.jacobian_ideal().gens])
        J2 = Ideal(R, [g.embed(R) for g in T2.jacobian_ideal().gens])
        rhs = ideal_intersect(ideal_intersect(Ideal(R, [psi1, psi2]), J1), J2)
        assert ideal_equal(S.jacobian_ideal(), rhs)
        lhs = Ideal(R, [psi1 * g for g in J2.gens] + [g * psi2 for g in J1.gens])
        assert ideal_equal(lhs, rhs)
