from __future__ import annotations

import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from confmat.configuration import Realization
from confmat.errors import Disconnected, TooLarge, UnknownLabel
from confmat.families import (
    catalog,
    connected_catalog,
    ternary_handles_realization,
    identity_realization,
    prism_realization,
    random_realization,
    triangle_realization,
    wheel_labels,
    wheel_whirl_realization,
)
from confmat.fields import GF, QQ

TERNARY_BASES = [
    {1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5},
    {1, 2, 3, 6}, {1, 2, 4, 6}, {1, 3, 4, 6}, {2, 3, 4, 6},
    {1, 3, 5, 6}, {1, 4, 5, 6}, {2, 3, 5, 6}, {2, 4, 5, 6},
]


def as_int_sets(sets):
    return sorted(sorted(int(x) for x in s) for s in sets)


def circuit_realization(n, field=QQ):
    """U_{n-1,n}: the identity plus an all-ones column."""
    rows = [[1 if j == i or j == n - 1 else 0 for j in range(n)] for i in range(n - 1)]
    return Realization(field, [str(i + 1) for i in range(n)], rows)


def all_subsets(labels):
    for k in range(len(labels) + 1):
        yield from combinations(labels, k)


def test_rank_basics():
    M = prism_realization().matroid
    assert M.rank([]) == 0
    assert M.rank() == 4 and M.rank(M.labels) == 4
    with pytest.raises(UnknownLabel):
        M.rank(["7"])


def test_closure_preserves_rank():
    for W in (prism_realization(), ternary_handles_realization(), wheel_whirl_realization(3, 2, QQ)):
        M = W.matroid
        for S in all_subsets(W.labels):
            cl = M.closure(S)
            assert set(S) <= set(cl)
            assert M.rank(cl) == M.rank(S)
            assert M.closure(cl) == cl


def test_prism_circuits():
    assert as_int_sets(prism_realization().matroid.circuits()) == [[1, 2, 3, 4], [1, 2, 5, 6], [3, 4, 5, 6]]


def test_free_matroid():
    M = identity_realization(4).matroid
    assert M.circuits() == [] and M.coloops() == list(M.labels) and M.loops() == []
    assert M.bases() == [list(M.labels)]


def test_ternary_bases_circuits():
    M = ternary_handles_realization().matroid
    assert ternary_handles_realization().field == GF(3)
    assert as_int_sets(M.bases()) == as_int_sets(TERNARY_BASES)
    assert as_int_sets(M.circuits()) == [[1, 2, 3, 4, 5], [1, 2, 3, 4, 6], [1, 2, 5, 6], [3, 4, 5, 6]]


def test_too_large():
    W = identity_realization(17)
    with pytest.raises(TooLarge):
        W.matroid.bases()


def test_components():
    assert Realization(QQ, ["1", "2"], [[1, 1]]).matroid.is_connected()
    T = triangle_realization()
    S = T.direct_sum(T.relabel({"1": "4", "2": "5", "3": "6"}))
    assert len(S.matroid.components()) == 2
    assert prism_realization().matroid.is_connected()
    # (co)loops are their own components
    W = Realization(QQ, ["a", "b", "c"], [[1, 1, 0], [0, 0, 1]])
    assert W.matroid.components() == [["a", "b"], ["c"]]


def test_connectivity():
    assert wheel_whirl_realization(3, 1, QQ).matroid.is_3_connected()
    assert wheel_whirl_realization(4, 2, QQ).matroid.is_3_connected()
    P = prism_realization().matroid
    assert P.lambda_(["1", "2"]) == 1
    assert P.tutte_connectivity() == 2 and not P.is_3_connected()
    for n in (4, 5):
        assert circuit_realization(n).matroid.tutte_connectivity() == 2
    assert triangle_realization().matroid.tutte_connectivity() == math.inf
    assert ["1", "2"] in P.separations(2)


def test_prism_handles():
    parts = prism_realization().matroid.handle_partition()
    assert [h.elements for h in parts] == [("1", "2"), ("3", "4"), ("5", "6")]
    assert all(not h.disconnective for h in parts)


def test_ternary_handles():
    M = ternary_handles_realization().matroid
    parts = M.handle_partition()
    assert [h.elements for h in parts] == [("1", "2"), ("3", "4"), ("5",), ("6",)]
    assert all(not h.disconnective for h in parts)
    d = M.handle_decomposition()
    assert d.length == 2 and d.handles[-1] == ("6",)


@pytest.mark.parametrize("n,t", [(3, 1), (4, 1), (5, 1), (3, 2), (4, 2)])
def test_wheel_handles(n, t):
    M = wheel_whirl_realization(n, t, QQ).matroid
    parts = M.handle_partition()
    assert len(parts) == 2 * n
    assert all(h.size == 1 and not h.disconnective for h in parts)


def test_whirl_over_f5_has_rim_basis():
    M = wheel_whirl_realization(3, 2, GF(5)).matroid
    rim = [l for l in wheel_labels(3) if l.startswith("r")]
    assert M.is_basis(rim)
    W = wheel_whirl_realization(3, 1, GF(5)).matroid
    assert W.is_circuit(rim)


def test_decompositions():
    d = triangle_realization().matroid.handle_decomposition()
    assert d.length == 1
    d = prism_realization().matroid.handle_decomposition(["1", "2", "3", "4"])
    assert d.length == 2 and d.handles[1] == ("5", "6")
    W3 = wheel_whirl_realization(3, 1, QQ).matroid
    d = W3.handle_decomposition()
    nd = sum(1 for h in W3.handle_partition() if not h.disconnective)
    assert d.length >= 2 and nd >= d.length + 1
    T = triangle_realization()
    with pytest.raises(Disconnected):
        T.direct_sum(T.relabel({"1": "4", "2": "5", "3": "6"})).matroid.handle_decomposition()


def _check_decomposition(W):
    M = W.matroid
    d = M.handle_decomposition()
    assert list(d.filtration[0]) in M.circuits()
    assert set(d.filtration[-1]) == set(W.labels)
    for i, F in enumerate(d.filtration):
        sub = W.restrict(list(F)).matroid
        assert sub.is_connected()
        H = d.handles[i]
        assert sub.is_handle(H)
    return d


def test_catalog_invariants():
    cat = connected_catalog(QQ)
    assert len(cat) >= 20
    for name, W in cat:
        M = W.matroid
        assert M.is_connected(), name
        d = _check_decomposition(W)
        nd = sum(1 for h in M.handle_partition() if not h.disconnective)
        if d.length == 2:
            assert nd >= 3, name
        if d.length >= 2:
            assert nd >= d.length + 1, name
        if M.r >= 2:
            assert max(len(c) for c in M.circuits()) >= 3, name
        circuits = [set(c) for c in M.circuits()]
        parts = [set(h.elements) for h in M.handle_partition()]
        assert set().union(*parts) == set(W.labels)
        for C in circuits:
            assert C == set().union(*[H for H in parts if H & C])
        for H in parts:
            if H != set(W.labels):
                assert M.is_independent(H)
                assert any(H < C for C in circuits), name


def _check_axioms(W):
    M = W.matroid
    E = W.labels
    subsets = list(all_subsets(E))
    for S in subsets:
        assert M.rank(S) <= len(S)
    for _ in range(60):
        A, B = random.sample(subsets, 2)
        union, inter = set(A) | set(B), set(A) & set(B)
        assert M.rank(union) + M.rank(inter) <= M.rank(A) + M.rank(B)
        if set(A) <= set(B):
            assert M.rank(A) <= M.rank(B)
    bases = [set(b) for b in M.bases()]
    assert all(len(b) == M.r for b in bases)
    for B1 in bases:
        for B2 in bases:
            for x in B1 - B2:
                assert any((B1 - {x}) | {y} in bases for y in B2 - B1)
    circuits = [set(c) for c in M.circuits()]
    for C1 in circuits:
        for C2 in circuits:
            assert C1 == C2 or not C1 <= C2


def test_axioms_on_catalog():
    random.seed(0)
    for name, W in catalog(GF(101)).items():
        _check_axioms(W)


def test_duality_bases_and_lambda():
    for name, W in catalog(GF(101)).items():
        M, D = W.matroid, W.dual().matroid
        comp = sorted(sorted(set(W.labels) - set(B)) for B in M.bases())
        assert sorted(sorted(B) for B in D.bases()) == comp, name
        for S in all_subsets(W.labels[:5]):
            assert M.lambda_(S) == D.lambda_(S)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_random_matroid_axioms(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    W = random_realization(GF(3), rng.randint(0, min(4, n)), n, rng, density=0.6)
    random.seed(seed)
    _check_axioms(W)
    M = W.matroid
    assert set(M.loops()) == {l for l in W.labels if all(x == 0 for x in W.matrix.column(W.position(l)))}
    assert set(M.coloops()) == set.intersection(*[set(b) for b in M.bases()]) if M.bases() else True
