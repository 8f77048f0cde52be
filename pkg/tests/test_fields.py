from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from confmat.errors import DivisionByZero, FieldMismatch, ZeroInput
from confmat.fields import GF, QQ, Scalar, is_prime, is_square, parse_field, scalar_arith, tonelli_shanks

from conftest import FIELDS

fields = st.sampled_from(FIELDS)
rationals = st.fractions(max_denominator=50).map(lambda q: f"{q.numerator}/{q.denominator}")


def elems(field):
    return st.integers(-10**6, 10**6).map(field) if field != QQ else rationals.map(field)


@st.composite
def triples(draw):
    f = draw(fields)
    return f, draw(elems(f)), draw(elems(f)), draw(elems(f))


def test_rational_addition():
    assert scalar_arith(QQ("1/2"), QQ("1/3"), "add") == QQ("5/6")


def test_residue_product():
    assert scalar_arith(GF(5)(2), GF(5)(3), "mul") == GF(5)(1)


def test_canonical_fraction():
    a = QQ("2/4")
    assert str(a) == "1/2"
    assert str(QQ(3) / QQ(-6)) == "-1/2"
    assert QQ("-3/6").value.denominator > 0


def test_residues_are_reduced():
    assert GF(7)(-1).value == 6
    assert str(GF(7)(15)) == "1"


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        scalar_arith(QQ(1), QQ(0), "div")
    with pytest.raises(DivisionByZero):
        GF(5)(3) / GF(5)(0)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        GF(5)(1) + GF(7)(1)
    with pytest.raises(FieldMismatch):
        scalar_arith(QQ(1), GF(7)(1), "add")


def test_square_over_q():
    assert is_square(QQ("4/9")) == (True, QQ("2/3"))
    assert is_square(QQ(2))[0] is False
    assert is_square(QQ(-4))[0] is False


def test_square_mod_5():
    squares = {(x * x) % 5 for x in range(1, 5)}
    assert squares == {1, 4}
    assert is_square(GF(5)(2)) == (False, None)
    ok, w = is_square(GF(5)(4))
    assert ok and w * w == GF(5)(4)


def test_square_mod_2_always():
    assert is_square(GF(2)(1))[0]


def test_square_of_zero_rejected():
    with pytest.raises(ZeroInput):
        is_square(QQ(0))


def test_tonelli_shanks_exhaustive_small_primes():
    for p in (3, 5, 7, 13, 17, 41, 97, 101):
        squares = {(x * x) % p for x in range(1, p)}
        for a in range(1, p):
            r = tonelli_shanks(a, p)
            if a in squares:
                assert r is not None and r * r % p == a
            else:
                assert r is None


def test_is_prime_against_sieve():
    n = 2000
    sieve = [True] * n
    sieve[0] = sieve[1] = False
    for i in range(2, n):
        if sieve[i]:
            for j in range(i * i, n, i):
                sieve[j] = False
    assert [i for i in range(n) if is_prime(i)] == [i for i in range(n) if sieve[i]]
    assert is_prime(2147483647)


@pytest.mark.parametrize("bad", [1, 4, 2**31 + 11, "Fp:9", "R"])
def test_parse_field_rejects(bad):
    spec = f"Fp:{bad}" if isinstance(bad, int) else bad
    with pytest.raises(Exception):
        parse_field(spec)


def test_parse_field_forms():
    assert parse_field("Q") == QQ
    assert parse_field("Fp:7") == GF(7)
    assert parse_field({"Fp": 7}) == GF(7)
    assert GF(7).to_json() == {"Fp": 7}
    assert QQ.to_json() == "Q"


@given(triples())
def test_field_axioms(t):
    f, a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == f(0)
    if a:
        assert a * a.inverse() == f(1)


@given(fields.flatmap(lambda f: st.tuples(st.just(f), elems(f), elems(f))))
def test_square_properties(t):
    f, a, b = t
    if not a:
        return
    ok, w = is_square(a * a)
    assert ok and w * w == a * a
    if b and is_square(a)[0] and is_square(b)[0]:
        assert is_square(a * b)[0]


def test_scalar_is_hashable_and_typed():
    assert len({GF(7)(1), GF(7)(8), GF(5)(1)}) == 2
    assert isinstance(QQ(3), Scalar)
