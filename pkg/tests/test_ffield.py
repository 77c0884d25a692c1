import random

import pytest
from hypothesis import given, settings, strategies as st

from paleyclique.errors import DivisionByZero, FieldMismatch, LabelOutOfRange, NotPrime, Overflow
from paleyclique.ffield import (Field, build_field, elem_of, field_arith, field_inv, field_pow,
                                is_irreducible, is_quadratic_residue, label_of,
                                quadratic_residue_set)

FIELDS = [(3, 1), (5, 1), (13, 1), (3, 2), (5, 2), (5, 3), (3, 4), (7, 3), (13, 2), (5, 5)]


# -- independent oracle: schoolbook product + long division on coefficient lists


def naive_mul(a, b, modulus, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    r = len(modulus) - 1
    for top in range(len(prod) - 1, r - 1, -1):
        c = prod[top]
        if c:
            for i in range(r + 1):
                prod[top - r + i] = (prod[top - r + i] - c * modulus[i]) % p
    return prod[:r]


def lex_first_cubic_by_roots(p):
    # a cubic is irreducible iff it has no root
    for a in range(p):
        for b in range(p):
            for c in range(p):
                if all((x**3 + a * x * x + b * x + c) % p for x in range(p)):
                    return (c, b, a, 1)


def test_prime_field_modulus_is_x():
    assert build_field(13, 1).modulus == (0, 1)
    assert build_field(13).q == 13


def test_cubic_modulus_matches_root_scan():
    assert lex_first_cubic_by_roots(5) == (1, 1, 0, 1)
    assert build_field(5, 3).modulus == (1, 1, 0, 1)
    assert build_field(7, 3).modulus == lex_first_cubic_by_roots(7)


def test_quadratic_modulus_is_first_without_roots():
    for p in (3, 5, 13):
        expected = next((c, b, 1) for b in range(p) for c in range(p)
                        if all((x * x + b * x + c) % p for x in range(p)))
        assert build_field(p, 2).modulus == expected


def test_irreducibility_rejects_products():
    # (x^2 + 2)^2 over F_5 has no roots but is reducible
    assert not is_irreducible((4, 0, 4, 0, 1), 5)
    assert is_irreducible(build_field(5, 4).modulus, 5)


@pytest.mark.parametrize("p, r, exc", [(4, 2, NotPrime), (1, 1, NotPrime), (2, 3, NotPrime),
                                       (3, 40, Overflow)])
def test_build_field_errors(p, r, exc):
    with pytest.raises(exc):
        build_field(p, r)


def test_json_round_trip(F125):
    d = F125.to_dict()
    assert d == {"p": 5, "r": 3, "q": 125, "modulus": [1, 1, 0, 1]}
    assert Field.from_dict(d) == F125


def test_small_examples(F13, F125):
    assert field_arith("mul", F13.elem(5), F13.elem(8)) == F13.elem(1)
    x = F125.elem(68)
    assert field_arith("add", x, field_arith("neg", x)).label == 0
    g = F125.elem(5)  # the class of x
    assert g * F125.elem(1) == g
    assert field_inv(F13.elem(12)).label == 12
    assert field_inv(F13.elem(1)).label == 1
    with pytest.raises(DivisionByZero):
        field_inv(build_field(5).elem(0))
    assert field_pow(F13.elem(3), 6).label == 1
    assert field_pow(F13.elem(2), 6).label == 12
    assert field_pow(F13.elem(0), 0).label == 1
    assert field_pow(F125.elem(17), 0).label == 1


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        field_arith("add", build_field(5).elem(1), build_field(13).elem(1))


def test_labels(F13, F125):
    assert label_of(F13.elem(7)) == 7
    assert elem_of(F125, 0).label == 0 and not elem_of(F125, 0)
    assert label_of(elem_of(F125, 68)) == 68
    assert elem_of(F125, 68).coeffs == (3, 3, 2)
    with pytest.raises(LabelOutOfRange):
        elem_of(F125, 125)
    assert all(F125.from_digits(F125.digits(a)) == a for a in range(125))


def test_quadratic_residues(F13):
    assert is_quadratic_residue(F13.elem(3))
    assert not is_quadratic_residue(F13.elem(2))
    assert not is_quadratic_residue(F13.elem(0))
    assert quadratic_residue_set(build_field(5)) == {1, 4}
    assert quadratic_residue_set(F13) == {1, 3, 4, 9, 10, 12}
    assert len(quadratic_residue_set(build_field(5, 3))) == 62


@pytest.mark.parametrize("p, r", FIELDS)
def test_arithmetic_matches_naive(p, r):
    F = build_field(p, r)
    rng = random.Random(p * 100 + r)
    for _ in range(1000):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        expect = F.from_digits(naive_mul(F.digits(a), F.digits(b), F.modulus, p))
        assert F.mul(a, b) == expect
        assert F.add(a, b) == F.from_digits((x + y) % p for x, y in zip(F.digits(a), F.digits(b)))


@pytest.mark.parametrize("p, r", FIELDS)
def test_field_axioms_and_lagrange(p, r):
    F = build_field(p, r)
    rng = random.Random(7)
    for _ in range(300):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.sub(F.add(a, b), b) == a
        if a:
            assert F.pow(a, F.q - 1) == 1
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p, r", [(5, 1), (13, 1), (5, 2), (5, 3), (3, 4), (13, 2)])
def test_euler_matches_squares(p, r):
    F = build_field(p, r)
    squares = F.qr_labels
    assert len(squares) == F.half
    assert {a for a in range(F.q) if F.is_qr(a)} == squares


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(5, 1), (13, 1), (5, 3), (3, 4), (13, 2)]), st.data())
def test_shifted_power_identity(pr, data):
    F = build_field(*pr)
    y = data.draw(st.integers(0, F.q - 1))
    x = F.mul(y, y)  # a square, or zero
    k = data.draw(st.integers(1, 10))
    assert F.pow(x, F.half + k) == F.pow(x, k)


def test_operators_on_elements(F125):
    a, b = F125.elem(33), F125.elem(101)
    assert (a * b) / b == a
    assert a - a == F125.elem(0)
    assert -a + a == 0
    assert a**3 == a * a * a
    assert 2 * a == a + a
