"""Finite-field arithmetic: exhaustive axiom checks for every q <= 16."""

import pytest

from badicnets.errors import FieldMismatch, NotPrime, TooLarge
from badicnets.field import FqElem, make_field

SMALL_ORDERS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2),
                (11, 1), (13, 1), (2, 4)]


@pytest.mark.parametrize("p,e", SMALL_ORDERS)
def test_field_axioms_exhaustive(p, e):
    f = make_field(p, e)
    q = f.q
    add, mul = f.add_table, f.mul_table
    for a in range(q):
        assert add[a][0] == a
        assert mul[a][1] == a
        assert mul[a][0] == 0
        assert add[a][f.neg(a)] == 0
        if a:
            assert mul[a][f.inv(a)] == 1
        for b in range(q):
            assert add[a][b] == add[b][a]
            assert mul[a][b] == mul[b][a]
            for c in range(q):
                assert add[add[a][b]][c] == add[a][add[b][c]]
                assert mul[mul[a][b]][c] == mul[a][mul[b][c]]
                assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]


@pytest.mark.parametrize("p,e", SMALL_ORDERS)
def test_frobenius(p, e):
    f = make_field(p, e)
    for a in range(f.q):
        assert f.pow(a, f.q) == a


def test_prime_field_is_mod_arithmetic():
    f = make_field(5)
    assert f.mul(3, 4) == 2
    assert f.inv(2) == 3
    f3 = make_field(3)
    assert f3.add(2, 2) == 1
    f2 = make_field(2)
    assert f2.add(1, 1) == 0


def _poly_mul_mod_oracle(a, b, red, p):
    # independent reduction oracle: schoolbook multiply, then long division
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    deg = len(red) - 1
    while len(prod) > deg:
        lead = prod[-1]
        for i in range(deg + 1):
            prod[len(prod) - 1 - deg + i] = (prod[len(prod) - 1 - deg + i]
                                             - lead * red[i]) % p
        prod.pop()
    return prod + [0] * (deg - len(prod))


def test_gf4_against_polynomial_oracle():
    f = make_field(2, 2)
    assert f.reduction_polynomial == (1, 1, 1)  # x^2 + x + 1
    # index 2 = x; squared must be x + 1 = index 3
    assert f.mul(2, 2) == 3
    red = list(f.reduction_polynomial)
    for a in range(4):
        for b in range(4):
            expected = _poly_mul_mod_oracle(f.to_coeffs(a), f.to_coeffs(b), red, 2)
            assert f.mul(a, b) == f.from_coeffs(expected)


def test_gf8_reduction_polynomial_is_smallest():
    # degree-3 candidates over GF(2) in base-2 value order: x^3, x^3+1,
    # x^3+x all factor; x^3+x+1 is the first irreducible.
    assert make_field(2, 3).reduction_polynomial == (1, 1, 0, 1)


def test_enumeration_convention():
    f = make_field(3, 2)
    # index 5 = 2 + 1*3 -> coefficients (2, 1): constant term first
    assert f.to_coeffs(5) == [2, 1]
    assert f.from_coeffs([2, 1]) == 5


def test_make_field_errors():
    with pytest.raises(NotPrime):
        make_field(4)
    with pytest.raises(NotPrime):
        make_field(1)
    with pytest.raises(TooLarge):
        make_field(2, 17)
    with pytest.raises(ValueError):
        make_field(2, 0)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        make_field(5).inv(0)


def test_fqelem_operators():
    f = make_field(5)
    a, b = f.element(3), f.element(4)
    assert (a * b).index == 2
    assert (a + b).index == 2
    assert (-a).index == 2
    assert (a - b).index == 4
    assert b.inverse().index == 4
    with pytest.raises(FieldMismatch):
        a + make_field(7).element(1)
    with pytest.raises(ValueError):
        f.element(5)


def test_flat_tables_match():
    f = make_field(2, 2)
    flat_add, flat_mul = f.add_table_flat(), f.mul_table_flat()
    for a in range(4):
        for b in range(4):
            assert flat_add[a * 4 + b] == f.add(a, b)
            assert flat_mul[a * 4 + b] == f.mul(a, b)


def test_make_field_caches():
    assert make_field(5) is make_field(5, 1)
