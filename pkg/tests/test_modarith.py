import pytest

from src.core.errors import CompositeModulusError, ZeroInverseError
from src.core.modarith import (
    FieldElem,
    field_new,
    is_prime,
    legendre,
    legendre_table,
    mobius,
    primes_in,
    primitive_root,
    squarefree_up_to,
)


def test_field_new_accepts_primes():
    F = field_new(7)
    assert F.order == 7
    assert len(F.elements()) == 7


@pytest.mark.parametrize("n", [1, 4, 9, 15, 561])
def test_field_new_rejects_composites(n):
    with pytest.raises(CompositeModulusError):
        field_new(n)


def test_composite_witness_is_a_factor():
    with pytest.raises(CompositeModulusError) as exc:
        field_new(91)
    assert exc.value.details["witness"] == 7


def test_field_arithmetic():
    F = field_new(11)
    a, b = F(7), F(5)
    assert (a + b).value == 1
    assert (a - b).value == 2
    assert (a * b).value == 2
    assert (a / b * b) == a
    assert (a ** 10).value == 1
    assert (-a).value == 4
    assert (3 - a).value == 7


def test_inverse_roundtrip():
    F = field_new(101)
    for v in range(1, 101):
        assert (F(v) * F(v).inverse()).value == 1


def test_zero_has_no_inverse():
    with pytest.raises(ZeroInverseError):
        field_new(13).zero().inverse()


def test_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        FieldElem(1, 5) + FieldElem(1, 7)


def test_direct_construction_is_reduced():
    assert FieldElem(7, 5) == FieldElem(2, 5)
    assert FieldElem(-1, 5).value == 4
    assert legendre(FieldElem(9, 5)) == 1
    with pytest.raises(ValueError):
        FieldElem(1, 0)


def test_legendre_examples():
    F = field_new(7)
    assert [legendre(F(v)) for v in range(7)] == [0, 1, 1, -1, 1, -1, -1]


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_legendre_table_matches_euler(p):
    table = legendre_table(p)
    F = field_new(p)
    assert [int(c) for c in table] == [legendre(F(v)) for v in range(p)]
    assert int(table.sum()) == 0


def test_legendre_table_is_read_only():
    with pytest.raises(ValueError):
        legendre_table(11)[1] = 0


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(1)


def test_squarefree_up_to():
    assert squarefree_up_to(12) == [1, 2, 3, 5, 6, 7, 10, 11]
    assert squarefree_up_to(0) == []


def test_primes_in():
    assert primes_in(5, 30) == [5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_in(10, 3) == []


@pytest.mark.parametrize("p", [5, 7, 11, 13, 101])
def test_primitive_root_generates(p):
    g = primitive_root(p)
    assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


def test_mobius():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
