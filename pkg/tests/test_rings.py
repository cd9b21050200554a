import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octadet.combi import Parity
from octadet.errors import DomainError, RingSpecError
from octadet.rings import (
    Integers,
    IntegersMod,
    Poly,
    nat_scale,
    ring_arith,
    ring_from_spec,
    ring_pow,
    sign_of_parity,
)

SPECS = ["int", "mod:2", "mod:6", "mod:7", "poly:int", "poly:mod:2", "poly:mod:6", "poly:poly:mod:3"]


def elements(ring):
    if isinstance(ring, Integers):
        return st.integers(-(10**30), 10**30)
    if isinstance(ring, IntegersMod):
        return st.integers(0, ring.modulus - 1)
    return st.lists(elements(ring.inner), max_size=4).map(lambda cs: ring.coerce(cs))


@st.composite
def ring_and_elements(draw, count=3):
    ring = ring_from_spec(draw(st.sampled_from(SPECS)))
    return ring, [draw(elements(ring)) for _ in range(count)]


@given(ring_and_elements())
def test_ring_axioms(case):
    R, (a, b, c) = case
    add, mul = R.add, R.mul
    assert add(a, b) == add(b, a)
    assert mul(a, b) == mul(b, a)
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    assert add(a, R.zero) == a
    assert mul(a, R.one) == a
    assert add(a, R.neg(a)) == R.zero
    assert R.sub(a, b) == add(a, R.neg(b))


@settings(max_examples=60)
@given(ring_and_elements(count=1), st.integers(0, 1000))
def test_nat_scale_is_repeated_addition(case, c):
    R, (a,) = case
    naive = R.zero
    for _ in range(c):
        naive = R.add(naive, a)
    assert R.nat_scale(c, a) == naive


@given(st.integers(1, 64), elements(IntegersMod(2)))
def test_boolean_ring_kills_powers_of_two(n, a):
    assert IntegersMod(2).nat_scale(2**n, a) == 0


@given(ring_and_elements(count=1))
def test_normalization_idempotent(case):
    R, (a,) = case
    assert R.coerce(a) == a
    assert R.decode(R.encode(a)) == a
    assert R.decode(json.loads(json.dumps(R.encode(a)))) == a


def test_spec_parsing():
    assert ring_from_spec("int") == Integers()
    assert ring_from_spec("mod:6") == IntegersMod(6)
    assert ring_from_spec("poly:mod:2") == Poly(IntegersMod(2))
    assert ring_from_spec("poly:poly:int") == Poly(Poly(Integers()))
    for spec in SPECS:
        assert str(ring_from_spec(spec)) == spec


@pytest.mark.parametrize(
    "spec, token",
    [("mod:1", "1"), ("mod:x", "x"), ("mod", "mod"), ("float", "float"), ("poly:real", "real"), ("int:int", "int"), ("mod:-3", "-3")],
)
def test_spec_errors_name_token(spec, token):
    with pytest.raises(RingSpecError) as err:
        ring_from_spec(spec)
    assert repr(token) in str(err.value)


def test_modulus_must_be_at_least_two():
    with pytest.raises(DomainError):
        IntegersMod(1)


def test_arith_examples():
    Z6 = IntegersMod(6)
    assert ring_arith("add", Z6(4), Z6(5)) == Z6(3)
    P2 = Poly(IntegersMod(2))
    x1 = P2([1, 1])
    assert ring_arith("mul", x1, x1) == P2([1, 0, 1])
    Z = Integers()
    assert ring_arith("neg", Z(0)) == Z(0)
    with pytest.raises(DomainError):
        ring_arith("add", Z(1), Z6(1))


def test_nat_scale_examples():
    assert nat_scale(3, IntegersMod(5)(2)) == IntegersMod(5)(1)
    for spec in SPECS:
        R = ring_from_spec(spec)
        assert nat_scale(0, R(R.one)).is_zero()
    assert nat_scale(2, IntegersMod(2)(1)).is_zero()
    with pytest.raises(DomainError):
        nat_scale(-1, Integers()(1))


def test_pow_examples():
    Z = Integers()
    assert ring_pow(Z(-1), 4) == Z(1)
    assert ring_pow(IntegersMod(6)(3), 2) == IntegersMod(6)(3)
    for spec in SPECS:
        R = ring_from_spec(spec)
        assert ring_pow(R(R.from_int(5)), 0) == R(R.one)


def test_sign_of_parity():
    Z = Integers()
    assert sign_of_parity(Parity.EVEN, Z) == Z(1)
    assert sign_of_parity("odd", Z) == Z(-1)
    F2 = IntegersMod(2)
    assert sign_of_parity(Parity.ODD, F2) == F2(1) == sign_of_parity(Parity.EVEN, F2)


def test_boolean_detection():
    assert IntegersMod(2).is_boolean
    assert Poly(IntegersMod(2)).is_boolean
    assert not IntegersMod(6).is_boolean
    assert not Integers().is_boolean


def test_poly_payload_is_stripped():
    P = Poly(Integers())
    assert P.coerce([1, 2, 0, 0]) == (1, 2)
    assert P.coerce([0, 0]) == ()
    assert P.add((1, 2), (0, -2)) == (1,)
    assert P.encode(P.zero) == []


def test_big_integers_encode_as_strings():
    Z = Integers()
    big = 3**80
    assert Z.encode(big) == str(big)
    assert Z.decode(str(big)) == big
    assert Z.encode(-(2**60)) == str(-(2**60))
    assert Z.encode(12) == 12


def test_mod_reduces_and_encodes_in_range():
    R = IntegersMod(6)
    assert R.coerce(-1) == 5
    assert R.encode(R.from_int(20)) == 2


def test_element_operators():
    Z6 = IntegersMod(6)
    a = Z6(5)
    assert a + 1 == Z6(0)
    assert 2 * a == Z6(4)
    assert -a == Z6(1)
    assert a**2 == Z6(1)
    with pytest.raises(DomainError):
        _ = a + Integers()(1)
