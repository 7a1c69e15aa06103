from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import norm_vp
from padslopes.exactnum import (
    Cyclotomic,
    FiniteField,
    PiScalar,
    least_irreducible,
    psi_value,
    solve_linear,
    vp,
    vp_rational,
)

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10 ** 4)


def scalars(p):
    return st.lists(rationals, min_size=p - 1, max_size=p - 1).map(lambda cs: PiScalar(p, cs))


def test_vp_examples():
    assert vp(PiScalar.pi(3)) == Fraction(1, 2)
    assert vp(PiScalar.rational(2, 8)) == 3
    assert vp(PiScalar(3, [1, 1])) == 0
    assert vp(PiScalar.rational(5, 0)) == float("inf")


def test_pi_relation():
    for p in (2, 3, 5, 7):
        pi = PiScalar.pi(p)
        assert pi ** (p - 1) == PiScalar.rational(p, -p)
        assert vp(pi ** (p - 1)) == 1


def test_p2_is_rational_with_pi_minus_two():
    assert PiScalar.pi(2) == PiScalar.rational(2, -2)
    assert str(PiScalar.pi(2) ** 2) == "4"


@pytest.mark.parametrize("p", [3, 5, 7])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_vp_matches_norm_oracle(p, data):
    a = data.draw(scalars(p))
    if a.is_zero():
        return
    assert vp(a) == norm_vp(a)


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_vp_is_a_valuation(p, data):
    a, b = data.draw(scalars(p)), data.draw(scalars(p))
    assert vp(a * b) == vp(a) + vp(b)
    assert vp(a + b) >= min(vp(a), vp(b))


@pytest.mark.parametrize("p", [3, 5])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_inverse(p, data):
    a = data.draw(scalars(p))
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == PiScalar.rational(p, 1)


def test_json_round_trip():
    a = PiScalar(5, [Fraction(1, 3), 0, -2, 7])
    assert PiScalar.from_json(5, a.to_json()) == a
    assert a.to_json() == ["1/3", "0", "-2", "7"]


def test_solve_linear():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert solve_linear(m, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]


def test_vp_rational():
    assert vp_rational(Fraction(3, 4), 2) == -2
    assert vp_rational(0, 3) == float("inf")


def test_least_irreducible():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 4) == (1, 1, 0, 0, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_finite_field_arithmetic():
    field = FiniteField.of_order(16)
    elems = field.elements()
    assert len(elems) == 16
    g = field.generator()
    assert g.multiplicative_order() == 15
    for x in elems[1:]:
        assert x * x.inverse() == field.one()
    assert sum((x for x in elems), field.zero()) == field.zero()


def test_trace_is_additive_and_onto():
    field = FiniteField.of_order(9)
    traces = {x.trace() for x in field.elements()}
    assert traces == {0, 1, 2}
    for x in field.elements():
        for y in field.elements():
            assert (x + y).trace() == (x.trace() + y.trace()) % 3


def test_psi_values():
    field = FiniteField.of_order(4)
    assert psi_value(field.zero()) == 1
    assert sum((psi_value(a) for a in field.elements()), Cyclotomic.rational(0)) == 0
    for c in field.elements()[1:]:
        assert sum((psi_value(c * a) for a in field.elements()), Cyclotomic.rational(0)) == 0


def test_psi_is_a_character():
    field = FiniteField.of_order(9)
    for a in field.elements():
        for b in field.elements():
            assert psi_value(a + b) == psi_value(a) * psi_value(b)


def test_cyclotomic_basics():
    for n in (1, 3, 4, 6, 12):
        z = Cyclotomic.root(n)
        assert z ** n == 1
        w = Cyclotomic(n, [Fraction(1, 2), 3, -1])
        assert w.conjugate().conjugate() == w
        assert abs(complex(w * w.conjugate()) - abs(complex(w)) ** 2) < 1e-9


def test_cyclotomic_mixed_conductors():
    assert Cyclotomic.root(3) * Cyclotomic.root(2) == Cyclotomic.root(6, 5)
    assert Cyclotomic.root(3) + Cyclotomic.root(3, 2) == -1
    assert Cyclotomic.root(4) ** 2 == -1
