from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import direct_valuation
from padslopes.errors import CertificationError, PreconditionError
from padslopes.exactnum import PiScalar
from padslopes.laurent import (
    AffinePiece,
    LaurentElement,
    PiecewiseAffine,
    Tail,
    derive,
    dominance_threshold,
    gauss_envelope,
    lmul,
    ord_x,
    valuation_at,
)


def lau(p, terms, tail=None):
    return LaurentElement(p, terms, tail)


def laurents(p, max_terms=4):
    coeff = st.builds(Fraction, st.integers(-300, 300), st.integers(1, 9))
    pis = st.lists(coeff, min_size=p - 1, max_size=p - 1).map(lambda cs: PiScalar(p, cs))
    return st.dictionaries(st.integers(-5, 5), pis, min_size=1, max_size=max_terms).map(
        lambda d: LaurentElement(p, d)
    ).filter(lambda f: not f.is_zero())


samples = st.fractions(min_value=Fraction(1, 100), max_value=20, max_denominator=100)


def test_ord_x():
    assert ord_x(lau(2, {1: 1})) == 1
    assert ord_x(lau(2, {-3: -16, -2: 1})) == -3
    assert ord_x(lau(2, {-3: -4})) == -3
    with pytest.raises(PreconditionError, match="ord of zero"):
        ord_x(LaurentElement.zero(2))


def test_derive():
    assert derive(lau(3, {2: 1})) == lau(3, {1: 2})
    pi = PiScalar.pi(2)
    assert derive(lau(2, {-2: pi})) == lau(2, {-3: 4})
    assert derive(lau(5, {0: 5})).is_zero()


def test_derive_tail():
    f = lau(2, {0: 1, 1: 3}, Tail(4, 2))
    assert derive(f).tail == Tail(3, 2)


def test_envelope_examples():
    env = gauss_envelope(lau(2, {1: 1}))
    assert env.pieces == (AffinePiece(0, 1),) and env.breaks == ()
    env = gauss_envelope(lau(2, {0: 2, 1: 1}))
    assert env.breaks == (1,)
    assert env.pieces == (AffinePiece(0, 1), AffinePiece(1, 0))
    env = gauss_envelope(lau(2, {-3: -4}))
    assert env.pieces == (AffinePiece(2, -3),)


def test_dominance_threshold_examples():
    assert dominance_threshold(lau(2, {-3: -4})) == 0
    assert dominance_threshold(lau(2, {0: 2, 1: 1})) == 1
    assert dominance_threshold(lau(3, {-1: 1, -2: 3})) == 1


def test_lmul_examples():
    x = lau(2, {1: 1})
    assert lmul(x, lau(2, {-1: 1})) == LaurentElement.constant(2, 1)
    assert lmul(lau(2, {0: 2, 1: 1}), lau(2, {0: 2, 1: -1})) == lau(2, {0: 4, 2: -1})
    f, g = lau(2, {0: 2, 1: 1}), lau(2, {-1: 1})
    assert gauss_envelope(lmul(f, g)) == gauss_envelope(f) + gauss_envelope(g)


def test_tail_absorbs_high_terms():
    f = lau(3, {0: 1, 5: 9}, Tail(3, 1))
    assert f.exponents() == [0]
    assert f.tail == Tail(3, 1)
    g = lau(3, {0: 1, 5: Fraction(1, 3)}, Tail(3, 1))
    assert g.tail == Tail(3, -1)


def test_tail_certification():
    # 1 + x with tail from x^3 of valuation >= -1: -1 + 3s >= min(0, s) from s = 1/3
    f = lau(2, {0: 1, 1: 1}, Tail(3, -1))
    env = gauss_envelope(f)
    assert env.start == Fraction(1, 3)
    assert valuation_at(f, 1) == 0
    with pytest.raises(CertificationError):
        valuation_at(f, Fraction(1, 10))
    # a tail that never undercuts: certified everywhere
    h = lau(2, {0: 1}, Tail(2, 0))
    assert gauss_envelope(h).start == 0
    assert dominance_threshold(h) == 0


def test_dominance_needs_certified_tail():
    f = lau(2, {-1: 2, 0: 1}, Tail(1, -5))
    # stored envelope breaks at 1, but the tail is only certified from s = 5
    with pytest.raises(CertificationError):
        dominance_threshold(f)


def test_tail_product_is_conservative():
    f = lau(2, {0: 1}, Tail(2, 1))
    g = lau(2, {-1: 2})
    prod = lmul(f, g)
    assert prod.tail == Tail(1, 2)
    assert prod.exponents() == [-1]


def test_piecewise_continuity_enforced():
    with pytest.raises(ValueError):
        PiecewiseAffine(Fraction(0), (Fraction(1),), (AffinePiece(0, 1), AffinePiece(2, 0)))


def test_json_round_trip():
    f = lau(3, {-2: PiScalar(3, [1, Fraction(2, 3)]), 4: 5}, Tail(7, Fraction(1, 2)))
    assert LaurentElement.from_json(3, f.to_json(), f.tail_json()) == f


@settings(max_examples=80, deadline=None)
@given(f=laurents(2), s=samples)
def test_envelope_matches_direct_minimum(f, s):
    assert gauss_envelope(f)(s) == direct_valuation(f, s)


@settings(max_examples=60, deadline=None)
@given(f=laurents(3), g=laurents(3), s=samples)
def test_envelope_additive_and_ultrametric(f, g, s):
    assert gauss_envelope(lmul(f, g))(s) == gauss_envelope(f)(s) + gauss_envelope(g)(s)
    total = f + g
    if not total.is_zero():
        assert gauss_envelope(total)(s) >= min(gauss_envelope(f)(s), gauss_envelope(g)(s))


@settings(max_examples=60, deadline=None)
@given(f=laurents(5))
def test_envelope_concave_and_threshold_is_last_break(f):
    env = gauss_envelope(f)
    assert env.is_concave()
    assert dominance_threshold(f) == (env.breaks[-1] if env.breaks else 0)
    lead = f.leading_coefficient().vp()
    s = dominance_threshold(f) + 1
    assert env(s) == lead + ord_x(f) * s
