from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cadorder.polys import (
    NEG_INF,
    ContextError,
    ParseError,
    Polynomial,
    VariableOrder,
    degree_in,
    parse_poly,
    sotd,
)

XY = VariableOrder(("x", "y"))


def P(text, order=XY):
    return parse_poly(text, order)


def test_add_cancellation():
    assert P("x^2 + y^2 - 1") + P("1 - y^2") == P("x^2")
    assert P("2*y^2 - x") + P("x") == P("2*y^2")


def test_add_identity():
    p = P("x^2 + 3*x*y - 7")
    assert p + Polynomial.zero(XY) == p


def test_multiply_samples():
    assert P("x - 1") * P("x + 1") == P("x^2 - 1")
    sq = P("2*x^2 + x - 2")
    assert sq * sq == P("4*x^4 + 4*x^3 - 7*x^2 - 4*x + 4")
    one = Polynomial.const(XY, 1)
    assert one * P("x*y - 3") == P("x*y - 3")


def test_multiply_by_zero():
    assert (P("x + y") * Polynomial.zero(XY)).is_zero()


def test_degree_in():
    order = VariableOrder(("c", "a", "x", "y"))
    h_disc = parse_poly("4*a^4 - 4*a^2*c^2 + 8*a^2*c*x - 4*a^2*x^2", order)
    assert h_disc.degree_in("x") == 2
    assert Polynomial.zero(order).degree_in("x") is NEG_INF
    assert P("8*x").degree_in("x") == 1
    with pytest.raises(ContextError):
        P("x").degree_in("zz")


def test_sotd_paper_sets():
    s1 = [P("-4*x^2 + 4"), P("-4*x^2 + 40*x - 96"), P("104*x^2 - 520*x + 672")]
    assert sotd(s1) == 8
    s2 = [P("8*x"), P("-4*x^2 + 40*x - 96"), P("4*x^4 - 76*x^3 + 561*x^2 - 1908*x + 2500")]
    assert sotd(s2) == 14
    order = VariableOrder(("c", "a", "x", "y"))
    disc_h = parse_poly("4*a^4 - 4*a^2*c^2 + 8*a^2*c*x - 4*a^2*x^2", order)
    assert sotd([disc_h]) == 16
    assert sotd([]) == 0
    assert sotd([Polynomial.zero(XY)]) == 0


def test_evaluate():
    circle = P("x^2 + y^2 - 1")
    assert circle.evaluate({"x": 0, "y": 0}) == -1
    assert circle.evaluate({"x": 1, "y": 0}) == 0
    assert P("2*y^2 - x").evaluate({"x": 2, "y": 1}) == 0
    assert P("x").evaluate({"x": Fraction(1, 3)}) == Fraction(1, 3)
    with pytest.raises(ContextError):
        P("x + y").evaluate({"x": 1})


def test_parse_rational_clears_positively():
    # x/4 - y - 1/2 scales to x - 4*y - 2
    assert P("x/4 - y - 1/2") == P("x - 4*y - 2")


def test_parse_rejects_implicit_multiplication():
    with pytest.raises(ParseError):
        P("2x")
    with pytest.raises(ParseError):
        P("x y")


def test_parse_errors():
    with pytest.raises(ParseError):
        P("x +")
    with pytest.raises(ParseError):
        P("(x + 1")
    with pytest.raises(ParseError):
        P("x ^ y")
    with pytest.raises(ParseError):
        P("x / y")
    with pytest.raises(ContextError):
        P("z + 1")


def test_substitute_keeps_sign():
    p = P("x^2 + y^2 - 1")
    q = p.substitute("x", Fraction(1, 2))
    # 4*y^2 - 3 after clearing by 4
    assert q == P("4*y^2 - 3")


coeffs = st.integers(min_value=-6, max_value=6)


def rand_poly(draw, order):
    n = len(order.names)
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, 2) for _ in range(n)]),
            coeffs,
            max_size=5,
        )
    )
    return Polynomial(order, terms)


@st.composite
def polys2(draw):
    return rand_poly(draw, XY)


@settings(max_examples=60, deadline=None)
@given(polys2(), polys2(), polys2())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert (p + q) + r == p + (q + r)
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@settings(max_examples=60, deadline=None)
@given(polys2(), polys2())
def test_degree_multiplicative(p, q):
    if p.is_zero() or q.is_zero():
        return
    for v in ("x", "y"):
        assert (p * q).degree_in(v) == degree_in(p, v) + degree_in(q, v)


@settings(max_examples=80, deadline=None)
@given(polys2())
def test_parse_print_roundtrip(p):
    assert parse_poly(str(p), XY) == p
