from fractions import Fraction

import pytest

from cadorder.points import (
    SignEvalError,
    box_eval,
    certificate,
    eliminate_candidates,
    sign_eval,
    stack_roots,
    vanishes_at,
)
from cadorder.polys import VariableOrder, parse_poly
from cadorder.realroots import AlgebraicNumber, isolate

XY = VariableOrder(("x", "y"))
XYZ = VariableOrder(("x", "y", "z"))
X = VariableOrder(("x",))


def P(text, order=XY):
    return parse_poly(text, order)


def sqrt2():
    return isolate(P("x^2 - 2", X))[1]


def test_sign_eval_rational():
    assert sign_eval(P("x^2 + y^2 - 1"), {"x": 0, "y": 0}) == -1
    assert sign_eval(P("x^2 + y^2 - 1"), {"x": 1, "y": 0}) == 0
    assert sign_eval(P("x^2 + y^2 - 1"), {"x": 2, "y": 0}) == 1


def test_sign_eval_single_algebraic():
    r2 = sqrt2()
    assert sign_eval(P("x^2 - 2"), {"x": r2, "y": 0}) == 0
    assert sign_eval(P("x^3 - 2*x"), {"x": r2, "y": 7}) == 0
    assert sign_eval(P("x - 2"), {"x": r2, "y": 0}) == -1


def test_sign_eval_two_algebraic_zero():
    # sqrt(2)*sqrt(3) - sqrt(6) = 0 needs the certificate
    r2 = isolate(P("x^2 - 2", X))[1]
    r3 = isolate(P("x^2 - 3", X))[1]
    order = VariableOrder(("x", "y"))
    # x*y evaluated at (sqrt2, sqrt3) vs rational: x^2*y^2 - 6 = 0
    p = parse_poly("x^2*y^2 - 6", order)
    a = AlgebraicNumber(r2.coeffs, r2.lo, r2.hi)
    b = AlgebraicNumber(r3.coeffs, r3.lo, r3.hi)
    assert sign_eval(p, {"x": a, "y": b}) == 0
    q = parse_poly("x*y - 3", order)
    assert sign_eval(q, {"x": a, "y": b}) == -1
    q2 = parse_poly("x*y - 2", order)
    assert sign_eval(q2, {"x": a, "y": b}) == 1


def test_sign_eval_unbound():
    with pytest.raises(SignEvalError):
        sign_eval(P("x + y"), {"x": 1})


def test_box_eval_contains_value():
    p = P("x^2*y - 3*x + 1")
    lo, hi = box_eval(p, {"x": (Fraction(1), Fraction(2)), "y": (Fraction(-1), Fraction(1))})
    val = p.evaluate({"x": Fraction(3, 2), "y": Fraction(1, 2)})
    assert lo <= val <= hi


def test_vanishes_at():
    r2 = sqrt2()
    # (x^2 - 2) * y vanishes identically in y at x = sqrt2
    p = P("x^2*y - 2*y")
    assert vanishes_at(p, "y", {"x": r2})
    assert not vanishes_at(P("x*y - 1"), "y", {"x": r2})


def test_eliminate_candidates_rational():
    cand = eliminate_candidates(P("x^2 + y^2 - 1"), "y", {"x": Fraction(0)})
    roots = [r for r in isolate(cand)]
    assert len(roots) == 2


def test_stack_roots_rational_sample():
    f1 = P("x^2 + y^2 - 1")
    sections = stack_roots([f1], "y", {"x": Fraction(0)})
    assert len(sections) == 2
    assert sections[0][0].equals_rational(-1)
    assert sections[1][0].equals_rational(1)
    assert sections[0][1] == [f1]


def test_stack_roots_algebraic_sample():
    # over x = the positive root of 2x^2 + x - 2, circle and parabola meet
    f1 = P("x^2 + y^2 - 1")
    f2 = P("2*y^2 - x")
    alpha = isolate(P("2*x^2 + x - 2", X))[1]
    sections = stack_roots([f1, f2], "y", {"x": alpha})
    assert len(sections) == 2
    for gamma, vanishers in sections:
        assert set(vanishers) == {f1, f2}


def test_stack_roots_skips_vanishing():
    p = P("x^2*y - 2*y")
    r2 = sqrt2()
    assert stack_roots([p], "y", {"x": r2}) == []


def test_certificate_roots_contain_value():
    r2 = sqrt2()
    r3 = isolate(P("x^2 - 3", X))[1]
    q = P("x + y")
    c = certificate(q, {"x": r2, "y": r3})
    # sqrt2 + sqrt3 is a root of the certificate
    val = Fraction(31462643, 10000000)  # ~ 3.1462643
    assert len(c) >= 2
    import cadorder.realroots as rr

    assert any(abs(root.as_float() - 3.1462643) < 1e-3 for root in rr.isolate_coeffs(c))
