from pathlib import Path

import pytest

from cadorder.formulation import (
    FormulationError,
    advise,
    constraint_ordering_set,
    enumerate_orderings,
    first_ec_polys,
    heuristic1,
    measure_degsum,
    rank_by_sotd,
    single_ec_first_orderings,
)
from cadorder.polys import Polynomial, parse_poly
from cadorder.problem_io import parse_problem

PROBLEMS = Path(__file__).parent.parent / "problems"


@pytest.fixture(scope="module")
def ex1():
    return parse_problem(PROBLEMS / "example1.json")


@pytest.fixture(scope="module")
def ex1_shifted():
    return parse_problem(PROBLEMS / "example1_shifted.json")


@pytest.fixture(scope="module")
def ellipse():
    return parse_problem(PROBLEMS / "ellipse.json")


def first_ec_names(prob, o):
    return tuple(str(p) for p in first_ec_polys(prob, o))


def test_enumerate_counts(ex1, ellipse):
    assert len(enumerate_orderings(ex1)) == 4
    assert len(enumerate_orderings(ellipse)) == 8
    single = parse_problem(PROBLEMS / "circle.json")
    assert len(enumerate_orderings(single)) == 1


def test_enumeration_is_deterministic(ex1):
    a = enumerate_orderings(ex1)
    b = enumerate_orderings(ex1)
    assert a == b
    assert a[0].formula_perm == (0, 1)


def orderings_with_first_ec(prob, poly_text):
    want = parse_poly(poly_text, prob.order)
    out = []
    for o in enumerate_orderings(prob):
        firsts = first_ec_polys(prob, o)
        if firsts and firsts[0] == want:
            out.append(o)
    return out


def test_constraint_ordering_sets_example1(ex1):
    order = ex1.order
    f1_first = [
        o for o in enumerate_orderings(ex1)
        if first_ec_polys(ex1, o)[0] == parse_poly("x^2 + y^2 - 1", order)
    ]
    assert len(f1_first) == 2
    expected_f1 = {
        parse_poly("-4*x^2 + 4", order),
        parse_poly("-4*x^2 + 40*x - 96", order),
        parse_poly("104*x^2 - 520*x + 672", order),
    }
    for o in f1_first:
        C = constraint_ordering_set(ex1, o)
        assert set(C.polys) == expected_f1
        assert C.sotd() == 8
        assert measure_degsum(C, ex1) == 6

    f2_first = [
        o for o in enumerate_orderings(ex1)
        if first_ec_polys(ex1, o)[0] == parse_poly("2*y^2 - x", order)
    ]
    expected_f2 = {
        parse_poly("8*x", order),
        parse_poly("-4*x^2 + 40*x - 96", order),
        parse_poly("4*x^4 - 76*x^3 + 561*x^2 - 1908*x + 2500", order),
    }
    for o in f2_first:
        C = constraint_ordering_set(ex1, o)
        assert set(C.polys) == expected_f2
        assert C.sotd() == 14
        assert measure_degsum(C, ex1) == 7


def test_ordering_set_formula_perm_invariant(ex1, ellipse):
    for prob in (ex1, ellipse):
        groups = {}
        for o in enumerate_orderings(prob):
            key = tuple(str(p) for p in first_ec_polys(prob, o))
            # group key must ignore clause order to collapse formula perms
            canon = tuple(sorted(key))
            groups.setdefault(canon, set()).add(constraint_ordering_set(prob, o).polys)
        for sets in groups.values():
            assert len(sets) == 1


def test_ordering_set_greatest_variable_free(ex1, ellipse):
    for prob in (ex1, ellipse):
        v = prob.order.greatest
        for o in enumerate_orderings(prob):
            for p in constraint_ordering_set(prob, o).polys:
                assert p.degree_in(v) in (0, float("-inf"))


def test_ellipse_ordering_set_h_first(ellipse):
    h = parse_poly("(x - c)^2 + a^2*y^2 - a^2", ellipse.order)
    h_first = [
        o for o in enumerate_orderings(ellipse)
        if all(p == h for p in first_ec_polys(ellipse, o))
    ]
    assert len(h_first) == 2
    expected = {
        parse_poly("4*a^4 - 4*a^2*c^2 + 8*a^2*c*x - 4*a^2*x^2", ellipse.order),
        Polynomial.zero(ellipse.order),
    }
    for o in h_first:
        C = constraint_ordering_set(ellipse, o)
        assert set(C.polys) == expected
        assert C.sotd() == 16
        assert measure_degsum(C, ellipse) == 2


def test_ellipse_measure_table(ellipse):
    pairs = []
    for o in enumerate_orderings(ellipse):
        C = constraint_ordering_set(ellipse, o)
        pairs.append((C.sotd(), measure_degsum(C, ellipse)))
    assert sorted(set(pairs)) == [(8, 6), (16, 2), (114, 8)]
    assert pairs.count((16, 2)) == 2
    assert pairs.count((114, 8)) == 4
    assert pairs.count((8, 6)) == 2


def test_heuristic1_example1(ex1):
    res = heuristic1(ex1)
    f1 = parse_poly("x^2 + y^2 - 1", ex1.order)
    shortlist_orderings = [r.ordering for r in res.shortlist]
    assert len(shortlist_orderings) == 2
    for o in shortlist_orderings:
        # f1 is the first EC of clause phi1 in every shortlist member
        assert ex1.clauses[0].ecs[o.ec_perms[0][0]].poly == f1
    perms = {o.formula_perm for o in shortlist_orderings}
    assert perms == {(0, 1), (1, 0)}


def test_heuristic1_shifted_still_picks_f1(ex1_shifted):
    res = heuristic1(ex1_shifted)
    f1 = parse_poly("x^2 + y^2 - 1", ex1_shifted.order)
    for r in res.shortlist:
        assert ex1_shifted.clauses[0].ecs[r.ordering.ec_perms[0][0]].poly == f1


def test_heuristic1_ellipse_shortlist_h_first(ellipse):
    res = heuristic1(ellipse)
    h = parse_poly("(x - c)^2 + a^2*y^2 - a^2", ellipse.order)
    assert len(res.shortlist) == 2
    for r in res.shortlist:
        assert all(p == h for p in first_ec_polys(ellipse, r.ordering))
        assert r.degsum == 2
        assert r.sotd == 16


def test_sotd_only_ranking_picks_f_first_on_ellipse(ellipse):
    h = parse_poly("(x - c)^2 + a^2*y^2 - a^2", ellipse.order)
    top = rank_by_sotd(ellipse)[0]
    firsts = first_ec_polys(ellipse, top.ordering)
    assert all(p != h for p in firsts)
    assert top.sotd == 8


def test_heuristic1_scaling_invariance(ex1):
    from cadorder.formulation import Clause, Constraint, Problem

    base = heuristic1(ex1)
    scaled_clauses = []
    for ci, cl in enumerate(ex1.clauses):
        ecs = tuple(
            Constraint(c.poly * 7 if ci == 0 and k == 0 else c.poly, c.relation)
            for k, c in enumerate(cl.ecs)
        )
        scaled_clauses.append(Clause(cl.label, ecs, cl.others))
    scaled = Problem(ex1.order, tuple(scaled_clauses))
    res = heuristic1(scaled)
    assert [r.index for r in res.ranking] == [r.index for r in base.ranking]
    assert [r.index for r in res.shortlist] == [r.index for r in base.shortlist]


def test_no_ec_problem_rejected():
    from cadorder.formulation import Clause, Constraint, Problem
    from cadorder.polys import VariableOrder

    order = VariableOrder(("x", "y"))
    g = Constraint(parse_poly("x + y", order), ">0")
    prob = Problem(order, (Clause("g", (), (g,)),))
    with pytest.raises(FormulationError):
        constraint_ordering_set(prob, enumerate_orderings(prob)[0])
    with pytest.raises(FormulationError):
        heuristic1(prob)


def test_single_ec_first_filter(ex1):
    allowed = single_ec_first_orderings(ex1, enumerate_orderings(ex1))
    # phi2 has a single EC, phi1 has two: phi2 must come first
    assert all(o.formula_perm == (1, 0) for o in allowed)
    assert len(allowed) == 2


def test_advise_defaults_and_pre_rule(ex1):
    rep = advise(ex1)
    assert rep["heuristic"] == "h1"
    assert rep["selected"]
    rep2 = advise(ex1, heuristic="h1", single_ec_first=True)
    orderings = enumerate_orderings(ex1)
    for idx in rep2["selected"]:
        assert orderings[idx].formula_perm == (1, 0)


def test_advise_deterministic(ex1):
    import json

    a = json.dumps(advise(ex1, "h1"), sort_keys=True)
    b = json.dumps(advise(ex1, "h1"), sort_keys=True)
    assert a == b
