from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bsdtwist.curve import (
    IsogenyMismatchError,
    PreconditionError,
    SingularCurveError,
    change_coordinates,
    division_polynomial,
    has_rational_p_isogeny,
    is_squarefree,
    make_curve,
    minimal_model,
    point_add,
    point_mul,
    point_neg,
    quadratic_twist,
    short_model,
    torsion_subgroup,
    two_isogenous_curve,
    two_torsion_rank,
)
from bsdtwist.localdata import conductor

coef = st.integers(-30, 30)


@st.composite
def curves(draw):
    a = [draw(st.integers(0, 1)), draw(st.integers(-1, 1)), draw(st.integers(0, 1)), draw(coef), draw(coef)]
    try:
        return make_curve(*a)
    except SingularCurveError:
        assume(False)


def test_singular_rejected():
    with pytest.raises(SingularCurveError):
        make_curve(0, 0, 0, 0, 0)
    with pytest.raises(SingularCurveError):
        make_curve(0, 0, 0, -3, 2)


def test_46a1_short_form(e46):
    S = short_model(e46)
    assert S.j == e46.j
    # scaled by 6^2, 6^3 away from y^2 = x^3 - 163x - 930 up to the u^4, u^6 factor
    assert (S.a4, S.a6) == (-27 * e46.c4, -54 * e46.c6)
    short = make_curve(0, 0, 0, -163, -930)
    Emin, _ = minimal_model(short)
    assert Emin.ainvs == e46.ainvs
    assert {p for p in (2, 3, 5, 7, 11, 13, 17, 19, 23) if Emin.discriminant % p == 0} == {2, 23}


def test_minimal_models_match_oracle(oracles):
    for label, c in oracles["curves"].items():
        E = make_curve(*c["ainvs"])
        assert minimal_model(E)[0].ainvs == tuple(c["minimal"]), label
    for t in oracles["twists"]:
        assert minimal_model(make_curve(*t["ainvs"]))[0].ainvs == tuple(t["minimal"])


def test_twists_match_oracle(oracles, records_by_label):
    for t in oracles["twists"]:
        if t["base"] not in records_by_label:
            continue
        E = records_by_label[t["base"]].curve()
        Ed = quadratic_twist(E, t["d"])
        assert Ed.ainvs == tuple(t["minimal"]), (t["base"], t["d"])


@given(curves(), st.integers(1, 6), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=80, deadline=None)
def test_minimal_model_invariant_under_scaling(E, u, r, s, t):
    # scale up by u: the inverse change of coordinates is integral
    big = change_coordinates(E, Fraction(1, u), r, s, t)
    assert big.j == E.j
    assert minimal_model(big)[0].ainvs == minimal_model(E)[0].ainvs


@given(curves(), st.integers(-40, 40).filter(lambda d: d not in (0, 1) and is_squarefree(d)))
@settings(max_examples=60, deadline=None)
def test_twist_properties(E, d):
    Ed = quadratic_twist(E, d)
    assert Ed.j == E.j
    # twisting twice by d returns to E over Q
    assert minimal_model(quadratic_twist(Ed, d))[0].ainvs == minimal_model(E)[0].ainvs
    with pytest.raises(ValueError):
        quadratic_twist(E, d * 4)


def test_twist_trivial_and_formula(e46):
    assert quadratic_twist(e46, 1).j == e46.j
    short = make_curve(0, 0, 0, -163, -930)
    assert quadratic_twist(short, 5, minimal=False).ainvs == (0, 0, 0, -163 * 25, -930 * 125)


def test_torsion_matches_oracle(oracles):
    for label, c in oracles["curves"].items():
        T = torsion_subgroup(make_curve(*c["minimal"]))
        assert sorted(n for n in T.invariants if n > 1) == sorted(c["torsion"]), label
    for t in oracles["twists"][:40]:
        T = torsion_subgroup(make_curve(*t["minimal"]))
        assert sorted(n for n in T.invariants if n > 1) == sorted(t["torsion"])


def test_torsion_generators_have_the_right_orders():
    E = make_curve(1, 0, 1, -19, 26)  # 14a2-like, Z/6
    T = torsion_subgroup(E)
    for P in T.generators:
        assert E.contains(P)
    n = T.order
    for P in T.generators:
        assert point_mul(E, P, n) is None


@given(curves())
@settings(max_examples=40, deadline=None)
def test_group_law_on_torsion(E):
    T = torsion_subgroup(E)
    assert T.order in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16)
    for P in T.generators:
        assert E.contains(P)
        assert point_add(E, P, point_neg(E, P)) is None


def test_group_law_associative_on_rank_one_curve():
    E = make_curve(0, 0, 1, -1, 0)  # 37a1, generator (0, 0)
    P = (Fraction(0), Fraction(0))
    pts = [point_mul(E, P, k) for k in range(1, 6)]
    for A in pts:
        assert E.contains(A)
        for B in pts[:3]:
            for C in pts[:2]:
                assert point_add(E, point_add(E, A, B), C) == point_add(E, A, point_add(E, B, C))
    assert point_mul(E, P, 5) == point_add(E, point_mul(E, P, 2), point_mul(E, P, 3))


def test_division_polynomial_degrees(e46):
    degs = [division_polynomial(e46, m).degree for m in range(2, 13)]
    assert degs == [3, 4, 6, 12, 16, 24, 30, 40, 48, 60, 70]


def test_division_polynomial_vanishes_on_torsion():
    E = make_curve(0, -1, 1, -10, -20)  # 11a1, torsion Z/5
    T = torsion_subgroup(E)
    psi5 = division_polynomial(E, 5)
    for P in T.generators:
        assert psi5(P[0]) == 0


def test_isogenies_match_database(fixture_records):
    for rec in fixture_records:
        E = rec.curve()
        for p in (3, 5, 7):
            assert has_rational_p_isogeny(E, p) == (p in rec.isogeny_degrees), (rec.label, p)


def test_isogeny_mismatch_is_an_error(e46):
    with pytest.raises(IsogenyMismatchError):
        has_rational_p_isogeny(e46, 5, db_degrees=[2, 5])
    assert not has_rational_p_isogeny(e46, 5, db_degrees=[2])


def test_two_isogenous_curve(e46):
    Ep = two_isogenous_curve(e46)
    assert Ep.ainvs == (1, -1, 0, -170, -812)
    assert two_torsion_rank(Ep) == 1
    assert conductor(Ep) == 46
    # the dual isogeny returns to E
    assert two_isogenous_curve(Ep).j == e46.j
    with pytest.raises(PreconditionError):
        two_isogenous_curve(make_curve(0, -1, 1, -10, -20))


def test_two_torsion_rank_examples():
    assert two_torsion_rank(make_curve(1, 1, 1, -10, -10)) == 2  # 15a1
    assert two_torsion_rank(make_curve(0, -1, 1, -10, -20)) == 0
