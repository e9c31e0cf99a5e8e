import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainfss.ainf import algebra_from_names, check_stasheff
from ainfss.bigraded import BigradedSpace
from ainfss.corpus import random_filtered
from ainfss.couples import derive_couple, exact_couple_from_deformation
from ainfss.deformations import (FilteredAInfinity, FormalBigradedDeformation, check_deformation, rees,
                                 specialize_hbar_one)
from ainfss.fixtures import f1, f2, f3
from ainfss.functors import PreconditionError, functor_D, iterate_D, project_P, translate_T
from ainfss.linalg import Field
from ainfss.pages import (closed_form_pages, compare_closed_form, compare_pages, couple_pages,
                          enhancement_family_report, pages_from_deformation, pages_from_filtration,
                          weak_convergence_check)
from ainfss.transfer import deformation_transfer

GF101 = Field.prime(101)
GF2 = Field.prime(2)
QQ = Field.rationals()

F1_TABLE = [(1, {(0, 0): 1, (1, 0): 1}, {(0, 0): 1}), (2, {}, {})]
F2_TABLE = [(1, {(0, 0): 1, (2, -1): 1}, {}), (2, {(0, 0): 1, (2, -1): 1}, {(0, 0): 1}), (3, {}, {})]


def table(P):
    return [(pg.r, pg.dims, pg.d_ranks) for pg in P.pages]


def all_routes(D):
    return {
        "filtration": pages_from_filtration(specialize_hbar_one(D)),
        "d_iteration": pages_from_deformation(D),
        "enhancement": pages_from_deformation(D, route="enhancement"),
    }


@pytest.mark.parametrize("F", [GF101, QQ, GF2], ids=["GF101", "Q", "GF2"])
@pytest.mark.parametrize("fixture,expected", [(f1, F1_TABLE), (f2, F2_TABLE)], ids=["F1", "F2"])
def test_worked_page_tables(fixture, expected, F):
    D = fixture(F)
    for route, P in all_routes(D).items():
        assert table(P) == expected, route
        assert P.e_inf == {} and P.checks.ok
    assert [t for t in couple_pages(D, len(expected))] == expected
    assert {r: v for r, v in closed_form_pages(D).items()} == {r: (d, k) for r, d, k in expected[:2]}
    assert not weak_convergence_check(D)


def test_compare_pages_reports_mismatch():
    P = pages_from_deformation(f1())
    assert not compare_pages(P, P)
    rep = compare_pages(P, pages_from_deformation(f2()))
    assert "dims" in rep.laws() and "d-rank" in rep.laws()
    assert compare_pages(P, pages_from_deformation(functor_D(f1()))).laws() == {"start"}


def test_zero_differential_pages_are_constant():
    A = f3()
    V = A.space
    F = FilteredAInfinity(V, {2: A.m(2)})
    P = pages_from_filtration(F, r_max=4)
    for pg in P.pages:
        assert pg.dims == V.dims() and pg.d_ranks == {}
    assert P.e_inf == V.dims()
    assert not weak_convergence_check(F)


def truncated_polynomial(F=GF101):
    V = BigradedSpace(F, [("1", 0, 0), ("x", 1, 0), ("x2", 2, 0)])
    mu = {("1", a): {a: 1} for a in ("1", "x", "x2")}
    mu.update({(a, "1"): {a: 1} for a in ("x", "x2")})
    mu[("x", "x")] = {"x2": 1}
    return algebra_from_names(V, 0, {2: mu}, unit="1")


def test_pages_carry_products():
    D = FormalBigradedDeformation.constant(truncated_polynomial())
    P = pages_from_deformation(D, route="enhancement")
    assert P.page(1).mu_ranks
    assert not compare_pages(P, pages_from_deformation(D))
    assert not compare_pages(P, pages_from_filtration(specialize_hbar_one(D)))


# --- functors P, T, D ----------------------------------------------------------------------


def test_project_P_examples():
    H = deformation_transfer(FormalBigradedDeformation.constant(f3())).model
    dg = project_P(H)
    assert dg.s_type == 1 and dg.m(1) == {} and check_stasheff(dg).ok
    T1 = deformation_transfer(f1()).model
    assert project_P(T1).m(1) == {(0,): {1: 1}}
    assert project_P(deformation_transfer(f2()).model).m(1) == {}
    with pytest.raises(PreconditionError):
        project_P(FormalBigradedDeformation.constant(f3()))


def test_translate_T_examples():
    A = f3()
    H = deformation_transfer(FormalBigradedDeformation.constant(A)).model
    only_products = FormalBigradedDeformation(H.space, 0, {k: v for k, v in H.family.items() if k[0] == 2})
    T = translate_T(only_products)
    assert T.s_type == 1 and T.family == only_products.family
    T1 = translate_T(deformation_transfer(f1()).model)
    assert T1.family == {(1, 0): {(0,): {1: 1}}}
    assert check_deformation(T1).ok
    assert translate_T(H).family[(3, 1)] == H.family[(3, 0)]


def test_functor_D_examples():
    E = functor_D(f1())
    assert E.s_type == 1 and E.space.dim == 2
    assert E.family == {(1, 0): {(0,): {1: 1}}}
    assert pages_from_deformation(E).page(2).dims == {}
    # m̃_1 = 0: the whole space qualifies and D agrees with T
    H = deformation_transfer(FormalBigradedDeformation.constant(f3())).model
    assert functor_D(H).same_structure(translate_T(H))
    for D in (f2(), deformation_transfer(f1()).model):
        assert functor_D(D).same_structure(translate_T(D))


def test_functor_D_on_nonminimal_base():
    V = BigradedSpace(GF101, [("x", 0, 0), ("y", 0, 1), ("z", 1, 0), ("t", 1, 1)])
    D = FormalBigradedDeformation(V, 0, {(1, 0): {(0,): {1: 1}, (2,): {3: 1}}, (1, 1): {(0,): {2: 1}, (1,): {3: -1}}})
    assert check_deformation(D).ok
    E = functor_D(D)
    assert check_deformation(E).ok and E.s_type == 1
    assert not compare_pages(pages_from_deformation(E), pages_from_deformation(E, route="enhancement"))
    assert iterate_D(D, 2).s_type == 2


# --- exact couples -------------------------------------------------------------------------


def test_couple_examples():
    D = FormalBigradedDeformation.constant(f3())
    C = exact_couple_from_deformation(D)
    assert not C.exactness_report()
    assert C.differential().is_zero()
    assert C.e_dims() == {(1, 0): 3, (3, -1): 1}
    C2 = derive_couple(C)
    assert C2.e_dims() == C.e_dims() and C2.page_index == 2

    C = exact_couple_from_deformation(f1())
    assert C.d_ranks() == {(0, 0): 1}
    assert derive_couple(C).e_dims() == {}

    C = exact_couple_from_deformation(f2())
    assert C.differential().is_zero()
    C2 = derive_couple(C)
    assert C2.d_ranks() == {(0, 0): 1} and not C2.exactness_report()


# --- corpus-wide route agreement -----------------------------------------------------------


def test_routes_agree_on_corpus(corpus):
    for D in corpus.deformations[:40]:
        P = pages_from_deformation(D)
        assert P.checks.ok
        assert not compare_pages(pages_from_filtration(specialize_hbar_one(D)), P)
        assert not compare_pages(P, pages_from_deformation(D, route="enhancement"))
        assert not compare_closed_form(D, P)
        expected = table(P)[:3]
        assert couple_pages(D, len(expected)) == expected


def test_type_one_deformations_agree(corpus):
    for D in corpus.deformations[:25]:
        E = functor_D(D)
        assert check_deformation(E).ok
        P = pages_from_deformation(E)
        Q = pages_from_deformation(E, route="enhancement")
        assert P.start == 2
        assert not compare_pages(P, Q)
        assert not compare_closed_form(E, P)
        assert not enhancement_family_report(Q)
        later = table(pages_from_deformation(D, r_max=P.r_last))[1:]
        assert table(P)[: len(later)] == later


def test_weak_convergence_needs_type_zero():
    with pytest.raises(PreconditionError):
        weak_convergence_check(functor_D(f1()))


def test_unit_class_on_pages(corpus):
    unital = [F for F in corpus.filtered if F.unit is not None]
    assert len(unital) >= 10
    for F in unital[:10]:
        P = pages_from_filtration(F)
        assert P.checks.ok
        for pg in P.pages:
            if pg.dims.get((0, 0)):
                assert pg.algebra.unit is not None


@settings(max_examples=25)
@given(seed=st.integers(0, 10**9), rational=st.booleans())
def test_filtration_matches_enhancement(seed, rational):
    F = random_filtered(random.Random(seed), QQ if rational else GF101)
    P = pages_from_filtration(F)
    Q = pages_from_deformation(rees(F), route="enhancement")
    assert not compare_pages(P, Q)
    assert not enhancement_family_report(Q)
    assert not weak_convergence_check(F)
    width = F.space.p_width()
    assert P.e_inf == P.page(max(1, width + 1)).dims


def test_characteristic_two_pages():
    rng = random.Random(5)
    for _ in range(10):
        F = random_filtered(rng, GF2)
        D = rees(F)
        assert check_deformation(D).ok
        assert not compare_pages(pages_from_filtration(F), pages_from_deformation(D))
