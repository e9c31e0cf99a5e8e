import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainfss.ainf import (AInfinityAlgebra, AInfinityMorphism, StructureError, algebra_from_names,
                         bar_square_check, check_morphism, check_stasheff, flagged_positions, from_dg,
                         map_bidegree, mi_defect, si_defect)
from ainfss.bigraded import BigradedMap, BigradedSpace
from ainfss.corpus import random_unconstrained
from ainfss.linalg import Field

GF101 = Field.prime(101)
GF2 = Field.prime(2)
QQ = Field.rationals()


def assoc_space(F=QQ):
    return BigradedSpace(F, [("x", 1, 0), ("y", 1, 0), ("xy", 2, 0), ("t", 3, 0)])


def test_zero_structure_has_no_defects():
    V = assoc_space()
    A = AInfinityAlgebra(V, 0, {})
    assert all(si_defect(A, n) == {} for n in range(1, 6))
    assert check_stasheff(A, 5).ok and bar_square_check(A, 5).ok


def test_si1_is_square_zero():
    V = BigradedSpace(QQ, [("x", 0, 0), ("y", 0, 1), ("z", 0, 2)])
    A = algebra_from_names(V, 0, {1: {("x",): {"y": 1}, ("y",): {"z": 1}}})
    assert si_defect(A, 1) == {(0,): {2: 1}}


def test_associativity_defect_of_corrupted_product():
    V = assoc_space()
    good = algebra_from_names(V, 0, {2: {("x", "y"): {"xy": 1}}})
    assert check_stasheff(good).ok
    bad = algebra_from_names(V, 0, {2: {("x", "y"): {"xy": 1}, ("xy", "x"): {"t": 1}}})
    i = V.index
    assert si_defect(bad, 3) == {(i["x"], i["y"], i["x"]): {i["t"]: 1}}
    rep = check_stasheff(bad)
    assert [v.line() for v in rep.violations] == ["SI(3) n=3 j=0 (x,y,x): (x,y,x) -> 1*t"]
    assert flagged_positions(rep) == flagged_positions(bar_square_check(bad))


def test_truncated_polynomial_algebra():
    V = BigradedSpace(GF101, [("1", 0, 0), ("x", 0, 1), ("x2", 0, 2)])
    i = V.index
    mu = {(i["1"], a): {a: 1} for a in range(3)}
    mu.update({(a, i["1"]): {a: 1} for a in range(3)})
    mu[(i["x"], i["x"])] = {i["x2"]: 1}
    A = from_dg(BigradedMap.zero(V, V, (0, 1)), mu, unit="1")
    assert A.m(2)[(i["x"], i["x"])] == {i["x2"]: 1}
    assert check_stasheff(A).ok


def test_trivial_product_is_valid():
    V = assoc_space()
    A = from_dg(BigradedMap.zero(V, V, (0, 1)), {})
    assert A.arities() == [] and check_stasheff(A).ok


def test_from_dg_names_the_violated_law():
    V = assoc_space()
    i = V.index
    with pytest.raises(StructureError) as info:
        from_dg(BigradedMap.zero(V, V, (0, 1)),
                {(i["x"], i["y"]): {i["xy"]: 1}, (i["xy"], i["x"]): {i["t"]: 1}})
    assert info.value.report.laws() == {"associativity"}
    assert info.value.report.violations[0].inputs == ("x", "y", "x")

    W = BigradedSpace(QQ, [("x", 0, 0), ("y", 0, 1), ("z", 0, 2)])
    with pytest.raises(StructureError) as info:
        from_dg(BigradedMap.from_sparse(W, W, (0, 1), {0: {1: 1}, 1: {2: 1}}), {})
    assert info.value.report.laws() == {"square-zero"}

    U = BigradedSpace(QQ, [("x", 0, 0), ("y", 0, 1)])
    with pytest.raises(StructureError) as info:
        from_dg(BigradedMap.from_sparse(U, U, (0, 1), {0: {1: 1}}), {(0, 0): {0: 1}})
    assert info.value.report.laws() == {"Leibniz"}


def test_from_dg_unit_law():
    V = BigradedSpace(QQ, [("e", 0, 0), ("a", 1, 0)])
    with pytest.raises(StructureError) as info:
        from_dg(BigradedMap.zero(V, V, (0, 1)), {(0, 0): {0: 1}, (0, 1): {1: 1}}, unit="e")
    assert info.value.report.laws() == {"unit"}


def sign_sensitive(F: Field, coefficient):
    """z·y = p, z·x = q, d(y) = x, d(p) = coefficient·q; Leibniz needs coefficient = −1."""
    V = BigradedSpace(F, [("y", 0, 0), ("x", 0, 1), ("z", 0, 1), ("p", 0, 1), ("q", 0, 2)])
    i = V.index
    d = BigradedMap.from_sparse(V, V, (0, 1), {i["y"]: {i["x"]: 1}, i["p"]: {i["q"]: F(coefficient)}})
    mu = {(i["z"], i["y"]): {i["p"]: 1}, (i["z"], i["x"]): {i["q"]: 1}}
    return d, mu


def test_koszul_sign_is_visible_in_odd_characteristic():
    from_dg(*sign_sensitive(GF101, -1))
    with pytest.raises(StructureError) as info:
        from_dg(*sign_sensitive(GF101, 1))
    assert info.value.report.laws() == {"Leibniz"}
    # characteristic 2 cannot tell the two signs apart
    from_dg(*sign_sensitive(GF2, 1))


def test_unconstrained_structures_agree_with_bar_route():
    rng = random.Random(7)
    invalid = 0
    for k in range(200):
        F = GF101 if k % 2 else QQ
        A = random_unconstrained(rng, F, s=k % 3)
        rep = check_stasheff(A, 4)
        bar = bar_square_check(A, 4)
        assert flagged_positions(rep) == flagged_positions(bar)
        invalid += bool(flagged_positions(rep))
    assert invalid > 20


def test_corpus_algebras_pass_both_routes(corpus):
    for A in corpus.algebras + corpus.unconstrained:
        rep = check_stasheff(A)
        assert flagged_positions(rep) == flagged_positions(bar_square_check(A))
    for A in corpus.algebras:
        assert check_stasheff(A).ok


@settings(max_examples=60)
@given(seed=st.integers(0, 10**6), s=st.integers(0, 2), n=st.integers(1, 4))
def test_defect_is_homogeneous(seed, s, n):
    A = random_unconstrained(random.Random(seed), GF101, s)
    V = A.space
    shift = map_bidegree(s, n, 0, 3)
    for key, vec in si_defect(A, n).items():
        p = sum(V.bideg[k][0] for k in key) + shift[0]
        q = sum(V.bideg[k][1] for k in key) + shift[1]
        assert all(V.bideg[o] == (p, q) for o in vec)


def test_strict_unit_axioms_on_unital_corpus(corpus):
    seen = 0
    for A in corpus.algebras:
        u = A.unit
        if u is None:
            continue
        seen += 1
        for (n, _), m in A.family.items():
            for key, vec in m.items():
                if u in key:
                    assert n == 2
        for a in range(A.space.dim):
            assert A.m(2)[(u, a)] == {a: 1} and A.m(2)[(a, u)] == {a: 1}
    assert seen > 10


def test_unit_violation_is_reported():
    V = BigradedSpace(QQ, [("e", 0, 0), ("a", 1, 0)])
    A = algebra_from_names(V, 0, {2: {("e", "e"): {"e": 1}, ("e", "a"): {"a": 1}}}, unit="e")
    rep = check_stasheff(A)
    assert rep.laws() == {"unit"}
    assert [v.inputs for v in rep.violations] == [("a", "e")]


def test_bidegree_of_declared_maps_is_enforced():
    V = BigradedSpace(QQ, [("x", 0, 0), ("y", 1, 0)])
    with pytest.raises(StructureError):
        algebra_from_names(V, 0, {1: {("x",): {"y": 1}}})
    algebra_from_names(V, 1, {1: {("x",): {"y": 1}}})


def test_identity_morphism_and_mi1():
    V = BigradedSpace(QQ, [("x", 0, 0), ("y", 0, 1)])
    A = algebra_from_names(V, 0, {1: {("x",): {"y": 1}}})
    assert check_morphism(AInfinityMorphism.identity(A)).ok
    B = AInfinityAlgebra(V, 0, {})
    not_chain = AInfinityMorphism(B, A, {1: {(0,): {0: 1}, (1,): {1: 1}}})
    # defect is LHS − RHS = f_1 ∘ m̄_1 − m_1 ∘ f_1, here −m_1 ∘ f_1
    assert mi_defect(not_chain, 1) == {(0,): {1: -1}}
    assert check_morphism(not_chain).laws() == {"MI(1)"}
    with pytest.raises(ValueError):
        AInfinityMorphism(B, AInfinityAlgebra(V, 1, {}), {})


def test_mutated_corpus_algebras_are_caught(corpus):
    caught = 0
    for A in corpus.algebras[:80]:
        m2 = A.m(2)
        keys = [k for k in m2 if A.unit not in k]
        if not keys:
            continue
        key = keys[0]
        fam = dict(A.family)
        fam[(2, 0)] = dict(m2)
        fam[(2, 0)][key] = {o: A.field.norm(2 * c) for o, c in m2[key].items()}
        B = AInfinityAlgebra(A.space, A.s_type, fam, A.unit)
        rep = check_stasheff(B)
        assert flagged_positions(rep) == flagged_positions(bar_square_check(B))
        caught += bool(rep)
    assert caught >= 10
