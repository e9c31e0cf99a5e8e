"""Small worked examples used by the tests, the CLI self-test and the docs."""

from __future__ import annotations

from .ainf import AInfinityAlgebra, from_dg
from .bigraded import BigradedMap, BigradedSpace
from .deformations import FilteredAInfinity, FormalBigradedDeformation
from .linalg import Field

DEFAULT_FIELD = Field(101)


def f1(field: Field = DEFAULT_FIELD) -> FormalBigradedDeformation:
    """x(0,0), y(1,0) with m_1^1(x) = y: killed by the first differential."""
    V = BigradedSpace(field, [("x", 0, 0), ("y", 1, 0)])
    return FormalBigradedDeformation(V, 0, {(1, 1): {(0,): {1: field.one()}}})


def f2(field: Field = DEFAULT_FIELD) -> FormalBigradedDeformation:
    """x(0,0), y(2,-1) with m_1^2(x) = y: killed by the second differential."""
    V = BigradedSpace(field, [("x", 0, 0), ("y", 2, -1)])
    return FormalBigradedDeformation(V, 0, {(1, 2): {(0,): {1: field.one()}}})


def f1_filtered(field: Field = DEFAULT_FIELD) -> FilteredAInfinity:
    V = BigradedSpace(field, [("x", 0, 0), ("y", 1, 0)])
    return FilteredAInfinity(V, {1: {(0,): {1: field.one()}}})


def f3(field: Field = DEFAULT_FIELD, indeterminate: bool = False) -> AInfinityAlgebra:
    """dg algebra with cocycles a, b, c, d(u) = ab, d(v) = bc and a·v = w.

    The triple Massey product <a,b,c> is the class of w.  With
    ``indeterminate`` an extra cocycle z(2,-1) with z·c = w' makes the
    indeterminacy a·H + H·c nonzero.
    """
    basis = [("a", 1, 0), ("b", 1, 0), ("c", 1, 0), ("u", 2, -1), ("v", 2, -1),
             ("ab", 2, 0), ("bc", 2, 0), ("w", 3, -1)]
    if indeterminate:
        basis += [("z", 2, -1), ("w2", 3, -1)]
    V = BigradedSpace(field, basis)
    i = V.index
    one = field.one()
    d = BigradedMap.from_sparse(V, V, (0, 1), {i["u"]: {i["ab"]: one}, i["v"]: {i["bc"]: one}})
    mu = {(i["a"], i["b"]): {i["ab"]: one}, (i["b"], i["c"]): {i["bc"]: one},
          (i["a"], i["v"]): {i["w"]: one}}
    if indeterminate:
        mu[(i["z"], i["c"])] = {i["w2"]: one}
    return from_dg(d, mu)
