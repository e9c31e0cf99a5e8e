"""Formal bigraded deformations over k[ħ], filtered A∞-algebras and the Rees dictionary.

A deformation stores components m_n^j (the coefficient of ħ^j in m̃_n) in the
same ``(arity, order)`` family layout as plain algebras.  A filtered algebra
is stored split: each basis element of bidegree (p, q) spans a piece of
filtration p and total degree p+q, and the structure maps are total maps.
"""

from __future__ import annotations

from typing import Mapping

from .ainf import (AInfinityAlgebra, StructureError, _Structured, _unit_report, base_bidegree,
                   bidegree_report, check_stasheff)
from .bigraded import BigradedSpace
from .multilinear import SparseMap, add_into, clean_map, degree_bound
from .report import Report


class FormalBigradedDeformation(_Structured):
    kind_label = "deformation"

    @property
    def base(self) -> AInfinityAlgebra:
        maps = {n: m for (n, j), m in self.family.items() if j == 0}
        return AInfinityAlgebra(self.space, self.s_type, maps, self.unit, validate=False)

    @property
    def components(self) -> dict:
        return self.family

    def is_minimal(self) -> bool:
        return (1, 0) not in self.family

    def __repr__(self):
        return (f"FormalBigradedDeformation(dim={self.space.dim}, s={self.s_type}, "
                f"components={sorted(self.family)})")

    @classmethod
    def constant(cls, A: AInfinityAlgebra) -> "FormalBigradedDeformation":
        return cls(A.space, A.s_type, A.family, A.unit)


def check_deformation(D: _Structured, n_max: int | None = None) -> Report:
    """Bidegrees, strict unit and SI(n) of the k[ħ]-structure at every order."""
    rep = bidegree_report(D.space, D.space, D.family, D.s_type, 2, "deformation")
    rep.subject = "deformation"
    if rep.violations:
        return rep
    rep.extend(check_stasheff(D, n_max))
    return rep


def max_admissible_order(space: BigradedSpace, s_type: int) -> int:
    """Largest ħ-order any homogeneous structure component can have on this support."""
    sup = space.bidegrees()
    b, orders = degree_bound(sup, sup, s_type, 2)
    return max((max(js) for js in orders.values()), default=0) if b is not None else -1


def reduce_mod(D: FormalBigradedDeformation, N: int) -> FormalBigradedDeformation:
    if N < 0:
        raise ValueError("order must be nonnegative")
    fam = {nj: m for nj, m in D.family.items() if nj[1] <= N}
    return FormalBigradedDeformation(D.space, D.s_type, fam, D.unit)


class FilteredAInfinity:
    """Split filtered A∞-algebra: total maps on the total-graded space."""

    def __init__(self, space: BigradedSpace, total_maps: Mapping[int, Mapping], unit=None, validate: bool = True):
        F = space.field
        self.space = space
        self.total: dict[int, SparseMap] = {}
        for n, m in sorted(total_maps.items()):
            m = clean_map(F, m)
            if m:
                self.total[int(n)] = m
        self.unit = space.index[unit] if isinstance(unit, str) else unit
        if validate:
            rep = self.structure_report()
            if rep.violations:
                raise StructureError(rep)

    s_type = 0

    @property
    def field(self):
        return self.space.field

    @property
    def unit_name(self):
        return None if self.unit is None else self.space.name(self.unit)

    def filtration(self, i: int) -> int:
        return self.space.bideg[i][0]

    def structure_report(self) -> Report:
        """Degree of m_n is 2−n and no entry lowers total filtration."""
        sp = self.space
        rep = Report("filtered")
        for n, m in self.total.items():
            for key, vec in m.items():
                names = tuple(sp.name(k) for k in key)
                if len(key) != n:
                    rep.add("bidegree", "input tuple of wrong length", arity=n, inputs=names)
                    continue
                deg = sum(sp.degree[k] for k in key) + 2 - n
                fil = sum(self.filtration(k) for k in key)
                for o in vec:
                    if sp.degree[o] != deg:
                        rep.add("degree", f"output {sp.name(o)} has degree {sp.degree[o]}, expected {deg}",
                                arity=n, inputs=names)
                    elif self.filtration(o) < fil:
                        rep.add("filtration", f"output {sp.name(o)} in filtration {self.filtration(o)} < {fil}",
                                arity=n, inputs=names)
        if self.unit is not None and sp.bideg[self.unit] != (0, 0):
            rep.add("unit", f"unit {sp.name(self.unit)} must sit in F^0 with degree 0")
        return rep

    def as_plain(self) -> AInfinityAlgebra:
        """The underlying A∞-algebra, forgetting the filtration (order-0 family)."""
        return AInfinityAlgebra(self.space, 0, self.total, self.unit, validate=False)

    def components(self) -> dict[tuple[int, int], SparseMap]:
        """Split each total map by filtration shift j = filtration(out) − Σ filtration(in)."""
        out: dict[tuple[int, int], SparseMap] = {}
        for n, m in self.total.items():
            for key, vec in m.items():
                fil = sum(self.filtration(k) for k in key)
                for o, c in vec.items():
                    j = self.filtration(o) - fil
                    out.setdefault((n, j), {}).setdefault(key, {})[o] = c
        return out

    def __eq__(self, other):
        return (isinstance(other, FilteredAInfinity) and self.space == other.space
                and self.total == other.total and self.unit == other.unit)

    __hash__ = None

    def __repr__(self):
        return f"FilteredAInfinity(dim={self.space.dim}, arities={sorted(self.total)})"


def check_filtered(F: FilteredAInfinity, n_max: int | None = None) -> Report:
    rep = F.structure_report()
    if rep.violations:
        return rep
    A = F.as_plain()
    rep.extend(check_stasheff(A, n_max))
    return rep


def rees(F: FilteredAInfinity, check: bool = True) -> FormalBigradedDeformation:
    """Rees deformation: the filtration-shift-j component becomes the ħ^j component."""
    if check:
        rep = check_filtered(F)
        if rep.violations:
            raise StructureError(rep)
    comps = F.components()
    if any(j < 0 for _, j in comps):
        raise StructureError(F.structure_report())
    return FormalBigradedDeformation(F.space, 0, comps, F.unit)


def associated_graded(F: FilteredAInfinity) -> AInfinityAlgebra:
    maps = {n: m for (n, j), m in F.components().items() if j == 0}
    return AInfinityAlgebra(F.space, 0, maps, F.unit)


def specialize_hbar_one(D: FormalBigradedDeformation) -> FilteredAInfinity:
    """Set ħ = 1: total maps Σ_j m_n^j on the split space (deformations of 0-th type)."""
    if D.s_type != 0:
        raise ValueError("specialization at ħ=1 needs a deformation of 0-th type")
    F = D.field
    total: dict[int, SparseMap] = {}
    for (n, j), m in D.family.items():
        add_into(F, total.setdefault(n, {}), m)
    return FilteredAInfinity(D.space, total, D.unit)


def rees_roundtrip_check(D: FormalBigradedDeformation) -> bool:
    back = rees(specialize_hbar_one(D), check=False)
    return back.same_structure(D)


def unit_report(D: _Structured) -> Report:
    rep = Report("unit")
    _unit_report(D, rep)
    return rep


__all__ = [
    "FormalBigradedDeformation", "FilteredAInfinity", "check_deformation", "check_filtered", "reduce_mod",
    "rees", "associated_graded", "specialize_hbar_one", "rees_roundtrip_check", "max_admissible_order",
    "base_bidegree",
]
