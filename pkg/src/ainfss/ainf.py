"""A∞-algebras and morphisms with compatible bigrading, and their identity checkers."""

from __future__ import annotations

from typing import Mapping

from .bigraded import BigradedMap, BigradedSpace, add_bideg
from .linalg import Field
from .multilinear import (Family, SparseMap, bar_square, clean_family, degree_bound, format_map_entry,
                          morphism_defect, stasheff_defect, to_bar)
from .report import Report


class StructureError(ValueError):
    """Raised when a value violates a structural law; carries the report."""

    def __init__(self, report: Report):
        self.report = report
        first = report.violations[0].line() if report.violations else ""
        super().__init__(f"{report.subject}: {first}")


def base_bidegree(s: int) -> tuple[int, int]:
    return (s, 1 - s)


def map_bidegree(s: int, n: int, order: int, kind: int) -> tuple[int, int]:
    """Bidegree of an arity-n, order-j component; kind 2 for structure maps, 1 for morphisms."""
    c = kind - n
    return (c * s + order, c * (1 - s) - order)


def bidegree_report(src: BigradedSpace, tgt: BigradedSpace, fam: Mapping, s: int, kind: int,
                    label: str) -> Report:
    rep = Report(label)
    for (n, j), m in sorted(fam.items()):
        if n < 1 or j < 0:
            rep.add("bidegree", f"invalid component index ({n},{j})", arity=n, order=j)
            continue
        shift = map_bidegree(s, n, j, kind)
        for key, vec in m.items():
            if len(key) != n:
                rep.add("bidegree", "input tuple of wrong length", arity=n, order=j)
                continue
            b = (0, 0)
            for k in key:
                b = add_bideg(b, src.bideg[k])
            expect = add_bideg(b, shift)
            for o in vec:
                if tgt.bideg[o] != expect:
                    rep.add("bidegree",
                            f"output {tgt.name(o)}{tgt.bideg[o]} but expected bidegree {expect}",
                            arity=n, order=j, inputs=tuple(src.name(k) for k in key))
    return rep


def _as_family(maps: Mapping) -> dict:
    fam = {}
    for k, m in maps.items():
        nj = (k, 0) if isinstance(k, int) else tuple(k)
        fam[nj] = m
    return fam


def _resolve_unit(space: BigradedSpace, unit) -> int | None:
    if unit is None:
        return None
    return space.index[unit] if isinstance(unit, str) else int(unit)


class _Structured:
    """Shared storage for algebras and deformations: a family keyed (arity, order)."""

    kind_label = "structure"

    def __init__(self, space: BigradedSpace, s_type: int, family: Mapping, unit=None, validate: bool = True):
        if s_type < 0:
            raise ValueError("s_type must be nonnegative")
        self.space = space
        self.s_type = int(s_type)
        self.family: Family = clean_family(space.field, _as_family(family))
        self.unit = _resolve_unit(space, unit)
        if validate:
            rep = bidegree_report(space, space, self.family, self.s_type, 2, self.kind_label)
            if self.unit is not None and space.bideg[self.unit] != (0, 0):
                rep.add("unit", f"unit {space.name(self.unit)} not in bidegree (0,0)")
            if rep.violations:
                raise StructureError(rep)

    @property
    def field(self) -> Field:
        return self.space.field

    @property
    def unit_name(self) -> str | None:
        return None if self.unit is None else self.space.name(self.unit)

    def arities(self) -> list[int]:
        return sorted({n for n, _ in self.family})

    def max_arity(self) -> int:
        return max((n for n, _ in self.family), default=0)

    def max_order(self) -> int:
        return max((j for _, j in self.family), default=0)

    def component(self, n: int, j: int = 0) -> SparseMap:
        return self.family.get((n, j), {})

    def same_structure(self, other) -> bool:
        return (type(self) is type(other) and self.space == other.space and self.s_type == other.s_type
                and self.family == other.family and self.unit == other.unit)

    def __eq__(self, other):
        return self.same_structure(other)

    __hash__ = None


class AInfinityAlgebra(_Structured):
    kind_label = "algebra"

    def __init__(self, space: BigradedSpace, s_type: int, maps: Mapping, unit=None, validate: bool = True):
        fam = _as_family(maps)
        if any(j != 0 for _, j in fam):
            raise ValueError("plain algebras have order-0 components only")
        super().__init__(space, s_type, fam, unit, validate)

    @property
    def maps(self) -> dict[int, SparseMap]:
        return {n: m for (n, _), m in self.family.items()}

    def m(self, n: int) -> SparseMap:
        return self.family.get((n, 0), {})

    def is_minimal(self) -> bool:
        return (1, 0) not in self.family

    def differential(self) -> BigradedMap:
        images = {k[0]: v for k, v in self.m(1).items()}
        return BigradedMap.from_sparse(self.space, self.space, base_bidegree(self.s_type), images)

    def __repr__(self):
        return f"AInfinityAlgebra(dim={self.space.dim}, s={self.s_type}, arities={self.arities()})"


class AInfinityMorphism:
    """Components f_n^j from ``source`` to ``target`` (order 0 only for plain morphisms)."""

    def __init__(self, source: _Structured, target: _Structured, components: Mapping, validate: bool = True):
        if source.s_type != target.s_type:
            raise ValueError(f"s_type mismatch: {source.s_type} vs {target.s_type}")
        if source.field != target.field:
            raise ValueError("field mismatch")
        self.source, self.target = source, target
        self.components: Family = clean_family(source.field, _as_family(components))
        if validate:
            rep = bidegree_report(source.space, target.space, self.components, source.s_type, 1, "morphism")
            if rep.violations:
                raise StructureError(rep)

    @property
    def s_type(self) -> int:
        return self.source.s_type

    def f(self, n: int, j: int = 0) -> SparseMap:
        return self.components.get((n, j), {})

    def max_arity(self) -> int:
        return max((n for n, _ in self.components), default=0)

    def max_order(self) -> int:
        return max((j for _, j in self.components), default=0)

    @classmethod
    def identity(cls, A: _Structured) -> "AInfinityMorphism":
        one = A.field.one()
        return cls(A, A, {(1, 0): {(i,): {i: one} for i in range(A.space.dim)}})


# --- identities --------------------------------------------------------------------


def si_defect(A: _Structured, n: int, order: int = 0) -> SparseMap:
    """Left-hand side of SI(n) at the given order, as a sparse multilinear map."""
    if n < 1:
        raise ValueError("arity must be positive")
    return stasheff_defect(A.field, A.family, A.space.degree, n, order)


def mi_defect(f: AInfinityMorphism, n: int, order: int = 0) -> SparseMap:
    if f.source.s_type != f.target.s_type:
        raise ValueError("s_type mismatch")
    return morphism_defect(f.source.field, f.source.family, f.target.family, f.components,
                           f.source.space.degree, n, order)


def default_stasheff_arity(A: _Structured) -> int:
    """Largest n for which SI(n) can have a nonzero term.

    Terms of SI(n) compose two declared maps, so n ≤ 2K − 1 for the largest
    declared arity K; when the bigrading support bounds arities, that bound
    (for maps of the defect's bidegree) is used if smaller.
    """
    K = A.max_arity()
    if K == 0:
        return 1
    n = 2 * K - 1
    sup = A.space.bidegrees()
    b, _ = degree_bound(sup, sup, A.s_type, 3)
    if b is not None:
        n = min(n, max(b, 1))
    return n


def _unit_report(A: _Structured, rep: Report) -> None:
    u = A.unit
    if u is None:
        return
    F = A.field
    sp = A.space
    for (n, j), m in A.family.items():
        for key, vec in m.items():
            if u not in key:
                continue
            if n != 2:
                rep.add("unit", f"m_{n}^{j} nonzero on a unit input", arity=n, order=j,
                        inputs=tuple(sp.name(k) for k in key))
            elif j != 0:
                rep.add("unit", f"m_2^{j} nonzero on a unit input", arity=2, order=j,
                        inputs=tuple(sp.name(k) for k in key))
    m2 = A.family.get((2, 0), {})
    one = F.one()
    for a in range(sp.dim):
        for key in ((u, a), (a, u)):
            if m2.get(key, {}) != {a: one}:
                rep.add("unit", f"m_2 on unit gives {sp.format_vector(m2.get(key, {}))}",
                        arity=2, order=0, inputs=tuple(sp.name(k) for k in key))


def _order_range(A: _Structured) -> range:
    return range(0, 2 * A.max_order() + 1)


def check_stasheff(A: _Structured, n_max: int | None = None, orders=None) -> Report:
    """Every (n, order, input tuple) where SI(n) fails, plus strict-unit violations."""
    rep = Report(f"stasheff({A.kind_label})")
    if n_max is None:
        n_max = default_stasheff_arity(A)
    sup = A.space.bidegrees()
    bound, _ = degree_bound(sup, sup, A.s_type, 2)
    if bound is not None:
        for (n, j) in A.family:
            if n > bound:
                rep.add("arity-bound", f"declared m_{n}^{j} above the degree bound {bound}", arity=n, order=j)
    for J in (orders if orders is not None else _order_range(A)):
        for n in range(1, n_max + 1):
            d = si_defect(A, n, J)
            for key, vec in d.items():
                rep.add(f"SI({n})", format_map_entry(A.space, A.space, key, vec), arity=n, order=J,
                        inputs=tuple(A.space.name(k) for k in key))
    _unit_report(A, rep)
    return rep


def bar_square_check(A: _Structured, n_max: int | None = None, orders=None) -> Report:
    """Vanishing of the square of the bar coderivation, computed on the shifted space."""
    rep = Report(f"bar({A.kind_label})")
    if n_max is None:
        n_max = default_stasheff_arity(A)
    F = A.field
    deg = A.space.degree
    bfam = to_bar(F, A.family, deg)
    for J in (orders if orders is not None else _order_range(A)):
        for n in range(1, n_max + 1):
            d = bar_square(F, bfam, deg, n, J)
            for key, vec in d.items():
                rep.add(f"bar({n})", format_map_entry(A.space, A.space, key, vec), arity=n, order=J,
                        inputs=tuple(A.space.name(k) for k in key))
    return rep


def flagged_positions(rep: Report) -> set[tuple]:
    """(arity, order, inputs) triples of identity violations, for cross-validation."""
    return {(v.arity, v.order, v.inputs) for v in rep.violations
            if v.law.startswith("SI(") or v.law.startswith("bar(")}


def default_morphism_arity(f: AInfinityMorphism) -> int:
    kf = f.max_arity()
    ks = f.source.max_arity()
    kt = f.target.max_arity()
    n = max(kf + ks - 1, kf * kt, 1)
    b, _ = degree_bound(f.source.space.bidegrees(), f.target.space.bidegrees(), f.s_type, 2)
    if b is not None:
        n = min(n, max(b, 1))
    return n


def check_morphism(f: AInfinityMorphism, n_max: int | None = None, orders=None) -> Report:
    if f.source.s_type != f.target.s_type:
        raise ValueError("s_type mismatch")
    rep = Report("morphism")
    if n_max is None:
        n_max = default_morphism_arity(f)
    if orders is None:
        top = f.max_order() + max(f.source.max_order(), f.target.max_order())
        orders = range(0, top + 1)
    src = f.source.space
    for J in orders:
        for n in range(1, n_max + 1):
            d = mi_defect(f, n, J)
            for key, vec in d.items():
                rep.add(f"MI({n})", format_map_entry(src, f.target.space, key, vec), arity=n, order=J,
                        inputs=tuple(src.name(k) for k in key))
    if f.source.unit is not None and f.target.unit is not None:
        u, v = f.source.unit, f.target.unit
        one = f.source.field.one()
        if f.f(1).get((u,), {}) != {v: one}:
            rep.add("unit", "f_1 does not send the unit to the unit", arity=1)
        for (n, j), m in f.components.items():
            if j > 0 and n == 1 and (u,) in m:
                rep.add("unit", f"f_1^{j} nonzero on the unit", arity=1, order=j)
            if n >= 2:
                for key in m:
                    if u in key:
                        rep.add("unit", f"f_{n}^{j} nonzero on a unit input", arity=n, order=j,
                                inputs=tuple(src.name(k) for k in key))
    return rep


# --- dg algebras -------------------------------------------------------------------


def from_dg(d: BigradedMap, mu: Mapping, unit=None, s_type: int | None = None) -> AInfinityAlgebra:
    """The A∞-algebra with m_1 = d and m_2 = mu, after checking the dg laws.

    ``mu`` maps index pairs to sparse vectors.  Raises StructureError naming the
    first violated law (bidegree, square-zero, Leibniz, associativity, unit).
    """
    V = d.source
    if d.target != V:
        raise ValueError("differential must be an endomorphism")
    s = d.bidegree[0] if s_type is None else s_type
    rep = Report("dg algebra")
    if tuple(d.bidegree) != base_bidegree(s) and not d.is_zero():
        rep.add("bidegree", f"differential of bidegree {d.bidegree} is not of type s={s}")
        raise StructureError(rep)
    maps = {}
    m1 = {(i,): v for i, v in d.to_sparse().items()}
    if m1:
        maps[1] = m1
    if mu:
        maps[2] = {tuple(k): dict(v) for k, v in mu.items()}
    try:
        A = AInfinityAlgebra(V, s, maps, unit)
    except StructureError as e:
        raise StructureError(Report("dg algebra", e.report.violations)) from None
    laws = [(1, "square-zero"), (2, "Leibniz"), (3, "associativity")]
    for n, law in laws:
        dft = si_defect(A, n)
        if dft:
            key, vec = next(iter(dft.items()))
            rep.add(law, f"witness {format_map_entry(V, V, key, vec)}", arity=n,
                    inputs=tuple(V.name(k) for k in key))
            raise StructureError(rep)
    urep = Report("dg algebra")
    _unit_report(A, urep)
    if A.unit is not None and (A.unit,) in A.m(1):
        urep.add("unit", "d(1) != 0")
    if urep.violations:
        raise StructureError(urep)
    return A


def algebra_from_names(space: BigradedSpace, s_type: int, entries: Mapping, unit: str | None = None,
                       validate: bool = True) -> AInfinityAlgebra:
    """Convenience: ``entries[arity][(names...)] = {name: coefficient}``."""
    F = space.field
    maps = {}
    for n, m in entries.items():
        maps[n] = {tuple(space.index[x] for x in key): {space.index[o]: F(c) for o, c in vec.items()}
                   for key, vec in m.items()}
    return AInfinityAlgebra(space, s_type, maps, unit, validate)
