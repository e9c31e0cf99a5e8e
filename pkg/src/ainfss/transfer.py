"""Minimal models by obstruction theory, for A∞-algebras and for their deformations.

At each step the not-yet-known terms of the morphism identity are absent from
the families, so the identity's defect *is* the obstruction U.  The theory
guarantees m_1 ∘ U = 0; the new structure map is m̄ = −π∘U and the new
morphism component solves m_1 ∘ f = U + f_1 ∘ m̄ (leftmost-pivot solution,
zero on zero right-hand sides, which also keeps unit inputs at zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .ainf import AInfinityAlgebra, AInfinityMorphism, _Structured, base_bidegree
from .bigraded import BigradedMap, BigradedSpace, CohomologyData, cohomology_with_section
from .deformations import FormalBigradedDeformation
from .linalg import LinearSolver, rank_of_vectors
from .multilinear import (SparseMap, admissible_orders, clean_map, degree_bound, fallback_cap, morphism_defect,
                          postcompose_linear)
from .report import InternalInconsistency, Report


@dataclass
class TransferResult:
    model: AInfinityAlgebra
    morphism: AInfinityMorphism
    cohomology: CohomologyData
    arity_max: int
    complete: bool          # True when arities above arity_max vanish for degree reasons
    log: list[str] = field(default_factory=list)


@dataclass
class DeformedTransferResult:
    source: FormalBigradedDeformation
    base: TransferResult
    model: FormalBigradedDeformation
    morphism: AInfinityMorphism
    arity_max: int
    complete: bool
    log: list[str] = field(default_factory=list)

    @property
    def modelDeformation(self) -> FormalBigradedDeformation:
        return self.model


class _Solver:
    """Solves m_1^0 x = y blockwise, caching one row reduction per bidegree."""

    def __init__(self, d: BigradedMap):
        self.d = d
        self.space = d.source
        self._cache: dict = {}

    def solve(self, y: Mapping[int, object]) -> dict | None:
        V = self.space
        tb = V.vector_bidegree(y)
        if tb is None:
            return {}
        b = (tb[0] - self.d.bidegree[0], tb[1] - self.d.bidegree[1])
        if b not in V.blocks:
            return None
        if b not in self._cache:
            self._cache[b] = LinearSolver(self.d.blocks[b])
        x = self._cache[b].solve(V.to_block(y, tb))
        return None if x is None else V.from_block(b, x)


def _linear(m1: SparseMap) -> dict:
    return {k[0]: v for k, v in m1.items()}


def _arity_plan(H: BigradedSpace, A: BigradedSpace, s: int, arity_max: int | None) -> tuple[int, bool]:
    hb, ab = H.bidegrees(), A.bidegrees()
    bm, _ = degree_bound(hb, hb, s, 2)
    bf, _ = degree_bound(hb, ab, s, 1)
    if bm is None or bf is None:
        cap = fallback_cap(ab)
        if arity_max is not None:
            cap = arity_max
        return max(cap, 1), False
    bound = max(bm, bf, 1)
    if arity_max is not None and arity_max < bound:
        return arity_max, False
    return bound, True


def _step(F, H, A, s, cdata: CohomologyData, solver: _Solver, m1_lin: dict, model_fam: dict, f_fam: dict,
          n: int, order: int, label: str, log: list[str]) -> None:
    U = morphism_defect(F, model_fam, A.family, f_fam, H.degree, n, order)
    check = postcompose_linear(F, U, m1_lin)
    if check:
        raise InternalInconsistency(f"{label}: m_1 ∘ U does not vanish at arity {n}, order {order}")
    mbar: SparseMap = {}
    fnew: SparseMap = {}
    f1 = cdata.section_vectors
    for key, u in U.items():
        cls = cdata.project(u)
        if cls:
            mbar[key] = {h: F.norm(-c) for h, c in cls.items()}
        rhs = dict(u)
        for h, c in mbar.get(key, {}).items():
            for a, v in f1[h].items():
                rhs[a] = F.norm(rhs.get(a, 0) + c * v)
        rhs = {a: v for a, v in rhs.items() if v != 0}
        if not rhs:
            continue
        x = solver.solve(rhs)
        if x is None:
            raise InternalInconsistency(f"{label}: no solution for f at arity {n}, order {order}")
        if x:
            fnew[key] = x
    mbar, fnew = clean_map(F, mbar), clean_map(F, fnew)
    if mbar:
        model_fam[(n, order)] = mbar
    if fnew:
        f_fam[(n, order)] = fnew
    log.append(f"{label} n={n} j={order}: |U|={len(U)} |m|={len(mbar)} |f|={len(fnew)}")


def kadeishvili_transfer(A: AInfinityAlgebra, arity_max: int | None = None) -> TransferResult:
    """Minimal model on H(A, m_1) with f_1 the canonical section."""
    F = A.field
    s = A.s_type
    d = A.differential()
    cdata = cohomology_with_section(d, unit=A.unit)
    H = cdata.H
    unit_h = H.index["h0_0_0"] if A.unit is not None and "h0_0_0" in H.index else None
    n_top, complete = _arity_plan(H, A.space, s, arity_max)
    model_fam: dict = {}
    f_fam: dict = {(1, 0): {(h,): v for h, v in cdata.section_vectors.items()}}
    log: list[str] = [f"H dims {H.dims()}; arity bound {n_top} ({'degree' if complete else 'cap'})"]
    solver = _Solver(d)
    m1_lin = _linear(A.m(1))
    for n in range(2, n_top + 1):
        _step(F, H, A, s, cdata, solver, m1_lin, model_fam, f_fam, n, 0, "kadeishvili", log)
    model = AInfinityAlgebra(H, s, {k[0]: v for k, v in model_fam.items()}, unit_h)
    mor = AInfinityMorphism(model, A, f_fam)
    return TransferResult(model, mor, cdata, n_top, complete, log)


def deformation_transfer(D: FormalBigradedDeformation, arity_max: int | None = None,
                         base: TransferResult | None = None) -> DeformedTransferResult:
    """Transfer of a deformation to one of the minimal model, by double induction.

    Schedule: arity N outer, order N' inner, starting from the minimal model of
    the base (order 0).
    """
    F = D.field
    s = D.s_type
    if base is None:
        base = kadeishvili_transfer(D.base, arity_max)
    cdata = base.cohomology
    H = cdata.H
    n_top = base.arity_max
    model_fam = dict(base.model.family)
    f_fam = dict(base.morphism.components)
    log = list(base.log)
    d = D.base.differential()
    solver = _Solver(d)
    m1_lin = _linear(D.component(1, 0))
    hb, ab = H.bidegrees(), D.space.bidegrees()
    om = admissible_orders(hb, hb, s, 2, n_top)
    of = admissible_orders(hb, ab, s, 1, n_top)
    for N in range(1, n_top + 1):
        orders = sorted(set(om.get(N, [])) | set(of.get(N, [])))
        top = max(orders, default=0)
        for Np in range(1, top + 1):
            _step(F, H, D, s, cdata, solver, m1_lin, model_fam, f_fam, N, Np, "deformation", log)
    model = FormalBigradedDeformation(H, s, model_fam, base.model.unit)
    mor = AInfinityMorphism(model, D, f_fam)
    return DeformedTransferResult(D, base, model, mor, n_top, base.complete, log)


# --- quasi-isomorphism order by order ------------------------------------------------


def truncated_complex(S: _Structured, N: int, tag: str = "") -> tuple[BigradedSpace, BigradedMap, dict]:
    """S ⊗ k[ħ]/(ħ^{N+1}) as a finite complex with differential Σ_j m_1^j ħ^j."""
    sp = S.space
    basis, where = [], {}
    for r in range(N + 1):
        for i, (name, p, q) in enumerate(sp.basis):
            where[(i, r)] = len(basis)
            basis.append((f"{tag}{name}*h^{r}", p - r, q + r))
    V = BigradedSpace(S.field, basis)
    images: dict = {}
    for (n, j), m in S.family.items():
        if n != 1:
            continue
        for (i,), vec in m.items():
            for r in range(N + 1 - j):
                tgt = images.setdefault(where[(i, r)], {})
                for o, c in vec.items():
                    k = where[(o, r + j)]
                    tgt[k] = S.field.norm(tgt.get(k, 0) + c)
    d = BigradedMap.from_sparse(V, V, base_bidegree(S.s_type), images)
    return V, d, where


def verify_quasi_iso(result: DeformedTransferResult, n_max: int | None = None) -> Report:
    """At every truncation order, f̃_1 induces a bijection in cohomology."""
    rep = Report("quasi-iso")
    src, tgt = result.model, result.source
    F = src.field
    f = result.morphism
    if n_max is None:
        n_max = max(src.max_order(), tgt.max_order(), f.max_order()) + 1
    for N in range(n_max + 1):
        Vs, ds, ws = truncated_complex(src, N, "H:")
        Vt, dt, wt = truncated_complex(tgt, N, "A:")
        cs = cohomology_with_section(ds)
        ct = cohomology_with_section(dt)
        back = {idx: key for key, idx in ws.items()}
        for b in sorted(set(cs.H.blocks) | set(ct.H.blocks)):
            hs, ht = cs.H.block_dim(b), ct.H.block_dim(b)
            images = []
            for h in cs.H.block(b):
                out: dict = {}
                for k, c in cs.section_vectors[h].items():
                    i, r = back[k]
                    for (n, j), m in f.components.items():
                        if n != 1 or r + j > N:
                            continue
                        for o, v in m.get((i,), {}).items():
                            t = wt[(o, r + j)]
                            out[t] = F.norm(out.get(t, 0) + c * v)
                images.append(Vt.to_block({k: v for k, v in out.items() if v != 0}, b))
            im = ct.image.get(b, [])
            n = Vt.block_dim(b)
            rank = rank_of_vectors(F, list(im) + images, n) - len(im) if n else 0
            if not (hs == ht == rank):
                rep.add("quasi-iso", f"order {N} bidegree {b}: dim H(model)={hs}, dim H(source)={ht}, rank={rank}",
                        order=N)
    return rep
