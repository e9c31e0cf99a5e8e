"""Exact couples from the ħ-multiplication sequence of a deformation, and derived couples.

For a deformation A_ħ of type s the short exact sequence
0 → A_ħ --ħ--> A_ħ → A_ħ/(ħ) → 0 gives D = H(A_ħ), E = H(A, m_1^0) with
i = ħ·, j = reduction mod ħ and k = the connecting map a ↦ [ħ^{-1} m̃_1(a)].

A_ħ is infinite in ħ-powers, but in p-degrees at or below the bottom of the
support, ħ· is an isomorphism of complexes.  So we keep the subcomplex with
p ≥ floor − s, whose cohomology is exact from p = floor upward, and store D for
p ≥ floor = p_min − 1.  There i is injective by construction, so the
Ker i = Im k check is skipped only at the floor, where both sides vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bigraded import Bidegree, BigradedMap, BigradedSpace, cohomology_with_section
from .deformations import FormalBigradedDeformation
from .functors import iterate_D
from .linalg import LinearSolver, Matrix, _rref_rows
from .report import InternalInconsistency, Report


@dataclass
class ExactCouple:
    D: BigradedSpace
    E: BigradedSpace
    i: BigradedMap        # D → D, bidegree (−1, 1)
    j: BigradedMap        # D → E, bidegree (r, −r)
    k: BigradedMap        # E → D, bidegree (1+s, −s)
    r: int
    s: int
    floor: int            # lowest p stored in D; i is not recorded out of it

    @property
    def page_index(self) -> int:
        return self.r + self.s + 1

    def differential(self) -> BigradedMap:
        return self.j.compose(self.k)

    def e_dims(self) -> dict[Bidegree, int]:
        return {b: n for b, n in self.E.dims().items() if n}

    def d_ranks(self) -> dict[Bidegree, int]:
        d = self.differential()
        return {b: d.rank_at(b) for b in self.E.blocks if d.rank_at(b)}

    def exactness_report(self) -> Report:
        rep = Report(f"exact couple ({self.r},{self.s})")
        d = self.differential()
        if not d.compose(d).is_zero():
            rep.add("d-square", "j∘k∘j∘k is nonzero")
        for name, first, second, skip_floor in (("E", self.j, self.k, False), ("D/j", self.i, self.j, False),
                                                ("D/i", self.k, self.i, True)):
            # Ker(second) = Im(first) at every bidegree of second's source
            comp = second.compose(first)
            if not comp.is_zero():
                rep.add("exactness", f"{name}: composite of consecutive maps is nonzero")
            for b in second.source.blocks:
                if skip_floor and b[0] == self.floor:
                    continue
                ker = second.source.block_dim(b) - second.rank_at(b)
                src = (b[0] - first.bidegree[0], b[1] - first.bidegree[1])
                im = first.rank_at(src) if src in first.source.blocks else 0
                if ker != im:
                    rep.add("exactness", f"{name} at {b}: dim Ker = {ker}, rank Im = {im}")
        return rep


def _sparse_from(M: BigradedMap) -> dict:
    return M.to_sparse()


def exact_couple_from_deformation(D: FormalBigradedDeformation, s: int = 0) -> ExactCouple:
    """Couple of (0, s + s_type)-th type built from D^s(A_ħ)."""
    A = iterate_D(D, s)
    W = A.space
    F = W.field
    sig = A.s_type
    pr = W.p_range()
    pmin = pr[0] if pr else 0
    floor = pmin - 1
    bottom = floor - sig
    # the ħ-adic complex restricted to p ≥ bottom
    basis, where = [], {}
    for v, (name, p, q) in enumerate(W.basis):
        for r in range(0, p - bottom + 1):
            where[(v, r)] = len(basis)
            basis.append((f"{name}*h^{r}", p - r, q + r))
    C = BigradedSpace(F, basis)
    m1 = {j: {k[0]: vec for k, vec in m.items()} for (n, j), m in A.family.items() if n == 1}
    images: dict = {}
    for (v, r), idx in where.items():
        out: dict = {}
        for j, m in m1.items():
            for o, c in m.get(v, {}).items():
                t = where[(o, r + j)]
                out[t] = F.norm(out.get(t, 0) + c)
        images[idx] = {t: c for t, c in out.items() if c != 0}
    dC = BigradedMap.from_sparse(C, C, (sig, 1 - sig), images)
    cC = cohomology_with_section(dC, prefix="D")
    back = {idx: key for key, idx in where.items()}
    keep = [h for h in range(cC.H.dim) if cC.H.bideg[h][0] >= floor]
    Dsp = BigradedSpace(F, [cC.H.basis[h] for h in keep])
    to_D = {h: k for k, h in enumerate(keep)}

    def proj_D(vec: dict) -> dict:
        return {to_D[h]: c for h, c in cC.project(vec).items()}

    d0 = BigradedMap.from_sparse(W, W, (sig, 1 - sig), m1.get(0, {}))
    cE = cohomology_with_section(d0, prefix="E")
    E = cE.H
    i_img, j_img, k_img = {}, {}, {}
    for k, h in enumerate(keep):
        z = cC.section_vectors[h]
        if Dsp.bideg[k][0] > floor:
            shifted = {}
            for idx, c in z.items():
                v, r = back[idx]
                shifted[where[(v, r + 1)]] = c
            i_img[k] = proj_D(shifted)
        red = {back[idx][0]: c for idx, c in z.items() if back[idx][1] == 0}
        j_img[k] = cE.project(red)
    for e in range(E.dim):
        a = cE.section_vectors[e]
        out: dict = {}
        for j, m in m1.items():
            if j == 0:
                continue
            for v, c in a.items():
                for o, x in m.get(v, {}).items():
                    t = where[(o, j - 1)]
                    out[t] = F.norm(out.get(t, 0) + c * x)
        k_img[e] = proj_D({t: c for t, c in out.items() if c != 0})
    i = BigradedMap.from_sparse(Dsp, Dsp, (-1, 1), i_img)
    j = BigradedMap.from_sparse(Dsp, E, (0, 0), j_img)
    k = BigradedMap.from_sparse(E, Dsp, (1 + sig, -sig), k_img)
    return ExactCouple(Dsp, E, i, j, k, 0, sig, floor)


def derive_couple(C: ExactCouple) -> ExactCouple:
    """E' = H(E, jk), D' = i(D), i' = i|, j'(i x) = [j x], k'[e] = k e."""
    F = C.D.field
    Dsp = C.D
    ib = C.i.bidegree
    d = C.differential()
    cE = cohomology_with_section(d, prefix=f"E{C.r + 1}_")
    # D' = image of i, with an echelon basis per bidegree
    basis, emb, solvers = [], {}, {}
    for b in sorted(Dsp.blocks):
        src = (b[0] - ib[0], b[1] - ib[1])
        if src not in Dsp.blocks:
            continue
        M = C.i.blocks[src]
        n = Dsp.block_dim(b)
        rows, piv = _rref_rows(F, [list(col) for col in M.T.rows], n)
        rows = rows[: len(piv)]
        idx = []
        for t, row in enumerate(rows):
            emb[len(basis)] = Dsp.from_block(b, row)
            idx.append(len(basis))
            basis.append((f"{Dsp.name(Dsp.block(b)[piv[t]])}'", b[0], b[1]))
        if rows:
            solvers[b] = (LinearSolver(Matrix(F, n, len(rows), tuple(tuple(r[x] for r in rows) for x in range(n)))),
                          idx)
    names = [nm for nm, _, _ in basis]
    if len(set(names)) != len(names):
        basis = [(f"{nm}{t}", p, q) for t, (nm, p, q) in enumerate(basis)]
    Dp = BigradedSpace(F, basis)

    def in_Dp(vec: dict) -> dict:
        if not vec:
            return {}
        b = Dsp.vector_bidegree(vec)
        if b not in solvers:
            raise InternalInconsistency(f"derived couple: vector outside Im i at {b}")
        solver, idx = solvers[b]
        x = solver.solve(Dsp.to_block(vec, b))
        if x is None:
            raise InternalInconsistency(f"derived couple: vector outside Im i at {b}")
        return {idx[t]: c for t, c in enumerate(x) if c != 0}

    i_img, j_img, k_img = {}, {}, {}
    i_solvers: dict = {}
    for y, vec in emb.items():
        b = Dp.bideg[y]
        if b[0] > C.floor:
            i_img[y] = in_Dp(C.i.apply(vec))
        src = (b[0] - ib[0], b[1] - ib[1])
        if src not in i_solvers:
            i_solvers[src] = LinearSolver(C.i.blocks[src])
        x = i_solvers[src].solve(Dsp.to_block(vec, b))
        if x is None:
            raise InternalInconsistency("derived couple: no i-preimage")
        j_img[y] = cE.project(C.j.apply(Dsp.from_block(src, x)))
    for e in range(cE.H.dim):
        k_img[e] = in_Dp(C.k.apply(cE.section_vectors[e]))
    jb = (C.j.bidegree[0] - ib[0], C.j.bidegree[1] - ib[1])
    i2 = BigradedMap.from_sparse(Dp, Dp, ib, i_img)
    j2 = BigradedMap.from_sparse(Dp, cE.H, jb, j_img)
    k2 = BigradedMap.from_sparse(cE.H, Dp, C.k.bidegree, k_img)
    return ExactCouple(Dp, cE.H, i2, j2, k2, C.r + 1, C.s, C.floor)
