"""The functors P (projected dg algebra), T (translation) and D on deformations."""

from __future__ import annotations

from .ainf import AInfinityAlgebra, _Structured
from .bigraded import BigradedMap, BigradedSpace
from .deformations import FormalBigradedDeformation
from .linalg import LinearSolver, Matrix, _rref_rows, nullspace, split_subspace
from .multilinear import clean_map, precompose_linear
from .report import InternalInconsistency


class PreconditionError(ValueError):
    pass


def _require_minimal(D: _Structured, what: str) -> None:
    if (1, 0) in D.family:
        raise PreconditionError(f"{what} needs a deformation with minimal base (m_1^0 = 0)")


def project_P(D: FormalBigradedDeformation) -> AInfinityAlgebra:
    """dg algebra (m_1^1, m_2^0) on the base space, of type s+1."""
    _require_minimal(D, "project_P")
    maps = {}
    if (1, 1) in D.family:
        maps[1] = D.family[(1, 1)]
    if (2, 0) in D.family:
        maps[2] = D.family[(2, 0)]
    return AInfinityAlgebra(D.space, D.s_type + 1, maps, D.unit)


def translate_T(D: FormalBigradedDeformation) -> FormalBigradedDeformation:
    """m̃_n^T = ħ^{n-2} m̃_n: component (n, j) moves to order j + n − 2."""
    _require_minimal(D, "translate_T")
    fam = {(n, j + n - 2): m for (n, j), m in D.family.items()}
    return FormalBigradedDeformation(D.space, D.s_type + 1, fam, D.unit)


def _fresh(name: str, used: set[str]) -> str:
    while name in used:
        name += "'"
    used.add(name)
    return name


def functor_D(D: FormalBigradedDeformation) -> FormalBigradedDeformation:
    """The sub-deformation {a : m̃_1(a) ∈ ħA_ħ} with maps ħ^{n−2} m̃_n, re-presented.

    Modulo ħ it is K ⊕ ħC where K = Ker m_1^0 and C is the standard complement
    of K; K is lifted as itself and C as ħ·C (one bidegree step (−1, 1) lower).
    An element Σ_t R_t ħ^t of D(A_ħ) has coordinates: K-part of R_t on the
    K-lifts at order t, C-part of R_t on the ħC-lifts at order t − 1.
    """
    V = D.space
    F = V.field
    s = D.s_type
    d0 = BigradedMap.from_sparse(V, V, (s, 1 - s), {k[0]: v for k, v in D.component(1, 0).items()})
    used: set[str] = set()
    basis: list[tuple[str, int, int]] = []
    lifts: list[tuple[int, dict]] = []     # (ħ exponent, vector in V)
    decomp: dict = {}                      # bidegree -> (solver, K new indices, C new indices)
    unit_new = None
    # K-lifts first, then ħC-lifts, in bidegree order
    plan = []
    for b, blk in V.blocks.items():
        n = len(blk)
        K = nullspace(d0.blocks[b])
        rows, piv = _rref_rows(F, [list(v) for v in K], n)
        rows = rows[: len(piv)]
        if D.unit is not None and V.bideg[D.unit] == b:
            u = [F.zero()] * n
            u[V.pos[D.unit]] = F.one()
            rest = [list(r) for r in rows]
            for r in rest:
                r[V.pos[D.unit]] = F.zero()
            rest, rp = _rref_rows(F, rest, n)
            rows = [u] + rest[: len(rp)]
        C = split_subspace(F, rows, n)
        plan.append((b, rows, C))
    for b, rows, C in plan:
        kidx = []
        for r in rows:
            nz = [(k, c) for k, c in enumerate(r) if c != 0]
            blk = V.block(b)
            if len(nz) == 1 and nz[0][1] == 1:
                name = V.name(blk[nz[0][0]])
            else:
                name = V.name(blk[nz[0][0]]) + "'"
            kidx.append(len(basis))
            if D.unit is not None and nz == [(V.pos[D.unit], 1)] and blk[nz[0][0]] == D.unit:
                unit_new = len(basis)
            basis.append((_fresh(name, used), b[0], b[1]))
            lifts.append((0, V.from_block(b, r)))
        decomp[b] = [rows, C, kidx, None]
    for b, rows, C in plan:
        cidx = []
        blk = V.block(b)
        for c in C:
            k = next(i for i, x in enumerate(c) if x != 0)
            cidx.append(len(basis))
            basis.append((_fresh("hbar." + V.name(blk[k]), used), b[0] - 1, b[1] + 1))
            lifts.append((1, V.from_block(b, c)))
        decomp[b][3] = cidx
    W = BigradedSpace(F, basis)
    solvers = {}
    for b, (rows, C, kidx, cidx) in decomp.items():
        cols = list(rows) + list(C)
        n = V.block_dim(b)
        A = Matrix(F, n, len(cols), tuple(tuple(c[r] for c in cols) for r in range(n)))
        solvers[b] = LinearSolver(A)

    g = {w: vec for w, (_, vec) in enumerate(lifts)}
    expo = [e for e, _ in lifts]
    fam: dict = {}
    for (n, j), m in D.family.items():
        pulled = precompose_linear(F, m, g)
        for key, vec in pulled.items():
            E = sum(expo[w] for w in key) + j + n - 2
            b = V.vector_bidegree(vec)
            rows, C, kidx, cidx = decomp[b]
            x = solvers[b].solve(V.to_block(vec, b))
            if x is None:
                raise InternalInconsistency("decomposition into kernel and complement failed")
            nk = len(kidx)
            for pos, coef in enumerate(x):
                if coef == 0:
                    continue
                if pos < nk:
                    out, order = kidx[pos], E
                else:
                    out, order = cidx[pos - nk], E - 1
                if order < 0:
                    raise InternalInconsistency(f"component of m_{n}^{j} leaves the submodule")
                tgt = fam.setdefault((n, order), {}).setdefault(key, {})
                tgt[out] = F.norm(tgt.get(out, 0) + coef)
    fam = {nj: clean_map(F, m) for nj, m in fam.items()}
    return FormalBigradedDeformation(W, s + 1, fam, unit_new)


def iterate_D(D: FormalBigradedDeformation, times: int) -> FormalBigradedDeformation:
    for _ in range(times):
        D = functor_D(D)
    return D
