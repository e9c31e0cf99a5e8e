"""Spectral-sequence pages of filtered and deformed A∞-algebras, by three routes.

Every route materializes page r as a small dg algebra of r-th type (differential
d_r, product μ_r) on a basis of chosen representatives.  Comparisons across
routes only look at isomorphism invariants: dimensions, ranks of d_r per source
bidegree and ranks of μ_r per pair of bidegrees.

* filtration: classical subquotients Z_r / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})
  of the ħ = 1 total complex;
* d-iteration: page s+1+r is H(m_1^0) of D^r(A_ħ), with d induced by m_1^1 and
  μ induced by m_2^0;
* enhancement: transfer to a minimal model, read off (m̄_1^1, m̄_2^0), apply T,
  and repeat; the intermediate deformations form the A∞-enhancement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .ainf import AInfinityAlgebra, _Structured, check_stasheff
from .bigraded import Bidegree, BigradedMap, BigradedSpace, cohomology_with_section
from .deformations import FilteredAInfinity, FormalBigradedDeformation, check_deformation, rees, specialize_hbar_one
from .functors import PreconditionError, functor_D, iterate_D, project_P, translate_T
from .couples import ExactCouple, derive_couple, exact_couple_from_deformation
from .linalg import Field, LinearSolver, Matrix, _rref_rows, nullspace, rank_of_vectors, reduce_modulo, row_basis
from .multilinear import clean_map
from .report import InternalInconsistency, Report
from .transfer import deformation_transfer

__all__ = [
    "Page", "PageSet", "pages_from_filtration", "pages_from_deformation", "compare_pages",
    "weak_convergence_check", "closed_form_pages", "compare_closed_form", "page_recursion_report",
    "project_P", "translate_T", "functor_D", "iterate_D", "ExactCouple", "exact_couple_from_deformation",
    "derive_couple", "couple_pages", "PreconditionError", "enhancement_family_report", "filtered_cohomology_graded",
]


# --- page values ---------------------------------------------------------------------


def _key(b: Bidegree) -> str:
    return f"{b[0]},{b[1]}"


@dataclass
class Page:
    r: int
    algebra: AInfinityAlgebra      # (E_r, d_r, μ_r) as a dg algebra of r-th type

    @cached_property
    def dims(self) -> dict[Bidegree, int]:
        return {b: n for b, n in self.algebra.space.dims().items() if n}

    @cached_property
    def d_ranks(self) -> dict[Bidegree, int]:
        d = self.algebra.differential()
        out = {}
        for b in d.source.blocks:
            rk = d.rank_at(b)
            if rk:
                out[b] = rk
        return out

    @cached_property
    def mu_ranks(self) -> dict[tuple[Bidegree, Bidegree], int]:
        E = self.algebra.space
        F = E.field
        mu = self.algebra.m(2)
        cols: dict = {}
        for (x, y), vec in mu.items():
            cols.setdefault((E.bideg[x], E.bideg[y]), []).append(vec)
        out = {}
        for (b1, b2), vecs in cols.items():
            t = (b1[0] + b2[0], b1[1] + b2[1])
            rk = rank_of_vectors(F, [E.to_block(v, t) for v in vecs], E.block_dim(t))
            if rk:
                out[(b1, b2)] = rk
        return out

    def cohomology_dims(self) -> dict[Bidegree, int]:
        """dims of H(E_r, d_r), computed from ranks alone."""
        out = {}
        step = (self.r, 1 - self.r)
        for b, n in self.dims.items():
            into = self.d_ranks.get((b[0] - step[0], b[1] - step[1]), 0)
            h = n - self.d_ranks.get(b, 0) - into
            if h:
                out[b] = h
        return out

    def law_report(self) -> Report:
        """d_r² = 0, Leibniz and associativity of μ_r (unit law when a unit class exists)."""
        rep = check_stasheff(self.algebra, n_max=3)
        rep.subject = f"page {self.r}"
        return rep

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "dims": {_key(b): n for b, n in sorted(self.dims.items())},
            "d_ranks": {_key(b): n for b, n in sorted(self.d_ranks.items())},
            "mu_ranks": {f"{_key(a)}|{_key(b)}": n for (a, b), n in sorted(self.mu_ranks.items())},
        }


@dataclass
class PageSet:
    start: int
    pages: list[Page]
    route: str
    e_inf: dict[Bidegree, int] | None = None
    checks: Report = field(default_factory=Report)
    family: list | None = None        # enhancement route: [(^rA_ħ, its transfer result), ...]

    def page(self, r: int) -> Page:
        return self.pages[r - self.start]

    @property
    def r_last(self) -> int:
        return self.start + len(self.pages) - 1

    def to_json(self) -> dict:
        out = {
            "route": self.route,
            "start": self.start,
            "pages": [p.to_json() for p in self.pages],
            "checks": [v.line() for v in self.checks.violations],
        }
        if self.e_inf is not None:
            out["e_inf"] = {_key(b): n for b, n in sorted(self.e_inf.items())}
        return out


def page_recursion_report(P: PageSet) -> Report:
    rep = Report("page recursion")
    for a, b in zip(P.pages, P.pages[1:]):
        h = a.cohomology_dims()
        if h != b.dims:
            rep.add("page-recursion", f"H(E_{a.r}, d_{a.r}) dims {h} != E_{b.r} dims {b.dims}")
    return rep


def _finish(P: PageSet, stable: int) -> PageSet:
    """Record the page laws, the recursion and the stabilization of the computed pages."""
    for pg in P.pages:
        P.checks.extend(pg.law_report())
    P.checks.extend(page_recursion_report(P))
    if P.e_inf is not None and P.r_last >= stable and P.page(stable).dims != P.e_inf:
        P.checks.add("stabilization", f"E_{stable} dims {P.page(stable).dims} != E_inf dims {P.e_inf}")
    return P


def _stable_index(start: int, width: int) -> int:
    # d_r raises p by r, and pages live on a support of p-width `width`
    return max(start, width + 1)


# --- subquotients ----------------------------------------------------------------------


class _Subquotient:
    """Z / Den inside a coordinate slot, with representatives and a coordinate solver."""

    def __init__(self, F: Field, slot: list[int], Z: list[dict], Den: list[dict], prefer: dict | None = None):
        self.F = F
        self.slot = slot
        self.pos = {a: k for k, a in enumerate(slot)}
        n = len(slot)
        den, dpiv = _rref_rows(F, [self.dense(v) for v in Den], n)
        den, dpiv = den[: len(dpiv)], dpiv
        residues = [reduce_modulo(F, self.dense(z), den, dpiv) for z in Z]
        res, rpiv = _rref_rows(F, residues, n)
        res = res[: len(rpiv)]
        reps = res
        if prefer is not None:
            pv = reduce_modulo(F, self.dense(prefer), den, dpiv)
            if any(x != 0 for x in pv) and rank_of_vectors(F, res + [pv], n) == len(res):
                reps = [self.dense(prefer)]
                for row in res:
                    if rank_of_vectors(F, den + reps + [row], n) > len(den) + len(reps):
                        reps.append(row)
        self.den_dim = len(den)
        self.reps = [self.sparse(r) for r in reps]
        cols = den + [list(r) for r in reps]
        self.solver = LinearSolver(Matrix(F, n, len(cols), tuple(tuple(c[i] for c in cols) for i in range(n))))

    def dense(self, vec: dict) -> list:
        row = [self.F.zero()] * len(self.slot)
        for a, c in vec.items():
            row[self.pos[a]] = c
        return row

    def sparse(self, row) -> dict:
        return {self.slot[k]: c for k, c in enumerate(row) if c != 0}

    def coords(self, vec: dict) -> list | None:
        if any(a not in self.pos for a in vec):
            return None
        x = self.solver.solve(self.dense(vec))
        return None if x is None else x[self.den_dim:]


def _page_algebra(F: Field, r: int, sqs: dict[Bidegree, _Subquotient], diff, mult, unit_vec: dict | None,
                  label: str) -> AInfinityAlgebra:
    """Assemble (E_r, d_r, μ_r) from subquotients; ``diff``/``mult`` act on representatives."""
    basis, where, reps = [], {}, []
    for b in sorted(sqs):
        for k, rep in enumerate(sqs[b].reps):
            where[(b, k)] = len(basis)
            basis.append((f"e{r}_{b[0]}_{b[1]}_{k}", b[0], b[1]))
            reps.append((b, rep))
    E = BigradedSpace(F, basis)

    def express(vec: dict, t: Bidegree, what: str) -> dict:
        if not vec:
            return {}
        sq = sqs.get(t)
        x = sq.coords(vec) if sq is not None else None
        if x is None:
            raise InternalInconsistency(f"{label}: {what} leaves the page cycles at {t}")
        return {where[(t, k)]: c for k, c in enumerate(x) if c != 0}

    step = (r, 1 - r)
    d, mu = {}, {}
    for e, (b, x) in enumerate(reps):
        v = express(diff(x), (b[0] + step[0], b[1] + step[1]), "d")
        if v:
            d[(e,)] = v
    for e1, (b1, x) in enumerate(reps):
        for e2, (b2, y) in enumerate(reps):
            v = express(mult(x, y), (b1[0] + b2[0], b1[1] + b2[1]), "product")
            if v:
                mu[(e1, e2)] = v
    unit = None
    if unit_vec is not None:
        u = express(unit_vec, (0, 0), "unit")
        if len(u) == 1 and list(u.values()) == [1]:
            unit = next(iter(u))
    return AInfinityAlgebra(E, r, {1: clean_map(F, d), 2: clean_map(F, mu)}, unit)


# --- filtration route --------------------------------------------------------------------


class _TotalComplex:
    def __init__(self, A: FilteredAInfinity):
        V = A.space
        self.F = V.field
        self.V = V
        self.by_deg: dict[int, list[int]] = {}
        for i in range(V.dim):
            self.by_deg.setdefault(V.degree[i], []).append(i)
        self.d = {k[0]: v for k, v in A.total.get(1, {}).items()}
        self.m2 = A.total.get(2, {})
        self.unit = A.unit
        pr = V.p_range()
        self.pmin, self.pmax = pr if pr else (0, -1)

    def fil(self, i: int) -> int:
        return self.V.bideg[i][0]

    def slot(self, n: int) -> list[int]:
        return self.by_deg.get(n, [])

    def pre(self, n: int, p_from: int | None, p_to: int | None) -> list[dict]:
        """{x ∈ F^{p_from} M^n : dx ∈ F^{p_to}}; ``p_to=None`` asks for dx = 0."""
        F = self.F
        cols = [i for i in self.slot(n) if p_from is None or self.fil(i) >= p_from]
        rows = [o for o in self.slot(n + 1) if p_to is None or self.fil(o) < p_to]
        if not cols:
            return []
        if not rows:
            return [{c: F.one()} for c in cols]
        rpos = {o: k for k, o in enumerate(rows)}
        M = [[F.zero()] * len(cols) for _ in rows]
        for k, c in enumerate(cols):
            for o, v in self.d.get(c, {}).items():
                if o in rpos:
                    M[rpos[o]][k] = v
        N = nullspace(Matrix(F, len(rows), len(cols), tuple(tuple(r) for r in M)))
        return [{cols[k]: c for k, c in enumerate(v) if c != 0} for v in N]

    def apply_d(self, x: dict) -> dict:
        out: dict = {}
        for i, c in x.items():
            for o, v in self.d.get(i, {}).items():
                out[o] = self.F.norm(out.get(o, 0) + c * v)
        return {o: v for o, v in out.items() if v != 0}

    def mult(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for (a, b), vec in self.m2.items():
            ca, cb = x.get(a), y.get(b)
            if ca is None or cb is None:
                continue
            for o, v in vec.items():
                out[o] = self.F.norm(out.get(o, 0) + ca * cb * v)
        return {o: v for o, v in out.items() if v != 0}

    def degrees(self) -> list[int]:
        return sorted(self.by_deg)

    def Z(self, r: int, p: int, n: int) -> list[dict]:
        return self.pre(n, p, p + r)

    def Den(self, r: int, p: int, n: int) -> list[dict]:
        return self.Z(r - 1, p + 1, n) + [self.apply_d(x) for x in self.Z(r - 1, p - r + 1, n - 1)]

    def subquotients(self, r: int | None) -> dict[Bidegree, _Subquotient]:
        out = {}
        unit = {self.unit: self.F.one()} if self.unit is not None else None
        for n in self.degrees():
            for p in range(self.pmin, self.pmax + 1):
                if r is None:
                    Z = self.pre(n, p, None)
                    Den = self.pre(n, p + 1, None) + [self.apply_d(x) for x in self.pre(n - 1, None, p)]
                else:
                    Z, Den = self.Z(r, p, n), self.Den(r, p, n)
                b = (p, n - p)
                out[b] = _Subquotient(self.F, self.slot(n), Z, Den, unit if b == (0, 0) else None)
        return out


def _filtration_page(T: _TotalComplex, r: int) -> Page:
    sqs = T.subquotients(r)
    unit = {T.unit: T.F.one()} if T.unit is not None else None
    return Page(r, _page_algebra(T.F, r, sqs, T.apply_d, T.mult, unit, f"filtration page {r}"))


def pages_from_filtration(A: FilteredAInfinity, r_max: int | None = None, e_inf: bool = True) -> PageSet:
    """Pages E_1 .. E_{r_max} of the filtration spectral sequence (default: until stable)."""
    T = _TotalComplex(A)
    width = A.space.p_width()
    stable = _stable_index(1, width)
    r_max = stable if r_max is None else r_max
    pages = [_filtration_page(T, r) for r in range(1, r_max + 1)]
    einf = None
    if e_inf:
        einf = {b: len(sq.reps) for b, sq in T.subquotients(None).items() if sq.reps}
    return _finish(PageSet(1, pages, "filtration", einf), stable)


def filtered_cohomology_graded(A: FilteredAInfinity) -> dict[Bidegree, int]:
    """dims of Gr_p H^n of the total complex with the induced filtration."""
    T = _TotalComplex(A)
    F = T.F
    out = {}
    for n in T.degrees():
        slot = T.slot(n)
        dense = lambda v: [v.get(a, F.zero()) for a in slot]  # noqa: E731
        B = [dense(T.apply_d({i: F.one()})) for i in T.slot(n - 1)]
        prev = None
        for p in range(T.pmax + 1, T.pmin - 1, -1):
            Z = [dense(z) for z in T.pre(n, p, None)]
            dim = rank_of_vectors(F, B + Z, len(slot)) if slot else 0
            if prev is not None and dim - prev:
                out[(p, n - p)] = dim - prev
            prev = dim
    return out


# --- deformation routes ------------------------------------------------------------------


def _layer_page(D: _Structured) -> Page:
    """Page s+1 of a deformation of s-th type: H(m_1^0) with d = [m_1^1], μ = [m_2^0]."""
    V = D.space
    F = V.field
    r = D.s_type + 1
    d0 = BigradedMap.from_sparse(V, V, (D.s_type, 1 - D.s_type), {k[0]: v for k, v in D.component(1, 0).items()})
    image = {}
    for b, blk in V.blocks.items():
        src = (b[0] - D.s_type, b[1] - 1 + D.s_type)
        rows = [list(x) for x in d0.blocks[src].T.rows] if src in d0.blocks else []
        image[b] = rows
    sqs = {}
    unit = {D.unit: F.one()} if D.unit is not None else None
    for b, blk in V.blocks.items():
        kernel = [V.from_block(b, v) for v in nullspace(d0.blocks[b])]
        Den = [V.from_block(b, v) for v in image[b]]
        sqs[b] = _Subquotient(F, list(blk), kernel, Den, unit if b == (0, 0) else None)
    m11 = {k[0]: v for k, v in D.component(1, 1).items()}
    m20 = D.component(2, 0)

    def diff(x: dict) -> dict:
        out: dict = {}
        for i, c in x.items():
            for o, v in m11.get(i, {}).items():
                out[o] = F.norm(out.get(o, 0) + c * v)
        return {o: v for o, v in out.items() if v != 0}

    def mult(x: dict, y: dict) -> dict:
        out: dict = {}
        for (a, b), vec in m20.items():
            if a in x and b in y:
                for o, v in vec.items():
                    out[o] = F.norm(out.get(o, 0) + x[a] * y[b] * v)
        return {o: v for o, v in out.items() if v != 0}

    return Page(r, _page_algebra(F, r, sqs, diff, mult, unit, f"layer page {r}"))


def pages_from_deformation(D: FormalBigradedDeformation, r_max: int | None = None,
                           route: str = "d_iteration", arity_max: int | None = None) -> PageSet:
    """Pages E_{s+1} .. E_{r_max} via D-iteration or via the A∞-enhancement."""
    route = route.replace("-", "_")
    start = D.s_type + 1
    width = D.space.p_width()
    stable = _stable_index(start, width)
    last = stable if r_max is None else max(r_max, start)
    pages: list[Page] = []
    family = None
    if route in ("d_iteration", "d_iter"):
        layer = D
        for r in range(start, max(last, stable) + 1):
            if r > start:
                layer = functor_D(layer)
            pages.append(_layer_page(layer))
        route = "d_iteration"
    elif route in ("enhancement", "enhance"):
        family = []
        layer = D
        for r in range(start, max(last, stable) + 1):
            if r > start:
                layer = translate_T(family[-1][1].model)
            res = deformation_transfer(layer, arity_max)
            family.append((layer, res))
            pages.append(_layer_page(res.model))
        route = "enhancement"
    else:
        raise ValueError(f"unknown route {route!r}")
    e_inf = pages[stable - start].dims
    P = PageSet(start, pages[: last - start + 1], route, dict(e_inf), family=family)
    return _finish(P, stable)


# --- closed forms for the first two pages -------------------------------------------------


def closed_form_pages(D: _Structured) -> dict[int, tuple[dict, dict]]:
    """(dims, d ranks) of E_{s+1} and E_{s+2} straight from m_1^0, m_1^1, m_1^2.

    E_{s+2} = (Ker m_1^0 ∩ (m_1^1)^{-1} Im m_1^0) / (m_1^1 Ker m_1^0 + Im m_1^0), and
    d_{s+2}[x] = [m_1^2 x − m_1^1 y] for any y with m_1^1 x = m_1^0 y.
    """
    V = D.space
    F = V.field
    s = D.s_type
    maps = [BigradedMap.from_sparse(V, V, (s + j, 1 - s - j), {k[0]: v for k, v in D.component(1, j).items()})
            for j in range(3)]
    m0, m1, m2 = maps
    ker = {b: [list(v) for v in nullspace(m0.blocks[b])] for b in V.blocks}

    def img(M: BigradedMap, b: Bidegree, vecs=None) -> list[list]:
        src = (b[0] - M.bidegree[0], b[1] - M.bidegree[1])
        if src not in V.blocks:
            return []
        vs = vecs(src) if vecs else [[F.one() if i == k else F.zero() for i in range(V.block_dim(src))]
                                     for k in range(V.block_dim(src))]
        return [M.blocks[src].apply(v) for v in vs]

    def quotient_rank(vecs: list[list], den: list[list], n: int) -> int:
        return rank_of_vectors(F, den + vecs, n) - rank_of_vectors(F, den, n)

    dims1, ranks1, dims2, ranks2 = {}, {}, {}, {}
    den1 = {b: img(m0, b) for b in V.blocks}
    for b, n in V.dims().items():
        h = quotient_rank(ker[b], den1[b], n)
        if h:
            dims1[b] = h
        t = (b[0] + s + 1, b[1] - s)
        if t in V.blocks:
            rk = quotient_rank([m1.blocks[b].apply(v) for v in ker[b]], den1[t], V.block_dim(t))
            if rk:
                ranks1[b] = rk
    den2 = {b: den1[b] + img(m1, b, lambda src: ker[src]) for b in V.blocks}
    for b, n in V.dims().items():
        t = (b[0] + s + 1, b[1] - s)
        src0 = (t[0] - s, t[1] - 1 + s)            # source of m_1^0 landing in t
        pairs = []
        if t in V.blocks:
            Kb = ker[b]
            A_cols = [m1.blocks[b].apply(v) for v in Kb]
            B_cols = ([[F.neg(x) for x in m0.blocks[src0].apply(e)] for e in
                       ([[F.one() if i == k else F.zero() for i in range(V.block_dim(src0))]
                         for k in range(V.block_dim(src0))])] if src0 in V.blocks else [])
            cols = A_cols + B_cols
            nt = V.block_dim(t)
            if cols:
                M = Matrix(F, nt, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nt)))
                for sol in nullspace(M):
                    alpha, beta = sol[: len(Kb)], sol[len(Kb):]
                    x = [F.norm(sum(a * v[i] for a, v in zip(alpha, Kb))) for i in range(n)]
                    pairs.append((x, beta))
            if not Kb:
                pairs = []
        else:
            pairs = [(v, []) for v in ker[b]]
        Z2 = [x for x, _ in pairs]
        h = rank_of_vectors(F, Z2 + den2[b], n) - rank_of_vectors(F, den2[b], n)
        if h:
            dims2[b] = h
        t2 = (b[0] + s + 2, b[1] - s - 1)
        if t2 in V.blocks and pairs:
            vals = []
            for x, beta in pairs:
                v = m2.blocks[b].apply(x)
                if beta and src0 in V.blocks:
                    w = m1.blocks[src0].apply(beta)
                    v = [F.norm(a - c) for a, c in zip(v, w)]
                vals.append(v)
            rk = quotient_rank(vals, den2[t2], V.block_dim(t2))
            if rk:
                ranks2[b] = rk
    return {s + 1: (dims1, ranks1), s + 2: (dims2, ranks2)}


def compare_closed_form(D: _Structured, P: PageSet) -> Report:
    rep = Report("closed form")
    for r, (dims, ranks) in closed_form_pages(D).items():
        if not (P.start <= r <= P.r_last):
            continue
        pg = P.page(r)
        if pg.dims != dims:
            rep.add("closed-form", f"E_{r} dims {pg.dims} != closed form {dims}")
        if pg.d_ranks != ranks:
            rep.add("closed-form", f"d_{r} ranks {pg.d_ranks} != closed form {ranks}")
    return rep


# --- exact couples as a page source ------------------------------------------------------


def couple_pages(D: FormalBigradedDeformation, count: int) -> list[tuple[int, dict, dict]]:
    """(page index, E dims, d ranks) from the exact couple and its derived couples."""
    C = exact_couple_from_deformation(D, 0)
    out = []
    for _ in range(count):
        out.append((C.page_index, C.e_dims(), C.d_ranks()))
        C = derive_couple(C)
    return out


# --- comparison ----------------------------------------------------------------------------


def _fmt(d: dict) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(d.items())) + "}"


def compare_pages(P1: PageSet, P2: PageSet, r_max: int | None = None, products: bool = True) -> Report:
    """Mismatches of dims, d_r ranks, μ_r ranks and E_∞ dims between two page sets."""
    rep = Report(f"compare {P1.route} / {P2.route}")
    if P1.start != P2.start:
        rep.add("start", f"start index {P1.start} != {P2.start}")
        return rep
    last = min(P1.r_last, P2.r_last)
    if r_max is not None:
        last = min(last, r_max)
    for r in range(P1.start, last + 1):
        a, b = P1.page(r), P2.page(r)
        if a.dims != b.dims:
            rep.add("dims", f"E_{r}: {_fmt(a.dims)} != {_fmt(b.dims)}")
        if a.d_ranks != b.d_ranks:
            rep.add("d-rank", f"d_{r}: {_fmt(a.d_ranks)} != {_fmt(b.d_ranks)}")
        if products and a.mu_ranks != b.mu_ranks:
            rep.add("product-rank", f"mu_{r}: {_fmt(a.mu_ranks)} != {_fmt(b.mu_ranks)}")
    if P1.e_inf is not None and P2.e_inf is not None and P1.e_inf != P2.e_inf:
        rep.add("e-inf", f"{_fmt(P1.e_inf)} != {_fmt(P2.e_inf)}")
    return rep


def weak_convergence_check(X: FormalBigradedDeformation | FilteredAInfinity) -> Report:
    """E_∞ against Gr of the filtered cohomology of the ħ = 1 total complex."""
    rep = Report("weak convergence")
    if isinstance(X, FilteredAInfinity):
        einf = pages_from_filtration(X, r_max=1).e_inf
        total = X
    else:
        if X.s_type != 0:
            raise PreconditionError("weak convergence is checked for deformations of 0-th type")
        einf = pages_from_deformation(X, route="d_iteration").e_inf
        total = specialize_hbar_one(X)
    gr = filtered_cohomology_graded(total)
    if einf != gr:
        rep.add("weak-convergence", f"E_inf {_fmt(einf)} != Gr H {_fmt(gr)}")
    return rep


def enhancement_family_report(P: PageSet) -> Report:
    rep = Report("enhancement family")
    for layer, res in P.family or []:
        rep.extend(check_deformation(layer))
        rep.extend(check_deformation(res.model))
    return rep
