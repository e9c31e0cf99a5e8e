"""Seeded random generators of valid (and deliberately invalid) structures.

All randomness comes from ``random.Random(seed)`` (Mersenne Twister, stdlib),
so a seed reproduces a corpus exactly on any CPython.  Valid structures are
made by transport: start from a dg algebra known to be valid (a monomial
algebra, plus contractible pairs, plus optionally a Massey-type block) and
push it forward along a random A∞-isomorphism f, solving the morphism
identity for the target structure:

    m^B_{n,j} ∘ (f_1^0)^{⊗n} = defect of MI(n) at order j with m^B_{n,j} absent.

Supports are kept in the half-plane q ≤ p (type 0) or q ≤ −p (type ≥ 1), which
makes every family degree-bounded, so the transport is exact.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass

from .ainf import AInfinityAlgebra, _Structured, map_bidegree
from .bigraded import BigradedSpace
from .deformations import FilteredAInfinity, FormalBigradedDeformation, rees
from .linalg import Field, LinearSolver, Matrix
from .multilinear import clean_map, degree_bound, morphism_defect, precompose_linear

DEFAULT_SEED = 20240611
MAX_BASIS = 10


def seed_from_env(default: int = DEFAULT_SEED) -> int:
    text = os.environ.get("AINFSS_SEED")
    return int(text) if text else default


@dataclass
class _Model:
    """A valid dg structure given by names; ``d`` entries carry a filtration shift."""
    basis: list[tuple[str, int, int]]
    d: list[tuple[str, int, str, object]]          # (source, shift j, target, coef)
    mu: list[tuple[str, str, str, object]]         # (left, right, output, coef)
    unit: str | None


def _nonzero(rng: random.Random, F: Field):
    while True:
        c = F.random(rng)
        if c != 0:
            return c


def _in_region(p: int, q: int, s: int) -> bool:
    return q <= p if s == 0 else q <= -p


def _random_bidegree(rng: random.Random, s: int, pmin: int, pmax: int) -> tuple[int, int]:
    p = rng.randint(pmin, pmax)
    q = p - rng.randint(0, 2) if s == 0 else -p - rng.randint(0, 2)
    return p, q


def _monomial(rng: random.Random, F: Field, s: int, budget: int, unital: bool) -> _Model:
    """Factor-closed word set on 1–3 generators; the product concatenates words."""
    ngen = rng.randint(1, 3)
    gens = [(chr(ord("a") + k), _random_bidegree(rng, s, 1, 2)) for k in range(ngen)]
    words = {(g,) for g, _ in gens}
    for _ in range(rng.randint(0, 4)):
        w = tuple(rng.choice(gens)[0] for _ in range(rng.randint(2, 3)))
        closure = {w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1)}
        if len(words | closure) + (1 if unital else 0) <= budget:
            words |= closure
    bideg = dict(gens)

    def bd(w):
        return (sum(bideg[g][0] for g in w), sum(bideg[g][1] for g in w))

    ordered = sorted(words, key=lambda w: (len(w), w))
    basis = [("".join(w), *bd(w)) for w in ordered]
    mu = []
    for u in ordered:
        for v in ordered:
            if u + v in words:
                mu.append(("".join(u), "".join(v), "".join(u + v), F.one()))
    return _Model(basis, [], mu, None)


def _massey(rng: random.Random, F: Field, s: int) -> _Model:
    """a, b, c with d u = ab, d v = bc and a·v = w: a nontrivial triple Massey product."""
    a, b, c = (_random_bidegree(rng, s, 1, 1) for _ in range(3))
    add = lambda x, y: (x[0] + y[0], x[1] + y[1])  # noqa: E731
    down = (-s, s - 1)                       # minus the bidegree of the differential
    ab, bc = add(a, b), add(b, c)
    u, v = add(ab, down), add(bc, down)
    w = add(a, v)
    basis = [("A", *a), ("B", *b), ("C", *c), ("U", *u), ("V", *v), ("AB", *ab), ("BC", *bc), ("W", *w)]
    k = _nonzero(rng, F)
    d = [("U", 0, "AB", F.one()), ("V", 0, "BC", F.one())]
    mu = [("A", "B", "AB", F.one()), ("B", "C", "BC", F.one()), ("A", "V", "W", k)]
    return _Model(basis, d, mu, None)


def _pairs(rng: random.Random, s: int, count: int, max_shift: int, used: set[str], pmax: int) -> _Model:
    basis, d = [], []
    for t in range(count):
        j = rng.randint(0, max_shift)
        for _ in range(20):
            p, q = _random_bidegree(rng, s, 0, pmax)
            tp, tq = p + s + j, q + 1 - s - j
            if _in_region(tp, tq, s) and tp <= pmax:
                break
        else:
            continue
        x, y = f"x{t}", f"y{t}"
        basis += [(x, p, q), (y, tp, tq)]
        d.append((x, j, y, 1))
    return _Model(basis, d, [], None)


def _combine(F: Field, parts: list[_Model], unital: bool) -> _Model:
    basis, d, mu = [], [], []
    for part in parts:
        basis += part.basis
        d += part.d
        mu += part.mu
    if unital:
        names = [b[0] for b in basis]
        basis = [("1", 0, 0)] + basis
        mu = [("1", "1", "1", F.one())] + [("1", n, n, F.one()) for n in names] + \
             [(n, "1", n, F.one()) for n in names] + mu
    return _Model(basis, d, mu, "1" if unital else None)


def _source_family(F: Field, V: BigradedSpace, model: _Model) -> dict:
    fam: dict = {}
    for x, j, y, c in model.d:
        fam.setdefault((1, j), {}).setdefault((V.index[x],), {})[V.index[y]] = F(c)
    for x, y, o, c in model.mu:
        fam.setdefault((2, 0), {}).setdefault((V.index[x], V.index[y]), {})[V.index[o]] = F(c)
    return fam


def _invertible_block(rng: random.Random, F: Field, n: int, fixed: dict[int, int]) -> list[list]:
    """Random invertible n×n matrix; column ``c`` is the unit vector e_fixed[c] when given."""
    while True:
        M = [[F.random(rng) if rng.random() < 0.6 else F.zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            M[i][i] = F.norm(M[i][i] + (F.one() if M[i][i] == 0 else 0))
        for c, r in fixed.items():
            for i in range(n):
                M[i][c] = F.one() if i == r else F.zero()
        if Matrix(F, n, n, tuple(tuple(r) for r in M)).rank() == n:
            return M


def random_isomorphism(rng: random.Random, V: BigradedSpace, s: int, max_order: int, unit: int | None,
                       density: float = 0.3, max_arity: int = 3) -> dict:
    """Components of a strictly unital A∞-isomorphism V → V (orders ≤ max_order)."""
    F = V.field
    f: dict = {(1, 0): {}}
    for b, blk in V.blocks.items():
        fixed = {V.pos[unit]: V.pos[unit]} if unit is not None and V.bideg[unit] == b else {}
        M = _invertible_block(rng, F, len(blk), fixed)
        for c, i in enumerate(blk):
            vec = {blk[r]: M[r][c] for r in range(len(blk)) if M[r][c] != 0}
            f[(1, 0)][(i,)] = vec
    plain = [i for i in range(V.dim) if i != unit]
    for n in range(1, max_arity + 1):
        for j in range(0, max_order + 1):
            if (n, j) == (1, 0):
                continue
            shift = map_bidegree(s, n, j, 1)
            comp: dict = {}
            for key in itertools.product(plain, repeat=n):
                bp = sum(V.bideg[k][0] for k in key) + shift[0]
                bq = sum(V.bideg[k][1] for k in key) + shift[1]
                outs = [o for o in V.block((bp, bq)) if o != unit] if (bp, bq) in V.blocks else []
                if not outs or rng.random() > density:
                    continue
                comp[key] = {o: F.random(rng) for o in outs if rng.random() < 0.7}
            comp = clean_map(F, comp)
            if comp:
                f[(n, j)] = comp
    return f


def _inverse_linear(F: Field, V: BigradedSpace, f1: dict) -> dict:
    """(f_1^0)^{-1} as ``g[basis] = vector``, blockwise."""
    g = {}
    for b, blk in V.blocks.items():
        n = len(blk)
        M = Matrix(F, n, n, tuple(tuple(f1.get((blk[c],), {}).get(blk[r], F.zero()) for c in range(n))
                                  for r in range(n)))
        S = LinearSolver(M)
        for r in range(n):
            e = [F.one() if k == r else F.zero() for k in range(n)]
            x = S.solve(e)
            g[blk[r]] = {blk[k]: v for k, v in enumerate(x) if v != 0}
    return g


def pushforward(F: Field, V: BigradedSpace, s: int, src: dict, f: dict) -> dict:
    """The unique family on V making ``f`` an A∞-morphism from ``src``."""
    sup = V.bidegrees()
    bound, orders = degree_bound(sup, sup, s, 2)
    if bound is None:
        raise ValueError("support is not degree-bounded; transport would not terminate")
    ginv = _inverse_linear(F, V, f[(1, 0)])
    out: dict = {}
    for n in range(1, bound + 1):
        for j in orders.get(n, []):
            U = morphism_defect(F, src, out, f, V.degree, n, j)
            m = precompose_linear(F, U, ginv)
            if m:
                out[(n, j)] = m
    return out


def _space_for(F: Field, model: _Model) -> BigradedSpace:
    return BigradedSpace(F, model.basis)


def _build_model(rng: random.Random, F: Field, s: int, unital: bool, max_shift: int) -> _Model:
    while True:
        budget = MAX_BASIS - (1 if unital else 0)
        parts = []
        if rng.random() < 0.3 and budget >= 8:
            parts.append(_massey(rng, F, s))
        else:
            parts.append(_monomial(rng, F, s, min(budget, rng.randint(2, 6)), unital))
        size = sum(len(p.basis) for p in parts)
        used = {b[0] for p in parts for b in p.basis}
        room = (budget - size) // 2
        if room > 0:
            parts.append(_pairs(rng, s, rng.randint(0, min(room, 2)), max_shift, used, 4))
        model = _combine(F, parts, unital)
        ps = [p for _, p, _ in model.basis]
        if len(model.basis) <= MAX_BASIS and max(ps) - min(ps) <= 4:
            return model


def random_algebra(rng: random.Random, F: Field, s: int = 0, unital: bool | None = None) -> AInfinityAlgebra:
    """A valid A∞-algebra of s-th type (order-0 family), usually with higher products."""
    if unital is None:
        unital = rng.random() < 0.4
    if s > 0:
        unital = False
    model = _build_model(rng, F, s, unital, 0)
    V = _space_for(F, model)
    unit = V.index[model.unit] if model.unit else None
    f = random_isomorphism(rng, V, s, 0, unit)
    fam = pushforward(F, V, s, _source_family(F, V, model), f)
    return AInfinityAlgebra(V, s, {n: m for (n, j), m in fam.items()}, model.unit)


def random_filtered(rng: random.Random, F: Field, unital: bool | None = None) -> FilteredAInfinity:
    """A valid split filtered A∞-algebra (filtration = p)."""
    if unital is None:
        unital = rng.random() < 0.4
    model = _build_model(rng, F, 0, unital, 2)
    V = _space_for(F, model)
    unit = V.index[model.unit] if model.unit else None
    f = random_isomorphism(rng, V, 0, 2, unit)
    fam = pushforward(F, V, 0, _source_family(F, V, model), f)
    total: dict = {}
    for (n, j), m in fam.items():
        acc = total.setdefault(n, {})
        for key, vec in m.items():
            tgt = acc.setdefault(key, {})
            for o, c in vec.items():
                tgt[o] = F.norm(tgt.get(o, 0) + c)
    return FilteredAInfinity(V, total, model.unit)


def random_deformation(rng: random.Random, F: Field, unital: bool | None = None) -> FormalBigradedDeformation:
    """Rees deformation of a random filtered algebra (type 0)."""
    return rees(random_filtered(rng, F, unital))


def random_unconstrained(rng: random.Random, F: Field, s: int = 0) -> AInfinityAlgebra:
    """Bidegree-correct but otherwise random m_1, m_2, m_3: usually violates SI."""
    n = rng.randint(2, 6)
    basis = [(f"e{k}", *_random_bidegree(rng, s, 0, 2)) for k in range(n)]
    V = BigradedSpace(F, basis)
    maps = {}
    for arity in (1, 2, 3):
        shift = map_bidegree(s, arity, 0, 2)
        comp = {}
        for key in itertools.product(range(n), repeat=arity):
            bp = sum(V.bideg[k][0] for k in key) + shift[0]
            bq = sum(V.bideg[k][1] for k in key) + shift[1]
            if (bp, bq) in V.blocks and rng.random() < 0.4:
                comp[key] = {o: F.random(rng) for o in V.block((bp, bq))}
        maps[arity] = clean_map(F, comp)
    return AInfinityAlgebra(V, s, maps)


@dataclass
class Corpus:
    seed: int
    algebras: list[AInfinityAlgebra]
    deformations: list[FormalBigradedDeformation]
    filtered: list[FilteredAInfinity]
    unconstrained: list[AInfinityAlgebra]


def build_corpus(seed: int = DEFAULT_SEED, n_algebras: int = 200, n_deformations: int = 100,
                 n_filtered: int = 50, n_unconstrained: int = 50) -> Corpus:
    """Alternates 𝔽_101 and ℚ; algebras cycle through types 0, 1 and 2."""
    rng = random.Random(seed)
    fields = [Field.prime(101), Field.rationals()]
    algebras = [random_algebra(rng, fields[k % 2], s=(0, 0, 1, 2)[k % 4]) for k in range(n_algebras)]
    deformations = [random_deformation(rng, fields[k % 2]) for k in range(n_deformations)]
    filtered = [random_filtered(rng, fields[k % 2], unital=(k % 3 == 0)) for k in range(n_filtered)]
    unconstrained = [random_unconstrained(rng, fields[k % 2], s=k % 2) for k in range(n_unconstrained)]
    return Corpus(seed, algebras, deformations, filtered, unconstrained)
