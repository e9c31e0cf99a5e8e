"""Sparse multilinear maps and the two composition patterns behind every identity.

A ``SparseMap`` sends an input tuple of basis indices to a sparse output vector;
absent keys are zero.  A family of maps is keyed by ``(arity, order)`` where
``order`` is the power of the deformation parameter (always 0 for plain
algebras and morphisms).

Two compositions appear in the Stasheff identities:

* insertion ``outer_u ∘ (id^r ⊗ inner_s ⊗ id^t)`` with sign
  ``(-1)^(r + s*t)`` times the Koszul sign of ``inner_s`` passing the first
  ``r`` inputs;
* tensor ``outer_q ∘ (inner_{i_1} ⊗ ... ⊗ inner_{i_q})`` with sign
  ``(-1)^w``, ``w = Σ_l (q-l)(i_l-1)``, times the Koszul signs of the blocks.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import Field

SparseMap = dict  # tuple[int, ...] -> dict[int, scalar]
Family = dict     # (arity, order) -> SparseMap


def clean_map(F: Field, m: Mapping) -> SparseMap:
    out = {}
    for key, vec in m.items():
        v = {k: F.norm(c) for k, c in vec.items()}
        v = {k: c for k, c in v.items() if c != 0}
        if v:
            out[tuple(key)] = dict(sorted(v.items()))
    return dict(sorted(out.items()))


def clean_family(F: Field, fam: Mapping) -> Family:
    out = {}
    for nj, m in fam.items():
        m = clean_map(F, m)
        if m:
            out[tuple(nj)] = m
    return dict(sorted(out.items()))


def add_into(F: Field, acc: SparseMap, m: Mapping, scale=1) -> None:
    for key, vec in m.items():
        tgt = acc.setdefault(key, {})
        for o, c in vec.items():
            x = F.norm(tgt.get(o, 0) + scale * c)
            if x == 0:
                tgt.pop(o, None)
            else:
                tgt[o] = x
        if not tgt:
            del acc[key]


def maps_equal(F: Field, a: Mapping, b: Mapping) -> bool:
    return clean_map(F, a) == clean_map(F, b)


def families_equal(F: Field, a: Mapping, b: Mapping) -> bool:
    return clean_family(F, a) == clean_family(F, b)


def _index_by_output(fam: Mapping) -> dict:
    """(arity, order) -> output index -> [(input tuple, coefficient)]."""
    idx: dict = {}
    for nj, m in fam.items():
        d = idx.setdefault(nj, defaultdict(list))
        for key, vec in m.items():
            for o, c in vec.items():
                d[o].append((key, c))
    return idx


def _reverse(fam: Mapping) -> dict:
    """output index -> [(arity, order, input tuple, coefficient)]."""
    rev: dict = defaultdict(list)
    for (n, j), m in sorted(fam.items()):
        for key, vec in m.items():
            for o, c in vec.items():
                rev[o].append((n, j, key, c))
    return rev


def stasheff_sign(r: int, s: int, t: int, pre: int) -> int:
    """``(-1)^(r+st)`` times the Koszul sign of a degree ``2-s`` map passing degree ``pre``."""
    return -1 if (r + s * t + s * pre) % 2 else 1


def insert_compose(F: Field, outer: Mapping, inner: Mapping, degrees: Sequence[int], n: int, order: int,
                   sign: Callable[[int, int, int, int], int] = stasheff_sign,
                   inner_index: dict | None = None) -> SparseMap:
    """Σ_{r+s+t=n} sign · outer_{r+1+t}^{j1} ∘ (id^r ⊗ inner_s^{j2} ⊗ id^t), j1+j2 = order.

    ``degrees`` are the total degrees of the basis that the inputs live in;
    ``sign(r, s, t, pre)`` receives the summed degree ``pre`` of the first r inputs.
    """
    idx = inner_index if inner_index is not None else _index_by_output(inner)
    acc: dict = {}
    for (u, j1), m in outer.items():
        s = n - u + 1
        j2 = order - j1
        if s < 1 or j2 < 0:
            continue
        by_out = idx.get((s, j2))
        if not by_out:
            continue
        for key, vec in m.items():
            pre = 0
            for r in range(u):
                hits = by_out.get(key[r])
                if hits:
                    t = u - 1 - r
                    sg = sign(r, s, t, pre)
                    head, tail = key[:r], key[r + 1:]
                    for ikey, c in hits:
                        newkey = head + ikey + tail
                        tgt = acc.setdefault(newkey, {})
                        f = sg * c
                        for o, v in vec.items():
                            tgt[o] = tgt.get(o, 0) + f * v
                pre += degrees[key[r]]
    return clean_map(F, acc)


def tensor_compose(F: Field, outer: Mapping, inner: Mapping, degrees: Sequence[int], n: int, order: int,
                   inner_rev: dict | None = None, skip: Callable[[int, int, tuple], bool] | None = None
                   ) -> SparseMap:
    """Σ_q Σ (-1)^w outer_q^{j0} ∘ (inner_{i1}^{j1} ⊗ ... ⊗ inner_{iq}^{jq}).

    Arities sum to ``n`` and orders to ``order``.  ``degrees`` are those of the
    inputs of ``inner``; block l has degree ``1 - i_l``.  ``skip(q, j0, choice)``
    may exclude individual terms.
    """
    rev = inner_rev if inner_rev is not None else _reverse(inner)
    acc: dict = {}
    for (q, j0), m in outer.items():
        if q > n or j0 > order:
            continue
        for key, vec in m.items():
            options = [rev.get(k, ()) for k in key]
            if any(not o for o in options):
                continue
            # depth-first over slot choices
            stack = [(0, 0, 0, 0, 0, (), 1, ())]
            while stack:
                slot, arity, ordr, pre, wsum, inputs, coef, choice = stack.pop()
                if slot == q:
                    if arity != n or ordr != order - j0:
                        continue
                    if skip is not None and skip(q, j0, choice):
                        continue
                    sg = -1 if wsum % 2 else 1
                    tgt = acc.setdefault(inputs, {})
                    f = sg * coef
                    for o, v in vec.items():
                        tgt[o] = tgt.get(o, 0) + f * v
                    continue
                remaining = q - slot - 1
                for (i, j, ikey, c) in options[slot]:
                    if arity + i + remaining > n or ordr + j > order - j0:
                        continue
                    koszul = ((1 - i) * pre) % 2
                    w = (q - slot - 1) * (i - 1)
                    dsum = sum(degrees[x] for x in ikey)
                    stack.append((slot + 1, arity + i, ordr + j, pre + dsum, wsum + koszul + w,
                                  inputs + ikey, coef * c, choice + ((i, j),)))
    return clean_map(F, acc)


def stasheff_defect(F: Field, fam: Mapping, degrees: Sequence[int], n: int, order: int = 0) -> SparseMap:
    return insert_compose(F, fam, fam, degrees, n, order)


def morphism_defect(F: Field, src: Mapping, tgt: Mapping, f: Mapping, src_degrees: Sequence[int],
                    n: int, order: int = 0) -> SparseMap:
    """LHS − RHS of the morphism identity at arity n and the given order."""
    lhs = insert_compose(F, f, src, src_degrees, n, order)
    rhs = tensor_compose(F, tgt, f, src_degrees, n, order)
    add_into(F, lhs, rhs, -1)
    return clean_map(F, lhs)


def to_bar(F: Field, fam: Mapping, degrees: Sequence[int]) -> Family:
    """Maps b_n = -s ∘ m_n ∘ (s^{⊗n})^{-1} on the shifted basis (same indices).

    On shifted basis elements: b_n(sa_1..sa_n) = -(-1)^{Σ_i (n-i)|a_i|} s m_n(a_1..a_n).
    """
    out = {}
    for (n, j), m in fam.items():
        bm = {}
        for key, vec in m.items():
            e = sum((n - 1 - i) * degrees[k] for i, k in enumerate(key))
            sg = 1 if e % 2 else -1
            bm[key] = {o: F.norm(sg * c) for o, c in vec.items()}
        out[(n, j)] = bm
    return out


def bar_square(F: Field, bfam: Mapping, degrees: Sequence[int], n: int, order: int = 0) -> SparseMap:
    """Component of the coderivation square: Σ b_{r+1+t} ∘ (id^r ⊗ b_s ⊗ id^t).

    The only signs are Koszul signs of the degree-one map b_s passing shifted
    elements (shifted degree = degree − 1).
    """
    def sign(r, s, t, pre):
        return -1 if (pre - r) % 2 else 1
    return insert_compose(F, bfam, bfam, degrees, n, order, sign=sign)


def precompose_linear(F: Field, m: Mapping, g: Mapping[int, Mapping[int, object]]) -> SparseMap:
    """m ∘ (g ⊗ ... ⊗ g) for a linear map ``g`` given by ``g[basis] = vector``."""
    # columns of g: for each input index T_l, which K_l have g[K_l][T_l] != 0
    cols: dict = defaultdict(list)
    for k, vec in g.items():
        for t, c in vec.items():
            cols[t].append((k, c))
    acc: dict = {}
    for key, vec in m.items():
        partial = [((), 1)]
        for t in key:
            partial = [(ks + (k,), coef * c) for ks, coef in partial for k, c in cols.get(t, ())]
            if not partial:
                break
        for ks, coef in partial:
            tgt = acc.setdefault(ks, {})
            for o, v in vec.items():
                tgt[o] = tgt.get(o, 0) + coef * v
    return clean_map(F, acc)


def postcompose_linear(F: Field, m: Mapping, g: Mapping[int, Mapping[int, object]]) -> SparseMap:
    """g ∘ m for a linear map g."""
    acc: dict = {}
    for key, vec in m.items():
        tgt = acc.setdefault(key, {})
        for o, v in vec.items():
            for o2, c in g.get(o, {}).items():
                tgt[o2] = tgt.get(o2, 0) + v * c
    return clean_map(F, acc)


def format_map_entry(space_in, space_out, key: tuple, vec: Mapping) -> str:
    ins = ",".join(space_in.name(k) for k in key)
    return f"({ins}) -> {space_out.format_vector(vec)}"


# --- degree analysis -------------------------------------------------------------

def _reduced(support: Iterable[tuple[int, int]], s: int) -> list[tuple[int, int]]:
    """(p - s, total degree - 1) for each input bidegree."""
    return sorted({(p - s, p + q - 1) for p, q in support})


def _functional(vs: list[tuple[int, int]]) -> tuple[int, int, int] | None:
    """λ ≥ 0, μ with λa + μb ≥ 1 on every vector, minimizing nothing in particular."""
    best = None
    for lam in range(0, 7):
        for mu in range(-6, 7):
            vals = [lam * a + mu * b for a, b in vs]
            if vals and min(vals) >= 1:
                cand = (min(vals), lam, mu)
                if best is None or cand[0] > best[0] or (cand[0] == best[0] and (lam, abs(mu)) < (best[1], abs(best[2]))):
                    best = cand
    if best is None:
        return None
    return best[1], best[2], best[0]


def degree_bound(src: Iterable[tuple[int, int]], tgt: Iterable[tuple[int, int]], s: int, k: int,
                 n_min: int = 1) -> tuple[int | None, dict[int, list[int]]]:
    """Largest arity admitting a homogeneous entry, plus the admissible orders per arity.

    Entries of a map of arity n and order j with ``k`` fixed by the kind of map
    (2 for structure maps, 1 for morphisms, 3 for Stasheff defects) send inputs
    of bidegrees b_1..b_n to Σ(b_i − c) + k·c + j(1,−1), c = (s, 1−s).
    Returns ``(None, {})`` when arities are not degree-bounded.
    """
    src = sorted(set(src))
    tgt = sorted(set(tgt))
    if not src or not tgt:
        return 0, {}
    vs = _reduced(src, s)
    fn = _functional(vs)
    if fn is None:
        return None, {}
    lam, mu, delta = fn
    # targets in (a, b) coordinates: need Σb = deg_out - k and Σa ≤ p_out - k*s
    targets = [(P - k * s, P + Q - k) for P, Q in tgt]
    cap = max(lam * ta + mu * tb for ta, tb in targets)
    n_limit = max(cap // delta, 0) + 1
    sums = {(0, 0)}
    best = 0
    orders: dict[int, list[int]] = {}
    for n in range(1, n_limit + 1):
        sums = {(x + a, y + b) for x, y in sums for a, b in vs if lam * (x + a) + mu * (y + b) <= cap}
        if not sums:
            break
        js = set()
        for ta, tb in targets:
            for x, y in sums:
                if y == tb and x <= ta:
                    js.add(ta - x)
        if js and n >= n_min:
            best = n
            orders[n] = sorted(js)
    return best, orders


def fallback_cap(supports: Iterable[tuple[int, int]]) -> int:
    degs = [p + q for p, q in supports]
    return (max(degs) - min(degs)) + 3 if degs else 1


def admissible_orders(src: Iterable[tuple[int, int]], tgt: Iterable[tuple[int, int]], s: int, k: int,
                      n_max: int) -> dict[int, list[int]]:
    """For each arity n ≤ n_max, the orders j ≥ 0 admitting a homogeneous entry (see degree_bound)."""
    vs = _reduced(sorted(set(src)), s)
    targets = [(P - k * s, P + Q - k) for P, Q in sorted(set(tgt))]
    out: dict[int, list[int]] = {}
    sums = {(0, 0)}
    for n in range(1, n_max + 1):
        sums = {(x + a, y + b) for x, y in sums for a, b in vs}
        js = {ta - x for ta, tb in targets for x, y in sums if y == tb and x <= ta}
        if js:
            out[n] = sorted(js)
    return out
