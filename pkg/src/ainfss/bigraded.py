"""Finite-support bigraded spaces, homogeneous maps and cohomology with a section."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .linalg import Field, LinearSolver, Matrix, _rref_rows, nullspace, reduce_modulo

Bidegree = tuple[int, int]
# sparse vector: basis index -> nonzero scalar
Vector = dict


def add_bideg(a: Bidegree, b: Bidegree) -> Bidegree:
    return (a[0] + b[0], a[1] + b[1])


class BigradedSpace:
    """Ordered basis of named elements, each carrying a bidegree (p, q)."""

    def __init__(self, field: Field, basis: Sequence[tuple[str, int, int]]):
        self.field = field
        self.basis = tuple((str(n), int(p), int(q)) for n, p, q in basis)
        self.index: dict[str, int] = {}
        for i, (n, _, _) in enumerate(self.basis):
            if n in self.index:
                raise ValueError(f"duplicate basis name {n!r}")
            self.index[n] = i
        self.bideg: list[Bidegree] = [(p, q) for _, p, q in self.basis]
        self.degree: list[int] = [p + q for p, q in self.bideg]
        blocks: dict[Bidegree, list[int]] = {}
        self.pos: list[int] = []
        for i, b in enumerate(self.bideg):
            blk = blocks.setdefault(b, [])
            self.pos.append(len(blk))
            blk.append(i)
        self.blocks = {b: tuple(v) for b, v in sorted(blocks.items())}

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, BigradedSpace) and self.field == other.field and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"BigradedSpace({self.field.name}, {list(self.basis)})"

    def name(self, i: int) -> str:
        return self.basis[i][0]

    def bidegrees(self) -> list[Bidegree]:
        return list(self.blocks)

    def block(self, b: Bidegree) -> tuple[int, ...]:
        return self.blocks.get(b, ())

    def block_dim(self, b: Bidegree) -> int:
        return len(self.blocks.get(b, ()))

    def dims(self) -> dict[Bidegree, int]:
        return {b: len(v) for b, v in self.blocks.items()}

    def p_range(self) -> tuple[int, int] | None:
        if not self.basis:
            return None
        ps = [p for p, _ in self.bideg]
        return min(ps), max(ps)

    def p_width(self) -> int:
        r = self.p_range()
        return 0 if r is None else r[1] - r[0]

    def to_block(self, vec: Mapping[int, object], b: Bidegree) -> list:
        F = self.field
        out = [F.zero()] * self.block_dim(b)
        for i, c in vec.items():
            if self.bideg[i] != b:
                raise ValueError(f"vector component {self.name(i)} outside bidegree {b}")
            out[self.pos[i]] = c
        return out

    def from_block(self, b: Bidegree, coords: Sequence) -> Vector:
        blk = self.block(b)
        return {blk[k]: c for k, c in enumerate(coords) if c != 0}

    def vector_bidegree(self, vec: Mapping[int, object]) -> Bidegree | None:
        bs = {self.bideg[i] for i in vec}
        if len(bs) > 1:
            raise ValueError("inhomogeneous vector")
        return next(iter(bs)) if bs else None

    def format_vector(self, vec: Mapping[int, object]) -> str:
        if not vec:
            return "0"
        return " + ".join(f"{self.field.format(c)}*{self.name(i)}" for i, c in sorted(vec.items()))


def vec_add(F: Field, acc: dict, vec: Mapping[int, object], scale=1) -> None:
    for k, v in vec.items():
        x = F.norm(acc.get(k, 0) + scale * v)
        if x == 0:
            acc.pop(k, None)
        else:
            acc[k] = x


class BigradedMap:
    """Homogeneous linear map given by one matrix per source bidegree."""

    def __init__(self, source: BigradedSpace, target: BigradedSpace, bidegree: Bidegree,
                 blocks: Mapping[Bidegree, Matrix] | None = None):
        if source.field != target.field:
            raise ValueError("source and target over different fields")
        self.source, self.target, self.bidegree = source, target, tuple(bidegree)
        F = source.field
        self.blocks: dict[Bidegree, Matrix] = {}
        for b in source.blocks:
            tb = add_bideg(b, self.bidegree)
            m = (blocks or {}).get(b)
            shape = (target.block_dim(tb), source.block_dim(b))
            if m is None:
                m = Matrix.zeros(F, *shape)
            elif m.shape != shape:
                raise ValueError(f"block at {b} has shape {m.shape}, expected {shape}")
            self.blocks[b] = m
        for b in (blocks or {}):
            if b not in source.blocks and not blocks[b].is_zero():
                raise ValueError(f"block declared at empty source bidegree {b}")

    @classmethod
    def from_sparse(cls, source: BigradedSpace, target: BigradedSpace, bidegree: Bidegree,
                    images: Mapping[int, Mapping[int, object]]) -> "BigradedMap":
        """Build from ``images[source index] = sparse target vector``; checks homogeneity."""
        F = source.field
        rows: dict[Bidegree, list[list]] = {}
        for b, blk in source.blocks.items():
            tb = add_bideg(b, bidegree)
            rows[b] = [[F.zero()] * len(blk) for _ in range(target.block_dim(tb))]
        for i, vec in images.items():
            b = source.bideg[i]
            tb = add_bideg(b, bidegree)
            for j, c in vec.items():
                if c == 0:
                    continue
                if target.bideg[j] != tb:
                    raise ValueError(
                        f"bidegree violation: {source.name(i)}{b} -> {target.name(j)}{target.bideg[j]}"
                        f" is not of bidegree {tuple(bidegree)}")
                rows[b][target.pos[j]][source.pos[i]] = F(c)
        blocks = {b: Matrix(F, len(r), source.block_dim(b), tuple(tuple(x) for x in r)) for b, r in rows.items()}
        return cls(source, target, bidegree, blocks)

    @classmethod
    def zero(cls, source, target, bidegree) -> "BigradedMap":
        return cls(source, target, bidegree)

    def apply(self, vec: Mapping[int, object]) -> Vector:
        F = self.source.field
        out: dict = {}
        by_b: dict[Bidegree, dict] = {}
        for i, c in vec.items():
            by_b.setdefault(self.source.bideg[i], {})[i] = c
        for b, part in by_b.items():
            coords = self.source.to_block(part, b)
            img = self.blocks[b].apply(coords)
            vec_add(F, out, self.target.from_block(add_bideg(b, self.bidegree), img))
        return out

    def image_of_basis(self, i: int) -> Vector:
        return self.apply({i: self.source.field.one()})

    def to_sparse(self) -> dict[int, Vector]:
        out = {}
        for i in range(self.source.dim):
            v = self.image_of_basis(i)
            if v:
                out[i] = v
        return out

    def compose(self, first: "BigradedMap") -> "BigradedMap":
        """``self ∘ first``."""
        if first.target != self.source:
            raise ValueError("composition of maps with mismatched spaces")
        bideg = add_bideg(first.bidegree, self.bidegree)
        blocks = {}
        for b, m in first.blocks.items():
            mid = add_bideg(b, first.bidegree)
            if mid in self.blocks:
                blocks[b] = self.blocks[mid] @ m
        return BigradedMap(first.source, self.target, bideg, blocks)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())

    def rank_at(self, b: Bidegree) -> int:
        return self.blocks[b].rank() if b in self.blocks else 0


def check_square_zero(d: BigradedMap) -> list[Bidegree]:
    """Source bidegrees where the block of ``d ∘ d`` is nonzero."""
    if d.source != d.target:
        raise ValueError("check_square_zero needs an endomorphism")
    if sum(d.bidegree) != 1:
        raise ValueError(f"differential must have total degree 1, got bidegree {d.bidegree}")
    dd = d.compose(d)
    return [b for b, m in dd.blocks.items() if not m.is_zero()]


class NotADifferential(ValueError):
    def __init__(self, report):
        super().__init__(f"map does not square to zero at bidegrees {report}")
        self.report = report


@dataclass
class CohomologyData:
    ambient: BigradedSpace
    d: BigradedMap
    H: BigradedSpace
    kernel: dict[Bidegree, list[list]]      # block coordinates
    image: dict[Bidegree, list[list]]       # reduced echelon rows, block coordinates
    section_vectors: dict[int, Vector]      # H index -> representative cocycle
    _solvers: dict = dc_field(default_factory=dict, repr=False)

    @property
    def section(self) -> BigradedMap:
        return BigradedMap.from_sparse(self.H, self.ambient, (0, 0), self.section_vectors)

    def _solver(self, b: Bidegree):
        if b not in self._solvers:
            F = self.ambient.field
            cols = list(self.image.get(b, [])) + [
                self.ambient.to_block(self.section_vectors[h], b) for h in self.H.block(b)]
            n = self.ambient.block_dim(b)
            A = Matrix(F, n, len(cols), tuple(tuple(c[r] for c in cols) for r in range(n)))
            self._solvers[b] = (LinearSolver(A), len(self.image.get(b, [])))
        return self._solvers[b]

    def project(self, vec: Mapping[int, object]) -> Vector:
        """π on a cocycle: coordinates of its class in the H basis."""
        if not vec:
            return {}
        out: dict = {}
        F = self.ambient.field
        by_b: dict[Bidegree, dict] = {}
        for i, c in vec.items():
            by_b.setdefault(self.ambient.bideg[i], {})[i] = c
        for b, part in by_b.items():
            solver, nim = self._solver(b)
            x = solver.solve(self.ambient.to_block(part, b))
            if x is None:
                raise ValueError(f"projection of a non-cocycle at bidegree {b}")
            for k, h in enumerate(self.H.block(b)):
                if x[nim + k] != 0:
                    out[h] = F.norm(x[nim + k])
        return out

    def is_exact(self, vec: Mapping[int, object]) -> bool:
        return not self.project(vec)

    def dims(self) -> dict[Bidegree, int]:
        return self.H.dims()


def cohomology_with_section(d: BigradedMap, unit: int | None = None,
                            prefix: str = "h") -> CohomologyData:
    """Kernel, image and a canonical complement of the image inside the kernel.

    Representatives are the reduced echelon basis of the kernel modulo the
    image's pivot coordinates.  When ``unit`` is given (and is a nonexact
    cocycle) it is kept verbatim as the first representative of its bidegree.
    """
    report = check_square_zero(d)
    if report:
        raise NotADifferential(report)
    V = d.source
    F = V.field
    kernel, image, reps_all = {}, {}, {}
    basis_H: list[tuple[str, int, int]] = []
    section: dict[int, Vector] = {}
    for b, blk in V.blocks.items():
        n = len(blk)
        K = nullspace(d.blocks[b])
        src = (b[0] - d.bidegree[0], b[1] - d.bidegree[1])
        if src in d.blocks:
            Min = d.blocks[src]
            im_rows, im_piv = _rref_rows(F, [list(r) for r in Min.T.rows], n)
            im_rows = im_rows[: len(im_piv)]
        else:
            im_rows, im_piv = [], []
        kernel[b], image[b] = K, im_rows
        reps: list[list] = []
        if unit is not None and V.bideg[unit] == b:
            u = [F.zero()] * n
            u[V.pos[unit]] = F.one()
            if any(x != 0 for x in reduce_modulo(F, u, im_rows, im_piv)):
                reps.append(u)
        residues = [reduce_modulo(F, v, im_rows, im_piv) for v in K]
        res_rows, res_piv = _rref_rows(F, residues, n)
        candidates = res_rows[: len(res_piv)]
        if reps:
            # keep the unit, then greedily add canonical rows independent of it
            span_rows = [list(r) for r in im_rows] + [list(reps[0])]
            span_rows, span_piv = _rref_rows(F, span_rows, n)
            span_rows = span_rows[: len(span_piv)]
            for c in candidates:
                r = reduce_modulo(F, c, span_rows, span_piv)
                if any(x != 0 for x in r):
                    reps.append(c)
                    span_rows, span_piv = _rref_rows(F, span_rows + [list(c)], n)
                    span_rows = span_rows[: len(span_piv)]
        else:
            reps = candidates
        reps_all[b] = reps
        for k, r in enumerate(reps):
            basis_H.append((f"{prefix}{b[0]}_{b[1]}_{k}", b[0], b[1]))
    H = BigradedSpace(F, basis_H)
    for b, reps in reps_all.items():
        for k, r in enumerate(reps):
            section[H.block(b)[k]] = V.from_block(b, r)
    return CohomologyData(V, d, H, kernel, image, section)
