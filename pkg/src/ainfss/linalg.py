"""Exact scalars and leftmost-pivot Gaussian elimination.

Scalars are plain Python values: ``Fraction`` over the rationals and ``int``
in ``range(p)`` over a prime field.  Every stored value is normalized, so
equality and zero tests are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """Either the rationals (``p is None``) or the prime field of order ``p``."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Field(Q)" if self.p is None else f"Field(GF({self.p}))"

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    @classmethod
    def from_name(cls, name: str) -> "Field":
        if name == "Q":
            return cls.rationals()
        if name.startswith("GF(") and name.endswith(")"):
            body = name[3:-1]
            if body.isdigit() and str(int(body)) == body:
                return cls.prime(int(body))
        raise ValueError(f"unknown field {name!r}")

    # arithmetic -----------------------------------------------------------
    def __call__(self, x) -> Fraction | int:
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def norm(self, x):
        """Normalize the result of raw ``+ - *`` arithmetic on field values."""
        return x if self.p is None else x % self.p

    def inv(self, x):
        if self.p is None:
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(x)
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def neg(self, x):
        return self.norm(-x)

    # text -----------------------------------------------------------------
    def format(self, x) -> str:
        return str(Fraction(x)) if self.p is None else str(x % self.p)

    def parse(self, text: str):
        """Parse a canonical coefficient string; non-canonical forms are errors."""
        if self.p is None:
            try:
                value = Fraction(text)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"bad rational coefficient {text!r}") from None
            if str(value) != text:
                raise ValueError(f"rational coefficient {text!r} is not in reduced form a/b")
            return value
        if not text.isdigit() or str(int(text)) != text or int(text) >= self.p:
            raise ValueError(f"coefficient {text!r} is not a canonical residue mod {self.p}")
        return int(text)

    def random(self, rng, small: bool = True):
        if self.p is None:
            num = rng.randint(-3, 3) if small else rng.randint(-50, 50)
            den = rng.choice((1, 1, 1, 2, 3)) if small else rng.randint(1, 20)
            return Fraction(num, den)
        return rng.randrange(self.p)


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    rows: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError("entry count inconsistent with shape")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [tuple(field(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        return cls(field, len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero()
        return cls(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows,
                      tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        cols = other.T.rows
        out = tuple(tuple(F.norm(sum(a * b for a, b in zip(r, c))) for c in cols) for r in self.rows)
        return Matrix(F, self.nrows, other.ncols, out)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for {self.shape} matrix")
        F = self.field
        return [F.norm(sum(a * b for a, b in zip(r, v))) for r in self.rows]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def rank(self) -> int:
        return len(rref(self)[1])


def _rref_rows(F: Field, rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place reduced row echelon form; pivots are searched in the first ``ncols``
    columns but row operations act on the whole (possibly augmented) row."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    width = len(rows[0]) if rows else ncols
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r]
        inv = F.inv(piv[c])
        if inv != 1:
            for k in range(c, width):
                piv[k] = F.norm(piv[k] * inv)
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[c]
                if f != 0:
                    for k in range(c, width):
                        if piv[k] != 0:
                            row[k] = F.norm(row[k] - f * piv[k])
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    rows = [list(r) for r in M.rows]
    rows, pivots = _rref_rows(M.field, rows, M.ncols)
    return Matrix(M.field, M.nrows, M.ncols, tuple(tuple(r) for r in rows)), pivots


def rank_of_vectors(F: Field, vectors: Iterable[Sequence], n: int) -> int:
    rows = [list(v) for v in vectors]
    return len(_rref_rows(F, rows, n)[1])


def row_basis(F: Field, vectors: Iterable[Sequence], n: int) -> list[list]:
    """Nonzero rows of the reduced echelon form: a canonical basis of the span."""
    rows = [list(v) for v in vectors]
    rows, pivots = _rref_rows(F, rows, n)
    return rows[: len(pivots)]


def nullspace(M: Matrix) -> list[list]:
    """Kernel basis: one vector per free column, free coordinate set to one."""
    F = M.field
    R, pivots = rref(M)
    pivset = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivset:
            continue
        v = [F.zero()] * M.ncols
        v[free] = F.one()
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(R.rows[i][free])
        basis.append(v)
    return basis


def solve_linear(A: Matrix, b: Sequence) -> list | None:
    """Particular solution of ``A x = b`` with every free coordinate zero, or None."""
    if len(b) != A.nrows:
        raise ValueError(f"right-hand side of length {len(b)} for {A.shape} matrix")
    return LinearSolver(A).solve(b)


class LinearSolver:
    """Row-reduces ``A`` once; ``solve`` then matches ``solve_linear`` for any ``b``."""

    def __init__(self, A: Matrix):
        F = A.field
        self.field = F
        self.nrows, self.ncols = A.nrows, A.ncols
        m = A.nrows
        aug = [list(A.rows[i]) + [F.one() if k == i else F.zero() for k in range(m)] for i in range(m)]
        aug, pivots = _rref_rows(F, aug, A.ncols)
        self.pivots = pivots
        self.rank = len(pivots)
        # rows of the transform: R = T A
        self._transform = [row[A.ncols:] for row in aug]

    def solve(self, b: Sequence) -> list | None:
        F = self.field
        if len(b) != self.nrows:
            raise ValueError(f"right-hand side of length {len(b)} for {self.nrows}x{self.ncols} system")
        tb = [F.norm(sum(t * x for t, x in zip(row, b) if x != 0)) for row in self._transform]
        if any(x != 0 for x in tb[self.rank:]):
            return None
        x = [F.zero()] * self.ncols
        for i, c in enumerate(self.pivots):
            x[c] = tb[i]
        return x


def split_subspace(F: Field, S: Sequence[Sequence], n: int) -> list[list]:
    """Standard basis vectors at the non-pivot coordinates of rref(S)."""
    if any(len(v) != n for v in S):
        raise ValueError("vectors of the wrong length")
    rows, pivots = _rref_rows(F, [list(v) for v in S], n)
    if len(pivots) != len(S):
        raise ValueError("split_subspace: the given vectors are linearly dependent")
    pivset = set(pivots)
    out = []
    for c in range(n):
        if c not in pivset:
            v = [F.zero()] * n
            v[c] = F.one()
            out.append(v)
    return out


def reduce_modulo(F: Field, v: Sequence, echelon: Sequence[Sequence], pivots: Sequence[int]) -> list:
    """Remainder of ``v`` after clearing the pivot coordinates of a reduced echelon basis."""
    v = list(v)
    for row, c in zip(echelon, pivots):
        f = v[c]
        if f != 0:
            for k in range(len(v)):
                if row[k] != 0:
                    v[k] = F.norm(v[k] - f * row[k])
    return v
