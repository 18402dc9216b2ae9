"""Dense exact linear algebra over a :class:`~hyperkoszul.fields.Field`.

Matrices are small (a few dozen rows) so everything is plain lists of field
elements. Vectors are lists; a matrix acts on column vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .fields import Field

Vector = list


class Matrix:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = field.zero
            rows = [[z] * ncols for _ in range(nrows)]
        self.rows = rows

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, field: Field, nrows: int, columns: Sequence[Sequence]) -> "Matrix":
        m = cls(field, nrows, len(columns))
        for j, col in enumerate(columns):
            for i in range(nrows):
                m.rows[i][j] = col[i]
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> Vector:
        return [r[j] for r in self.rows]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows,
                      [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def apply(self, v: Sequence) -> Vector:
        F = self.field
        out = []
        for r in self.rows:
            acc = F.zero
            for a, b in zip(r, v):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        out = Matrix(F, self.nrows, other.ncols)
        for i, r in enumerate(self.rows):
            orow = out.rows[i]
            for k, a in enumerate(r):
                if not a:
                    continue
                brow = other.rows[k]
                for j, b in enumerate(brow):
                    if b:
                        orow[j] = F.add(orow[j], F.mul(a, b))
        return out

    def _elementwise(self, other: "Matrix", op) -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(self.field, self.nrows, self.ncols,
                      [[op(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._elementwise(other, self.field.add)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._elementwise(other, self.field.sub)

    def scaled(self, c) -> "Matrix":
        F = self.field
        return Matrix(F, self.nrows, self.ncols, [[F.mul(c, a) for a in r] for r in self.rows])

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.nrows, self.ncols, [list(r) for r in self.rows])

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.rows})"

    def rank(self) -> int:
        return len(rref(self.rows, self.field, self.ncols)[1])

    def nullspace(self) -> list[Vector]:
        return nullspace(self)

    def to_json(self):
        return [[self.field.to_json(a) for a in r] for r in self.rows]


def block_diag(field: Field, *blocks: Matrix) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    out = Matrix(field, nr, nc)
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            out.rows[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return out


def vstack(field: Field, ncols: int, *blocks: Matrix) -> Matrix:
    rows = [list(r) for b in blocks for r in b.rows]
    return Matrix(field, len(rows), ncols, rows)


def hstack(field: Field, nrows: int, *blocks: Matrix) -> Matrix:
    rows = [[a for b in blocks for a in b.rows[i]] for i in range(nrows)]
    return Matrix(field, nrows, sum(b.ncols for b in blocks), rows)


def rref(vectors: Sequence[Sequence], field: Field, ncoords: int) -> tuple[list[Vector], list[int]]:
    """Reduced row-echelon form of the span of ``vectors``.

    Returns the non-zero reduced rows (each pivot normalised to 1) and their
    pivot coordinates, pivots strictly increasing.
    """
    F = field
    rows = [list(v) for v in vectors]
    pivots: list[int] = []
    r = 0
    for c in range(ncoords):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, a) for a in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(a, F.mul(f, b)) if b else a for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_of(vectors: Sequence[Sequence], field: Field, ncoords: int) -> int:
    return len(rref(vectors, field, ncoords)[1])


def nullspace(A: Matrix) -> list[Vector]:
    """Basis of {x : A x = 0}, one vector per free column, in reduced form."""
    F = A.field
    rows, pivots = rref(A.rows, F, A.ncols)
    pivset = set(pivots)
    basis = []
    for free in range(A.ncols):
        if free in pivset:
            continue
        v = [F.zero] * A.ncols
        v[free] = F.one
        for row, p in zip(rows, pivots):
            if row[free]:
                v[p] = F.neg(row[free])
        basis.append(v)
    return basis


def reduce_against(v: Sequence, rows: Sequence[Sequence], pivots: Sequence[int], field: Field) -> Vector:
    """Subtract multiples of reduced ``rows`` to clear their pivot coordinates."""
    F = field
    out = list(v)
    for row, p in zip(rows, pivots):
        c = out[p]
        if c:
            out = [F.sub(a, F.mul(c, b)) if b else a for a, b in zip(out, row)]
    return out


def solve_combination(basis: Sequence[Sequence], target: Sequence, field: Field):
    """Coefficients c with sum_i c_i basis[i] == target, or None.

    ``basis`` must be linearly independent for the answer to be unique.
    """
    F = field
    n = len(target)
    k = len(basis)
    # augmented system: columns are basis vectors, rhs is target
    A = Matrix.from_columns(F, n, list(basis) + [list(target)])
    rows, pivots = rref(A.rows, F, k + 1)
    if pivots and pivots[-1] == k:
        return None
    coeffs = [F.zero] * k
    for row, p in zip(rows, pivots):
        coeffs[p] = row[k]
    return coeffs


def solve(A: Matrix, b: Sequence):
    """Some x with A x = b (free variables set to zero), or None."""
    F = A.field
    aug = Matrix(F, A.nrows, A.ncols + 1, [list(r) + [bi] for r, bi in zip(A.rows, b)])
    rows, pivots = rref(aug.rows, F, A.ncols + 1)
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [F.zero] * A.ncols
    for row, p in zip(rows, pivots):
        x[p] = row[A.ncols]
    return x


@dataclass
class Subquotient:
    """Ker/Im data at one node of a complex, with a deterministic quotient basis.

    ``kernel`` and ``image`` are reduced echelon bases of the cycles and the
    boundaries; ``representatives`` are kernel vectors reduced modulo the
    image and then put in reduced echelon form themselves.
    """

    field: Field
    dim: int
    kernel: list[Vector]
    image: list[Vector]
    image_pivots: list[int]
    representatives: list[Vector]
    _stack: list[Vector] = dc_field(default_factory=list, repr=False)

    @classmethod
    def build(cls, field: Field, dim: int, outgoing: Matrix | None, incoming: Matrix | None) -> "Subquotient":
        F = field
        if outgoing is None or outgoing.nrows == 0:
            ker = [[F.one if i == j else F.zero for i in range(dim)] for j in range(dim)]
        else:
            ker = rref(nullspace(outgoing), F, dim)[0]
        if incoming is None or incoming.ncols == 0:
            img, ipiv = [], []
        else:
            img, ipiv = rref(incoming.columns(), F, dim)
        reduced = [reduce_against(z, img, ipiv, F) for z in ker]
        reps = rref(reduced, F, dim)[0]
        return cls(F, dim, ker, img, ipiv, reps, reps + img)

    @property
    def betti(self) -> int:
        return len(self.representatives)

    @property
    def defect(self) -> int:
        """nullity(outgoing) - rank(incoming); zero iff exact here."""
        return len(self.kernel) - len(self.image)

    def contains_cycle(self, v: Sequence) -> bool:
        if not self.kernel:
            return not any(v)
        krows, kpiv = self.kernel, _pivots_of(self.kernel)
        return not any(reduce_against(v, krows, kpiv, self.field))

    def class_of(self, v: Sequence) -> Vector:
        """Coordinates of the homology class of cycle ``v`` in ``representatives``."""
        if self.dim == 0:
            return []
        coeffs = solve_combination(self._stack, v, self.field)
        if coeffs is None:
            raise ValueError("vector is not a cycle at this node")
        return coeffs[: self.betti]


def _pivots_of(rows: Sequence[Sequence]) -> list[int]:
    out = []
    for r in rows:
        for i, a in enumerate(r):
            if a:
                out.append(i)
                break
    return out
