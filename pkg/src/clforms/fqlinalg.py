"""Exact dense linear algebra over F_q.

Matrices are stored row-major as flat tuples of field elements.  A
subspace is kept as the reduced row echelon form of a spanning set with
zero rows dropped, one basis vector per row; since RREF is unique this
makes equality, hashing and membership purely syntactic.
"""

from __future__ import annotations

from .errors import AmbientMismatch, ShapeMismatch
from .gf import FqField


class FqMatrix:
    """Immutable rows x cols matrix over an FqField."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FqField, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ShapeMismatch(f"need {rows * cols} entries, got {len(entries)}")
        if any(not (0 <= x < field.q) for x in entries):
            raise ShapeMismatch("entry outside [0, q)")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, field, row_list):
        row_list = [tuple(r) for r in row_list]
        cols = len(row_list[0]) if row_list else 0
        return cls(field, len(row_list), cols, [x for r in row_list for x in r])

    def at(self, r, c):
        return self.entries[r * self.cols + c]

    def row(self, r):
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def row_list(self):
        return [list(self.row(r)) for r in range(self.rows)]

    def transpose(self):
        return FqMatrix(self.field, self.cols, self.rows,
                        tuple(self.at(r, c) for c in range(self.cols) for r in range(self.rows)))

    def add(self, other):
        self._check_shape(other)
        f = self.field
        return FqMatrix(f, self.rows, self.cols,
                        tuple(f.add(a, b) for a, b in zip(self.entries, other.entries)))

    def sub(self, other):
        self._check_shape(other)
        f = self.field
        return FqMatrix(f, self.rows, self.cols,
                        tuple(f.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def mul(self, other):
        if self.cols != other.rows or self.field.q != other.field.q:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        out = []
        for r in range(self.rows):
            rr = self.row(r)
            for c in range(other.cols):
                acc = 0
                for k, a in enumerate(rr):
                    if a:
                        acc = f.add(acc, f.mul(a, other.at(k, c)))
                out.append(acc)
        return FqMatrix(f, self.rows, other.cols, out)

    def mul_vector(self, v):
        if len(v) != self.cols:
            raise ShapeMismatch("vector length != cols")
        f = self.field
        out = []
        for r in range(self.rows):
            acc = 0
            for a, x in zip(self.row(r), v):
                if a and x:
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return tuple(out)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ShapeMismatch("column counts differ")
        return FqMatrix(self.field, self.rows + other.rows, self.cols,
                        self.entries + other.entries)

    def _check_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols) or self.field.q != other.field.q:
            raise ShapeMismatch(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols} over q={other.field.q}")

    def __eq__(self, other):
        return (isinstance(other, FqMatrix) and self.field.q == other.field.q
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field.q, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"FqMatrix(q={self.field.q}, {self.rows}x{self.cols}, {self.entries})"


def _rref_rows(field, rows):
    """In-place RREF of a list of row lists; returns pivot column list."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    pr = 0
    for c in range(ncols):
        pivot_row = None
        for r in range(pr, len(rows)):
            if rows[r][c]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
        lead = rows[pr][c]
        if lead != 1:
            ilead = field.inv(lead)
            rows[pr] = [field.mul(ilead, x) for x in rows[pr]]
        for r in range(len(rows)):
            if r != pr and rows[r][c]:
                coef = rows[r][c]
                rows[r] = [field.sub(x, field.mul(coef, y))
                           for x, y in zip(rows[r], rows[pr])]
        pivots.append(c)
        pr += 1
        if pr == len(rows):
            break
    return pivots


def rref(m: FqMatrix):
    """Reduced row echelon form.

    Returns (R, rank) where R has the same shape as m (zero rows kept at
    the bottom) and rank is the number of pivots.  m is not modified.
    """
    rows = m.row_list()
    pivots = _rref_rows(m.field, rows)
    return FqMatrix.from_rows(m.field, rows), len(pivots)


def rank(m: FqMatrix) -> int:
    rows = m.row_list()
    return len(_rref_rows(m.field, rows))


def rank_distance(a: FqMatrix, b: FqMatrix) -> int:
    """rank(a - b); the rank metric on equal-shape matrices."""
    return rank(a.sub(b))


class Subspace:
    """A subspace of F_q**ambient_dim in canonical (RREF) form."""

    __slots__ = ("field", "ambient_dim", "basis", "dim", "_pivots")

    def __init__(self, field, ambient_dim, basis_rows, pivots=None):
        # trusted constructor: basis_rows must already be RREF, no zero rows
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = FqMatrix.from_rows(field, basis_rows) if basis_rows else \
            FqMatrix(field, 0, ambient_dim, ())
        self.dim = len(basis_rows)
        if pivots is None:
            pivots = [next(i for i, x in enumerate(r) if x) for r in basis_rows]
        self._pivots = tuple(pivots)

    @classmethod
    def from_spanning(cls, field, ambient_dim, vectors):
        rows = [list(v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise AmbientMismatch("spanning vector has wrong length")
        pivots = _rref_rows(field, rows)
        return cls(field, ambient_dim, [tuple(r) for r in rows[:len(pivots)]], pivots)

    @classmethod
    def zero(cls, field, ambient_dim):
        return cls(field, ambient_dim, [])

    @classmethod
    def full(cls, field, ambient_dim):
        return cls(field, ambient_dim,
                   [tuple(1 if i == j else 0 for j in range(ambient_dim))
                    for i in range(ambient_dim)])

    def basis_rows(self):
        return [self.basis.row(r) for r in range(self.dim)]

    def reduce_vector(self, v):
        """Residue of v after elimination against the basis (0 iff v in self)."""
        f = self.field
        v = list(v)
        for r, p in enumerate(self._pivots):
            if v[p]:
                coef = v[p]
                row = self.basis.row(r)
                v = [f.sub(x, f.mul(coef, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains_vector(self, v) -> bool:
        return not any(self.reduce_vector(v))

    def contains(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(self.contains_vector(r) for r in other.basis_rows())

    def _check_ambient(self, other):
        if self.ambient_dim != other.ambient_dim or self.field.q != other.field.q:
            raise AmbientMismatch(
                f"ambient {self.ambient_dim} (q={self.field.q}) vs "
                f"{other.ambient_dim} (q={other.field.q})")

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.field.q == other.field.q and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(q={self.field.q}, ambient={self.ambient_dim}, dim={self.dim})"


def kernel(m: FqMatrix) -> Subspace:
    """Right null space of m, dimension cols - rank(m).

    Basis vectors are read off the RREF: one per free column, with a 1 in
    the free position and the negated pivot-row entries above it.
    """
    f = m.field
    rows = m.row_list()
    pivots = _rref_rows(f, rows)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * m.cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(rows[r][fc])
        basis.append(v)
    return Subspace.from_spanning(f, m.cols, basis)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    a._check_ambient(b)
    return Subspace.from_spanning(a.field, a.ambient_dim,
                                  a.basis_rows() + b.basis_rows())


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Meet of two subspaces via the kernel of the column-stacked bases.

    A relation x.A_basis + y.B_basis = 0 identifies the common vector
    sum(x_i a_i) = -sum(y_j b_j); the images of a kernel basis span the
    intersection.
    """
    a._check_ambient(b)
    f = a.field
    da, db = a.dim, b.dim
    if da == 0 or db == 0:
        return Subspace.zero(f, a.ambient_dim)
    cols = []
    for r in a.basis_rows():
        cols.append(r)
    for r in b.basis_rows():
        cols.append(r)
    stacked = FqMatrix.from_rows(f, cols).transpose()  # ambient x (da+db)
    ker = kernel(stacked)
    vectors = []
    arows = a.basis_rows()
    for kv in ker.basis_rows():
        v = [0] * a.ambient_dim
        for i in range(da):
            ci = kv[i]
            if ci:
                v = [f.add(x, f.mul(ci, y)) for x, y in zip(v, arows[i])]
        vectors.append(v)
    return Subspace.from_spanning(f, a.ambient_dim, vectors)


def subspace_ops(a: Subspace, b: Subspace):
    """Sum, intersection and containment in one call.

    Returns a dict with keys 'sum', 'intersection', 'contains' (a >= b).
    """
    return {
        "sum": subspace_sum(a, b),
        "intersection": subspace_intersection(a, b),
        "contains": a.contains(b),
    }
