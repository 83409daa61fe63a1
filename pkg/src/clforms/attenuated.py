"""Rank-metric coordinates for subspace families over F_q^(n+l).

The distinguished l-space E is the span of the last l coordinates.  A
*vertex* is an n-dimensional subspace meeting E trivially, written as
the column space of the (n+l) x n block matrix [I; A] for a unique
l x n matrix A; this is a bijection onto the q**(n*l) vertices.  A
*point* is a one-dimensional subspace meeting E trivially, written as
a pair (u, v) with u in F_q^n nonzero (normalised so its first nonzero
coordinate is 1) and v in F_q^l.

In these coordinates every geometric predicate becomes matrix
arithmetic:

* point (u, v) lies on vertex A  <=>  A.u = v;
* dim of the intersection of vertices A and B is n - rank(A - B), so
  adjacency is rank(A - B) = 1 and disjointness is rank(A - B) = n;
* vertex A lies in the hyperplane {(u, w) : a.u + b.w = 0}  <=>
  A^t.b = -a.

Canonical orderings are base-q row-major integer keys: a vertex's key
folds the entries of A most-significant-first, and equals its index in
the enumeration; a point's key folds the digits of u then v.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .errors import BadParams, CapExceeded
from .fqlinalg import FqMatrix, Subspace
from .gf import FqField, field_new

DEFAULT_ENUM_CAP = 1 << 20
_MASK_CACHE_LIMIT = 2048  # build full pairwise disjointness masks up to this many vertices


class SpaceParams:
    """Fixed (q, n, l) context with lazy enumeration caches."""

    def __init__(self, q: int, n: int, l: int, enumeration_cap: int = DEFAULT_ENUM_CAP):
        if n < 1:
            raise BadParams("n must be >= 1")
        if l < n:
            raise BadParams(f"the model assumes n <= l, got n={n}, l={l}")
        self.field: FqField = field_new(q)
        self.q = q
        self.n = n
        self.l = l
        self.enumeration_cap = enumeration_cap
        self._vertices = None
        self._points = None
        self._masks = None
        self._rank_by_diff = None
        self._disjoint_diffs = None

    @property
    def ambient_dim(self) -> int:
        return self.n + self.l

    @property
    def n_vertices(self) -> int:
        return self.q ** (self.n * self.l)

    @property
    def n_points(self) -> int:
        return self.q ** self.l * (self.q ** self.n - 1) // (self.q - 1)

    def __repr__(self):
        return f"SpaceParams(q={self.q}, n={self.n}, l={self.l})"


@lru_cache(maxsize=None)
def space(q: int, n: int, l: int) -> SpaceParams:
    """Memoised SpaceParams with the default enumeration cap."""
    return SpaceParams(q, n, l)


@dataclass(frozen=True)
class Vertex:
    """An l x n matrix A standing for the column space of [I; A]."""
    sp: SpaceParams
    entries: tuple  # row-major, length l*n
    key: int

    def matrix(self) -> FqMatrix:
        return FqMatrix(self.sp.field, self.sp.l, self.sp.n, self.entries)

    def row(self, r):
        n = self.sp.n
        return self.entries[r * n:(r + 1) * n]

    def column(self, j):
        n = self.sp.n
        return tuple(self.entries[r * n + j] for r in range(self.sp.l))

    def apply(self, u):
        """A.u as a tuple in F_q^l."""
        f, n = self.sp.field, self.sp.n
        out = []
        for r in range(self.sp.l):
            acc = 0
            row = self.row(r)
            for a, x in zip(row, u):
                if a and x:
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return tuple(out)

    def subspace(self) -> Subspace:
        """The vertex as a canonical subspace: row space of [I | A^t]."""
        sp = self.sp
        rows = []
        for i in range(sp.n):
            unit = [0] * sp.n
            unit[i] = 1
            rows.append(tuple(unit) + self.column(i))
        return Subspace(sp.field, sp.ambient_dim, rows, list(range(sp.n)))

    def __eq__(self, other):
        return (isinstance(other, Vertex) and other.key == self.key
                and other.sp.q == self.sp.q and other.sp.n == self.sp.n
                and other.sp.l == self.sp.l)

    def __hash__(self):
        return hash((self.sp.q, self.sp.n, self.sp.l, self.key))


@dataclass(frozen=True)
class Point:
    """A normalised pair (u, v): the one-space spanned by (u; v)."""
    sp: SpaceParams
    u: tuple
    v: tuple
    key: int

    def subspace(self) -> Subspace:
        return Subspace(self.sp.field, self.sp.ambient_dim, [self.u + self.v])

    def __eq__(self, other):
        return (isinstance(other, Point) and other.key == self.key
                and other.sp.q == self.sp.q and other.sp.n == self.sp.n
                and other.sp.l == self.sp.l)

    def __hash__(self):
        return hash(("pt", self.sp.q, self.sp.n, self.sp.l, self.key))


@dataclass(frozen=True)
class TypedHyperplane:
    """The hyperplane V = {(u; w) : a.u + b.w = 0}, b nonzero normalised.

    V has dimension n+l-1 and meets E in dimension l-1.
    """
    sp: SpaceParams
    a: tuple
    b: tuple

    def __post_init__(self):
        sp = self.sp
        if len(self.a) != sp.n or len(self.b) != sp.l:
            raise BadParams("hyperplane coefficient lengths must be (n, l)")
        nz = [i for i, x in enumerate(self.b) if x]
        if not nz or self.b[nz[0]] != 1:
            raise BadParams("b must be nonzero with first nonzero coordinate 1")

    def key(self) -> int:
        return _fold(self.sp.q, self.a + self.b)

    def contains_vertex(self, w: Vertex) -> bool:
        # A^t.b = -a, column by column
        f = self.sp.field
        for j in range(self.sp.n):
            acc = 0
            for bi, ci in zip(self.b, w.column(j)):
                if bi and ci:
                    acc = f.add(acc, f.mul(bi, ci))
            if acc != f.neg(self.a[j]):
                return False
        return True

    def contains_point(self, p: Point) -> bool:
        f = self.sp.field
        acc = 0
        for ai, ui in zip(self.a, p.u):
            if ai and ui:
                acc = f.add(acc, f.mul(ai, ui))
        for bi, vi in zip(self.b, p.v):
            if bi and vi:
                acc = f.add(acc, f.mul(bi, vi))
        return acc == 0

    def subspace(self) -> Subspace:
        sp = self.sp
        m = FqMatrix(sp.field, 1, sp.ambient_dim, self.a + self.b)
        from .fqlinalg import kernel
        return kernel(m)


def _fold(q: int, digits) -> int:
    acc = 0
    for d in digits:
        acc = acc * q + d
    return acc


def _unfold(q: int, key: int, length: int):
    out = [0] * length
    for i in range(length - 1, -1, -1):
        out[i] = key % q
        key //= q
    return tuple(out)


def vertex_from_key(sp: SpaceParams, key: int) -> Vertex:
    return Vertex(sp, _unfold(sp.q, key, sp.n * sp.l), key)


def vertex_from_entries(sp: SpaceParams, entries) -> Vertex:
    entries = tuple(entries)
    return Vertex(sp, entries, _fold(sp.q, entries))


def enumerate_vertices(sp: SpaceParams):
    """All q**(n*l) vertices in increasing key order (index == key)."""
    if sp._vertices is None:
        total = sp.n_vertices
        if total > sp.enumeration_cap:
            raise CapExceeded(f"vertex enumeration needs {total} items", required=total)
        sp._vertices = [vertex_from_key(sp, k) for k in range(total)]
    return sp._vertices


def enumerate_points(sp: SpaceParams):
    """All q**l * (q**n-1)/(q-1) points in increasing key order."""
    if sp._points is None:
        total = sp.n_points
        if total > sp.enumeration_cap:
            raise CapExceeded(f"point enumeration needs {total} items", required=total)
        q, n, l = sp.q, sp.n, sp.l
        pts = []
        for ukey in range(q ** n):
            u = _unfold(q, ukey, n)
            nz = [x for x in u if x]
            if not nz or nz[0] != 1:
                continue
            base = ukey * q ** l
            for vkey in range(q ** l):
                pts.append(Point(sp, u, _unfold(q, vkey, l), base + vkey))
        sp._points = pts
    return sp._points


def point_from_pair(sp: SpaceParams, u, v) -> Point:
    u, v = tuple(u), tuple(v)
    nz = [x for x in u if x]
    if not nz or nz[0] != 1:
        raise BadParams("u must be nonzero with first nonzero coordinate 1")
    return Point(sp, u, v, _fold(sp.q, u + v))


def incident(p: Point, w: Vertex) -> bool:
    """Whether the point lies on the vertex: A.u = v."""
    return w.apply(p.u) == p.v


def points_of_vertex(w: Vertex):
    """The (q**n-1)/(q-1) points on a vertex."""
    sp = w.sp
    out = []
    for ukey in range(sp.q ** sp.n):
        u = _unfold(sp.q, ukey, sp.n)
        nz = [x for x in u if x]
        if not nz or nz[0] != 1:
            continue
        out.append(point_from_pair(sp, u, w.apply(u)))
    return out


# ---------------------------------------------------------------------------
# Rank of a vertex difference: the engine behind all graph metrics.
# ---------------------------------------------------------------------------

def _rank_rows_field(field, rows, ncols):
    rows = [list(r) for r in rows]
    rk = 0
    for c in range(ncols):
        piv = None
        for r in range(rk, len(rows)):
            if rows[r][c]:
                piv = r
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        lead = rows[rk][c]
        prow = rows[rk]
        if lead != 1:
            ilead = field.inv(lead)
            rows[rk] = prow = [field.mul(ilead, x) for x in prow]
        for r in range(rk + 1, len(rows)):
            coef = rows[r][c]
            if coef:
                rows[r] = [field.sub(x, field.mul(coef, y))
                           for x, y in zip(rows[r], prow)]
        rk += 1
        if rk == len(rows):
            break
    return rk


def _rank_gf2(rows):
    pivots = {}
    rk = 0
    for row in rows:
        while row:
            hb = row.bit_length()
            p = pivots.get(hb)
            if p is None:
                pivots[hb] = row
                rk += 1
                break
            row ^= p
    return rk


def _rank_by_diff_table(sp: SpaceParams):
    """For q=2 only: rank of the matrix packed into each possible key."""
    if sp._rank_by_diff is None:
        n, l = sp.n, sp.l
        rmask = (1 << n) - 1
        shifts = [n * (l - 1 - r) for r in range(l)]
        sp._rank_by_diff = [
            _rank_gf2([(d >> s) & rmask for s in shifts])
            for d in range(sp.n_vertices)
        ]
    return sp._rank_by_diff


def rank_of_difference(w1: Vertex, w2: Vertex) -> int:
    sp = w1.sp
    if sp.q == 2 and sp._rank_by_diff is not None:
        return sp._rank_by_diff[w1.key ^ w2.key]
    f = sp.field
    diff = [f.sub(a, b) for a, b in zip(w1.entries, w2.entries)]
    n = sp.n
    return _rank_rows_field(f, [diff[r * n:(r + 1) * n] for r in range(sp.l)], n)


def dim_intersection(w1: Vertex, w2: Vertex) -> int:
    """n - rank(A - B): 0 means disjoint, n means equal."""
    return w1.sp.n - rank_of_difference(w1, w2)


def are_disjoint(w1: Vertex, w2: Vertex) -> bool:
    return rank_of_difference(w1, w2) == w1.sp.n


def disjoint_key_diffs(sp: SpaceParams):
    """q=2 only: all difference keys d with rank(matrix(d)) = n.

    Vertices a, b are disjoint exactly when a.key ^ b.key is in this list.
    """
    if sp.q != 2:
        raise BadParams("difference-key table applies to q=2 only")
    if sp._disjoint_diffs is None:
        table = _rank_by_diff_table(sp)
        sp._disjoint_diffs = [d for d, rk in enumerate(table) if rk == sp.n]
    return sp._disjoint_diffs


def disjointness_masks(sp: SpaceParams):
    """masks[i] has bit j set iff vertices i and j are disjoint (cached)."""
    if sp._masks is None:
        total = sp.n_vertices
        if total > _MASK_CACHE_LIMIT:
            raise CapExceeded(
                f"disjointness masks need {total}x{total} bits", required=total)
        verts = enumerate_vertices(sp)
        masks = [0] * total
        if sp.q == 2:
            table = _rank_by_diff_table(sp)
            n = sp.n
            for d in range(1, total):
                if table[d] == n:
                    for i in range(total):
                        masks[i] |= 1 << (i ^ d)
        else:
            for i in range(total):
                wi = verts[i]
                for j in range(i + 1, total):
                    if rank_of_difference(wi, verts[j]) == sp.n:
                        masks[i] |= 1 << j
                        masks[j] |= 1 << i
        sp._masks = masks
    return sp._masks


# ---------------------------------------------------------------------------
# Subspace enumeration (the brute-force oracle substrate).
# ---------------------------------------------------------------------------

def _n_subspaces(amb: int, m: int, q: int) -> int:
    if m < 0 or m > amb:
        return 0
    num = den = 1
    for i in range(m):
        num *= q ** (amb - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(field: FqField, ambient_dim: int, m: int,
                        cap: int = DEFAULT_ENUM_CAP):
    """Yield every m-dimensional subspace of F_q**ambient_dim exactly once.

    Enumerates reduced row echelon bases directly: choose pivot columns,
    then fill the free entries in all q**free ways.
    """
    q = field.q
    total = _n_subspaces(ambient_dim, m, q)
    if total > cap:
        raise CapExceeded(f"subspace enumeration needs {total} items", required=total)
    if m == 0:
        yield Subspace.zero(field, ambient_dim)
        return
    for pivots in combinations(range(ambient_dim), m):
        pivot_set = set(pivots)
        free_pos = [(i, c) for i in range(m) for c in range(pivots[i] + 1, ambient_dim)
                    if c not in pivot_set]
        template = [[0] * ambient_dim for _ in range(m)]
        for i, p in enumerate(pivots):
            template[i][p] = 1
        for vals in product(range(q), repeat=len(free_pos)):
            rows = [r[:] for r in template]
            for (i, c), v in zip(free_pos, vals):
                rows[i][c] = v
            yield Subspace(field, ambient_dim, [tuple(r) for r in rows], list(pivots))


def enumerate_typed_subspaces(sp: SpaceParams, m: int, k: int):
    """All subspaces P with dim P = m and dim(P meet E) = k.

    Since E is the span of the last l coordinates, dim(P meet E) equals
    m - rank(first n columns of a basis).  Returns an empty list when the
    type is infeasible (k > min(m, l) or m - k > n).
    """
    if k < 0 or m < 0 or k > m or k > sp.l or m - k > sp.n:
        return []
    out = []
    for S in enumerate_subspaces(sp.field, sp.ambient_dim, m, sp.enumeration_cap):
        head = [row[:sp.n] for row in S.basis_rows()]
        if m - _rank_rows_field(sp.field, head, sp.n) == k:
            out.append(S)
    return out


def vertex_from_subspace(sp: SpaceParams, S: Subspace) -> Vertex:
    """Inverse of Vertex.subspace(); requires S of type (n, 0)."""
    if S.dim != sp.n or S.ambient_dim != sp.ambient_dim:
        raise BadParams("subspace is not n-dimensional in the right ambient space")
    if S._pivots != tuple(range(sp.n)):
        raise BadParams("subspace meets the special l-space nontrivially")
    entries = []
    for r in range(sp.l):
        for j in range(sp.n):
            entries.append(S.basis.at(j, sp.n + r))
    return vertex_from_entries(sp, entries)


def point_from_subspace(sp: SpaceParams, S: Subspace) -> Point:
    if S.dim != 1 or S.ambient_dim != sp.ambient_dim:
        raise BadParams("subspace is not one-dimensional in the right ambient space")
    row = S.basis.row(0)
    return point_from_pair(sp, row[:sp.n], row[sp.n:])


# ---------------------------------------------------------------------------
# Typed hyperplanes.
# ---------------------------------------------------------------------------

def enumerate_hyperplanes(sp: SpaceParams):
    """All typed hyperplanes (a, b) in increasing key order."""
    q, n, l = sp.q, sp.n, sp.l
    out = []
    for akey in range(q ** n):
        a = _unfold(q, akey, n)
        for bkey in range(q ** l):
            b = _unfold(q, bkey, l)
            nz = [x for x in b if x]
            if not nz or nz[0] != 1:
                continue
            out.append(TypedHyperplane(sp, a, b))
    return out


def hyperplane_vertex_keys(sp: SpaceParams, h: TypedHyperplane):
    """Keys of the q**(n*(l-1)) vertices lying in the hyperplane.

    Column j of A ranges over the affine solution set {c : b.c = -a_j},
    solved by freeing every coordinate except the first nonzero of b.
    """
    f, q, n, l = sp.field, sp.q, sp.n, sp.l
    t = next(i for i, x in enumerate(h.b) if x)
    free_idx = [i for i in range(l) if i != t]
    inv_bt = f.inv(h.b[t])

    def column_solutions(rhs):
        sols = []
        for vals in product(range(q), repeat=l - 1):
            c = [0] * l
            s = 0
            for i, v in zip(free_idx, vals):
                c[i] = v
                if v and h.b[i]:
                    s = f.add(s, f.mul(h.b[i], v))
            c[t] = f.mul(inv_bt, f.sub(rhs, s))
            sols.append(tuple(c))
        return sols

    per_column = [column_solutions(f.neg(h.a[j])) for j in range(n)]
    keys = []
    for combo in product(*per_column):
        entries = []
        for r in range(l):
            for j in range(n):
                entries.append(combo[j][r])
        keys.append(_fold(q, entries))
    keys.sort()
    return keys


def vertices_in_hyperplane(h: TypedHyperplane):
    """The vertex set {A : A^t.b = -a} as a VertexSet, size q**(n*(l-1))."""
    from .clsets import VertexSet
    return VertexSet.from_keys(h.sp, hyperplane_vertex_keys(h.sp, h))
