"""Exact incidence and adjacency matrices, ranks, kernels and spectra.

Matrices are plain lists of integer rows; eliminations are exact
(fraction-free Bareiss for ranks, Fraction Gauss-Jordan for kernel
bases, with each kernel vector rescaled to a primitive integer vector).
Nothing here is floating point: every check is an identity that either
holds exactly or fails.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from . import attenuated as att
from . import counting
from .attenuated import SpaceParams
from .errors import CapExceeded, LengthMismatch

_DEFAULT_MAX_CELLS = 4096 * 4096


def _max_cells() -> int:
    mb = os.environ.get("CLFORMS_CAP_MB")
    if mb:
        return int(mb) * (1 << 20) // 8
    return _DEFAULT_MAX_CELLS


def _check_cells(rows, cols):
    if rows * cols > _max_cells():
        raise CapExceeded(f"matrix of {rows}x{cols} cells exceeds the cap",
                          required=rows * cols)


def build_incidence(sp: SpaceParams):
    """0/1 incidence matrix, rows indexed by points, columns by vertices."""
    if getattr(sp, "_incidence", None) is None:
        pts = att.enumerate_points(sp)
        verts = att.enumerate_vertices(sp)
        _check_cells(len(pts), len(verts))
        sp._incidence = [[1 if att.incident(p, w) else 0 for w in verts]
                         for p in pts]
    return sp._incidence


def build_point_adjacency(sp: SpaceParams):
    """Adjacency of the point graph: distinct points whose span still
    avoids the special l-space, i.e. points with different head vectors."""
    pts = att.enumerate_points(sp)
    _check_cells(len(pts), len(pts))
    return [[1 if p.u != r.u else 0 for r in pts] for p in pts]


def build_kneser(sp: SpaceParams):
    """Adjacency of the disjointness graph on vertices."""
    if getattr(sp, "_kneser", None) is None:
        verts = att.enumerate_vertices(sp)
        _check_cells(len(verts), len(verts))
        n = len(verts)
        k = [[0] * n for _ in range(n)]
        for i in range(n):
            wi = verts[i]
            for j in range(i + 1, n):
                if att.are_disjoint(wi, verts[j]):
                    k[i][j] = k[j][i] = 1
        sp._kneser = k
    return sp._kneser


# ---------------------------------------------------------------------------
# Exact matrix helpers.
# ---------------------------------------------------------------------------

def matmul(a, b):
    nb = len(b[0])
    out = []
    for row in a:
        acc = [0] * nb
        for k, aik in enumerate(row):
            if aik:
                bk = b[k]
                if aik == 1:
                    for j in range(nb):
                        acc[j] += bk[j]
                else:
                    for j in range(nb):
                        acc[j] += aik * bk[j]
        out.append(acc)
    return out


def mat_scale_add_identity(a, scale, shift):
    """scale*a + shift*I."""
    n = len(a)
    out = [[scale * x for x in row] for row in a]
    for i in range(n):
        out[i][i] += shift
    return out


def is_zero_matrix(a) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def rank_exact(mat) -> int:
    """Rank over the rationals via fraction-free Bareiss elimination."""
    a = [list(r) for r in mat]
    if not a:
        return 0
    m, ncols = len(a), len(a[0])
    prev = 1
    rk = 0
    for col in range(ncols):
        if rk >= m:
            break
        piv = None
        for r in range(rk, m):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        if piv != rk:
            a[rk], a[piv] = a[piv], a[rk]
        pivval = a[rk][col]
        for r in range(rk + 1, m):
            arc = a[r][col]
            row_r, row_p = a[r], a[rk]
            for c in range(col + 1, ncols):
                row_r[c] = (row_r[c] * pivval - arc * row_p[c]) // prev
            row_r[col] = 0
        prev = pivval
        rk += 1
    return rk


def kernel_basis(mat):
    """Primitive integer basis of the right null space of mat.

    Gauss-Jordan over the rationals, free-column basis vectors, each
    rescaled by the lcm of denominators and divided by the gcd, sign
    fixed so the first nonzero entry is positive.
    """
    from math import gcd, lcm
    a = [[Fraction(x) for x in row] for row in mat]
    ncols = len(mat[0]) if mat else 0
    pivots = []
    rk = 0
    for col in range(ncols):
        piv = None
        for r in range(rk, len(a)):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        lead = a[rk][col]
        if lead != 1:
            a[rk] = [x / lead for x in a[rk]]
        for r in range(len(a)):
            if r != rk and a[r][col]:
                coef = a[r][col]
                a[r] = [x - coef * y for x, y in zip(a[r], a[rk])]
        pivots.append(col)
        rk += 1
        if rk == len(a):
            break
    pivot_set = set(pivots)
    basis = []
    for fc in (c for c in range(ncols) if c not in pivot_set):
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        den = lcm(*(x.denominator for x in v)) if v else 1
        iv = [int(x * den) for x in v]
        g = 0
        for x in iv:
            g = gcd(g, x)
        if g > 1:
            iv = [x // g for x in iv]
        first = next((x for x in iv if x), 0)
        if first < 0:
            iv = [-x for x in iv]
        basis.append(tuple(iv))
    return basis


def incidence_kernel_basis(sp: SpaceParams):
    if getattr(sp, "_incidence_kernel", None) is None:
        sp._incidence_kernel = kernel_basis(build_incidence(sp))
    return sp._incidence_kernel


def incidence_rank(sp: SpaceParams) -> int:
    return rank_exact(build_incidence(sp))


def in_image_of_transpose(mat, v) -> bool:
    """Whether v lies in the row space of mat, i.e. is orthogonal to
    every kernel basis vector of mat."""
    if not mat or len(v) != len(mat[0]):
        raise LengthMismatch("vector length does not match matrix columns")
    for k in kernel_basis(mat):
        if sum(ki * vi for ki, vi in zip(k, v)):
            return False
    return True


def gram_check(sp: SpaceParams) -> bool:
    """Entrywise identity M.M^t = q**((n-1)l) I + q**((n-2)l) A, where A
    is the point-graph adjacency (the off-diagonal term never occurs for
    n = 1 because that graph is empty)."""
    m = build_incidence(sp)
    a = build_point_adjacency(sp)
    q, n, l = sp.q, sp.n, sp.l
    diag = q ** ((n - 1) * l)
    off = q ** ((n - 2) * l) if n >= 2 else None
    npts = len(m)
    for i in range(npts):
        for j in range(npts):
            val = sum(x * y for x, y in zip(m[i], m[j]))
            if i == j:
                expect = diag
            elif a[i][j]:
                expect = off
            else:
                expect = 0
            if val != expect:
                return False
    return True


def eigen_membership_v1(sp: SpaceParams, v):
    """Whether K.v = lambda_1 v exactly, for the disjointness adjacency K.

    Returns True/False, or None for the zero vector, which sits in every
    eigenspace and is reported as its own status.
    """
    k = build_kneser(sp)
    if len(v) != len(k):
        raise LengthMismatch("vector length does not match the vertex count")
    if not any(v):
        return None
    lam1 = counting.spectra(sp).kneser_eigenvalues[1]
    for row, vi in zip(k, v):
        acc = sum(x * y for x, y in zip(row, v))
        if acc != lam1 * vi:
            return False
    return True


def verify_disjoint_kernel_identity(sp: SpaceParams, w) -> bool:
    """The scaled disjoint-set identity: with D the set of vertices
    disjoint from w and d the through-point disjoint count,

        M . ( q**((n-1)l) chi_D - (j - q**((n-1)l) chi_{w}) d ) = 0.
    """
    m = build_incidence(sp)
    verts = att.enumerate_vertices(sp)
    q, n, l = sp.q, sp.n, sp.l
    scale = q ** ((n - 1) * l)
    d = int(counting.delta(sp))
    vec = []
    for u in verts:
        x = scale if att.are_disjoint(u, w) else 0
        x -= d
        if u.key == w.key:
            x += scale * d
        vec.append(x)
    for row in m:
        if sum(r * x for r, x in zip(row, vec)):
            return False
    return True


@dataclass(frozen=True)
class SpectrumReport:
    """Exact verification of the disjointness-graph spectrum."""
    eigenvalues: tuple
    expected_dims: tuple
    annihilated: bool          # prod_j (K - lambda_j I) = 0
    rank_dims: tuple           # rank of prod_{i != j}(K - lambda_i I), each j
    dims_match: bool
    row_sum_ok: bool           # K.j = delta (q**l - 1) j
    dims_sum_ok: bool          # sum of dims = vertex count


def kneser_spectrum_report(sp: SpaceParams) -> SpectrumReport:
    k = build_kneser(sp)
    sf = counting.spectra(sp)
    lam = sf.kneser_eigenvalues
    dims = sf.kneser_dims
    nverts = len(k)

    prod_all = None
    for lj in lam:
        factor = mat_scale_add_identity(k, 1, -lj)
        prod_all = factor if prod_all is None else matmul(prod_all, factor)
    annihilated = is_zero_matrix(prod_all)

    rank_dims = []
    for j in range(len(lam)):
        prod = None
        for i, li in enumerate(lam):
            if i == j:
                continue
            factor = mat_scale_add_identity(k, 1, -li)
            prod = factor if prod is None else matmul(prod, factor)
        rank_dims.append(rank_exact(prod) if prod is not None else nverts)
    dims_match = tuple(rank_dims) == dims

    row_target = -lam[1] * (sp.q ** sp.l - 1) if len(lam) > 1 else 0
    row_sum_ok = all(sum(row) == row_target for row in k)
    return SpectrumReport(lam, dims, annihilated, tuple(rank_dims),
                          dims_match, row_sum_ok, sum(dims) == nverts)
