"""Vertex-set constructions and the multi-definition membership verdict.

A candidate family is a VertexSet: a 0/1 vector over the canonical
vertex order, packed into a single integer (bit i = vertex with key i).
The verdict runs the equivalent membership definitions:

* ``disjoint_count`` - the exact per-vertex census: every vertex w sees
  exactly (x - [w in L]) * delta members disjoint from it, where
  x = |L| * q**-((n-1)l);
* ``kernel_orth`` / ``image`` - the characteristic vector is orthogonal
  to the kernel of the point-vertex incidence matrix (equivalently lies
  in the row space);
* ``eigen_V1`` - chi - x q**-l j is an exact eigenvector of the
  disjointness adjacency for its second eigenvalue;
* ``spread_sampled`` / ``switching_sampled`` - |L meet S| = x for
  sampled spreads, and equal meets with sampled conjugate switching
  pairs.  These are necessary conditions only and never decide
  membership by themselves.

The decision is the conjunction of the exact tests; the sampled tests
are recorded for diagnostics.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import attenuated as att
from . import counting
from .attenuated import Point, SpaceParams, TypedHyperplane, Vertex
from .errors import BadParams, NotCL, PreconditionViolated
from .fqlinalg import FqMatrix, Subspace, rank, subspace_intersection, subspace_sum
from .gf import ext_field


class VertexSet:
    """A subset of the vertices as an integer bitmask in canonical order."""

    __slots__ = ("sp", "bits", "size")

    def __init__(self, sp: SpaceParams, bits: int):
        total = sp.n_vertices
        if bits < 0 or bits >> total:
            raise BadParams("bit vector longer than the vertex enumeration")
        self.sp = sp
        self.bits = bits
        self.size = bits.bit_count()

    @classmethod
    def empty(cls, sp):
        return cls(sp, 0)

    @classmethod
    def full(cls, sp):
        return cls(sp, (1 << sp.n_vertices) - 1)

    @classmethod
    def from_keys(cls, sp, keys):
        bits = 0
        for k in keys:
            bit = 1 << k
            if bits & bit:
                raise BadParams(f"duplicate vertex key {k}")
            bits |= bit
        return cls(sp, bits)

    @classmethod
    def from_vertices(cls, sp, vertices):
        return cls.from_keys(sp, [w.key for w in vertices])

    def contains_key(self, key: int) -> bool:
        return bool(self.bits >> key & 1)

    def member_keys(self):
        bits, out = self.bits, []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def members(self):
        return [att.vertex_from_key(self.sp, k) for k in self.member_keys()]

    def __eq__(self, other):
        return (isinstance(other, VertexSet) and other.bits == self.bits
                and other.sp.n_vertices == self.sp.n_vertices)

    def __hash__(self):
        return hash((self.sp.q, self.sp.n, self.sp.l, self.bits))

    def __repr__(self):
        return f"VertexSet(q={self.sp.q}, n={self.sp.n}, l={self.sp.l}, size={self.size})"


# ---------------------------------------------------------------------------
# Constructions.
# ---------------------------------------------------------------------------

def point_pencil(sp: SpaceParams, p: Point) -> VertexSet:
    """All vertices through a point: the canonical parameter-1 family."""
    bits = 0
    for w in att.enumerate_vertices(sp):
        if att.incident(p, w):
            bits |= 1 << w.key
    return VertexSet(sp, bits)


def hyperplane_set(sp: SpaceParams, h: TypedHyperplane) -> VertexSet:
    """All vertices inside a typed hyperplane: parameter q**(l-n)."""
    return att.vertices_in_hyperplane(h)


def standard_pencil_point(sp: SpaceParams, vkey: int) -> Point:
    """The point (e1, v) for the base-q vector v encoded by vkey.

    The pencils of these q**l points partition the whole vertex set: a
    vertex lies on (e1, v) exactly when the first column of its matrix
    is v."""
    u = tuple(1 if i == 0 else 0 for i in range(sp.n))
    v = att._unfold(sp.q, vkey, sp.l)
    return att.point_from_pair(sp, u, v)


def pencil_union_family(sp: SpaceParams, size: int) -> VertexSet:
    """Union of the first `size` standard pencils: parameter `size`.

    Valid for every 0 <= size <= q**l, giving a family of each possible
    parameter."""
    if not 0 <= size <= sp.q ** sp.l:
        raise BadParams(f"size must lie in [0, q**l], got {size}")
    bits = 0
    for vkey in range(size):
        bits |= point_pencil(sp, standard_pencil_point(sp, vkey)).bits
    return VertexSet(sp, bits)


def standard_hyperplane(sp: SpaceParams, xs) -> TypedHyperplane:
    """The hyperplane {(u; w) : w_1 = xs.u}: coefficients a = -xs, b = e1.

    Distinct coefficient tuples give vertex-disjoint hyperplane sets."""
    f = sp.field
    a = tuple(f.neg(x) for x in xs)
    b = tuple(1 if i == 0 else 0 for i in range(sp.l))
    return TypedHyperplane(sp, a, b)


def nontrivial_family(sp: SpaceParams, y: int) -> VertexSet:
    """Union of y vertex-disjoint hyperplane sets: parameter y * q**(l-n).

    Needs l > n >= 2 and 1 <= y < q**(n-1); the hyperplanes are the
    first y standard ones in key order."""
    if not (sp.l > sp.n >= 2):
        raise BadParams(f"needs l > n >= 2, got n={sp.n}, l={sp.l}")
    if not 1 <= y < sp.q ** (sp.n - 1):
        raise BadParams(f"y must lie in [1, q**(n-1)), got y={y}")
    bits = 0
    for xkey in range(y):
        xs = att._unfold(sp.q, xkey, sp.n)
        part = hyperplane_set(sp, standard_hyperplane(sp, xs))
        if bits & part.bits:
            raise AssertionError("standard hyperplane sets must be disjoint")
        bits |= part.bits
    return VertexSet(sp, bits)


def closure(a: VertexSet, b: VertexSet | None, op: str) -> VertexSet:
    """Set operations that preserve membership, with checked preconditions.

    complement: q**l - x; union_disjoint: x + x'; difference_nested: x - x'.
    """
    sp = a.sp
    if op == "complement":
        return VertexSet(sp, ~a.bits & ((1 << sp.n_vertices) - 1))
    if b is None or b.sp.n_vertices != sp.n_vertices:
        raise PreconditionViolated("binary operation needs two compatible sets")
    if op == "union_disjoint":
        if a.bits & b.bits:
            raise PreconditionViolated("sets are not disjoint")
        return VertexSet(sp, a.bits | b.bits)
    if op == "difference_nested":
        if b.bits & ~a.bits:
            raise PreconditionViolated("second set is not contained in the first")
        return VertexSet(sp, a.bits & ~b.bits)
    raise BadParams(f"unknown closure operation {op!r}")


# ---------------------------------------------------------------------------
# Spreads and switching sets.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Spread:
    """q**l pairwise-disjoint vertices covering every point exactly once."""
    sp: SpaceParams
    members: tuple
    origin: str

    def bits(self) -> int:
        out = 0
        for w in self.members:
            out |= 1 << w.key
        return out

    def key_set(self):
        return frozenset(w.key for w in self.members)


def spread(sp: SpaceParams, multiplier_seed: int = 0) -> Spread:
    """The field-construction spread.

    Identify F_q**l with the degree-l extension field via the power
    basis and embed F_q**n onto the span of the first n basis elements;
    the member for each extension element alpha is the vertex of the map
    u -> alpha * embed(u).  The member set does not depend on the seed,
    which is only recorded in the origin descriptor.
    """
    ext = ext_field(sp.field, sp.l)
    members = []
    for alpha in range(ext.order):
        cols = ext.mul_map_columns(alpha)
        entries = []
        for r in range(sp.l):
            for j in range(sp.n):
                entries.append(cols[j][r])
        members.append(att.vertex_from_entries(sp, entries))
    members.sort(key=lambda w: w.key)
    return Spread(sp, tuple(members), f"field(seed={multiplier_seed})")


def _random_invertible(rng, f, n):
    while True:
        m = FqMatrix(f, n, n, [rng.randrange(f.q) for _ in range(n * n)])
        if rank(m) == n:
            return m


def _inverse(m: FqMatrix) -> FqMatrix:
    f, n = m.field, m.rows
    aug = [list(m.row(r)) + [1 if c == r else 0 for c in range(n)] for r in range(n)]
    from .fqlinalg import _rref_rows
    pivots = _rref_rows(f, aug)
    if len(pivots) != n:
        raise BadParams("matrix is singular")
    return FqMatrix.from_rows(f, [r[n:] for r in aug])


def transformed_spread(s: Spread, seed: int) -> Spread:
    """Image of a spread under a seeded model automorphism.

    The map (u; v) -> (S.u; R.u + T.v) with S, T invertible fixes the
    special l-space and sends the vertex of A to the vertex of
    (T.A + R).S^-1; seed 0 is the identity transform.
    """
    sp = s.sp
    if seed == 0:
        return s
    rng = random.Random(seed)
    f = sp.field
    smat = _random_invertible(rng, f, sp.n)
    tmat = _random_invertible(rng, f, sp.l)
    rmat = FqMatrix(f, sp.l, sp.n, [rng.randrange(f.q) for _ in range(sp.l * sp.n)])
    sinv = _inverse(smat)
    members = []
    for w in s.members:
        a = tmat.mul(w.matrix()).add(rmat).mul(sinv)
        members.append(att.vertex_from_entries(sp, a.entries))
    members.sort(key=lambda w: w.key)
    return Spread(sp, tuple(members), f"transformed(seed={seed}, base={s.origin})")


def conjugate_switching_pair(s1: Spread, s2: Spread):
    """The symmetric difference halves of two spreads: two disjoint
    partial spreads covering the same point set."""
    k1, k2 = s1.key_set(), s2.key_set()
    r1 = VertexSet.from_keys(s1.sp, sorted(k1 - k2))
    r2 = VertexSet.from_keys(s1.sp, sorted(k2 - k1))
    return r1, r2


def span_restricted_spread(sp: SpaceParams, w1: Vertex, w2: Vertex):
    """A spread of the 2n-dimensional span of two disjoint vertices,
    relative to the span's meet with the special l-space.

    Members are q**n vertices inside the span; the first vertex is a
    member.  Used as the explicitly supplied auxiliary spread for the
    pairwise meeting/disjointness censuses.
    """
    if not att.are_disjoint(w1, w2):
        raise BadParams("the two vertices must be disjoint")
    f = sp.field
    sigma = subspace_sum(w1.subspace(), w2.subspace())
    e_rows = [tuple(1 if c == sp.n + r else 0 for c in range(sp.ambient_dim))
              for r in range(sp.l)]
    espace = Subspace(f, sp.ambient_dim, e_rows, list(range(sp.n, sp.ambient_dim)))
    meet = subspace_intersection(sigma, espace)
    if meet.dim != sp.n:
        raise AssertionError("span of a disjoint pair must meet the l-space in dim n")
    basis = w1.subspace().basis_rows() + meet.basis_rows()  # 2n rows, adapted
    inner = att.space(sp.q, sp.n, sp.n)
    members = []
    for m in spread(inner, 0).members:
        rows = []
        for i in range(sp.n):
            coeffs = tuple(1 if j == i else 0 for j in range(sp.n)) + m.column(i)
            vec = [0] * sp.ambient_dim
            for cf, brow in zip(coeffs, basis):
                if cf:
                    vec = [f.add(x, f.mul(cf, y)) for x, y in zip(vec, brow)]
            rows.append(vec)
        sub = Subspace.from_spanning(f, sp.ambient_dim, rows)
        members.append(att.vertex_from_subspace(sp, sub))
    members.sort(key=lambda w: w.key)
    return members


# ---------------------------------------------------------------------------
# The verdict.
# ---------------------------------------------------------------------------

@dataclass
class CLVerdict:
    is_cl: bool
    x: Fraction
    size: int
    non_integral: bool
    per_definition: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def x_str(self) -> str:
        return str(self.x.numerator) if self.x.denominator == 1 else str(self.x)


def _disjoint_counts(L: VertexSet):
    """For every vertex, the number of members of L disjoint from it."""
    sp = L.sp
    total = sp.n_vertices
    if total <= att._MASK_CACHE_LIMIT:
        masks = att.disjointness_masks(sp)
        return [(L.bits & m).bit_count() for m in masks]
    if sp.q == 2:
        dset = set(att.disjoint_key_diffs(sp))
        mkeys = L.member_keys()
        return [sum(1 for mk in mkeys if (i ^ mk) in dset) for i in range(total)]
    members = L.members()
    verts = att.enumerate_vertices(sp)
    return [sum(1 for m in members if att.are_disjoint(w, m)) for w in verts]


def verdict(L: VertexSet, level: str = "fast", spreads: int = 8,
            seed: int = 0) -> CLVerdict:
    """Run the membership definitions against a vertex set.

    'fast' runs only the exact per-vertex disjointness census; 'full'
    adds kernel orthogonality, the eigenvector test, and the sampled
    spread and switching-pair tests (at least `spreads` transformed
    spreads on top of the base one).
    """
    sp = L.sp
    q, n, l = sp.q, sp.n, sp.l
    denom = q ** ((n - 1) * l)
    size = L.size
    x = Fraction(size, denom)
    non_integral = size % denom != 0
    dlt = int(counting.delta(sp))
    per, wit = {}, {}

    counts = _disjoint_counts(L)
    ok3 = True
    for i, cnt in enumerate(counts):
        b = L.bits >> i & 1
        if cnt * denom != (size - b * denom) * dlt:
            ok3 = False
            wit["disjoint_count"] = {"vertex": i, "count": cnt}
            break
    per["disjoint_count"] = "pass" if ok3 else "fail"

    ok2 = ok4 = None
    if level == "full":
        from . import spectral
        from .errors import CapExceeded
        try:
            kb = spectral.incidence_kernel_basis(sp)
        except CapExceeded as exc:
            per["kernel_orth"] = per["image"] = "skipped"
            wit["kernel_orth"] = str(exc)
            kb = None
        if kb is not None:
            mkeys = L.member_keys()
            ok2 = True
            for idx, vec in enumerate(kb):
                if sum(vec[k] for k in mkeys):
                    ok2 = False
                    wit["kernel_orth"] = {"kernel_vector": idx}
                    break
            per["kernel_orth"] = per["image"] = "pass" if ok2 else "fail"

        # eigenvector test on the scaled vector q**l denom chi - size j
        scale = denom * q ** l
        if L.bits == 0 or L.bits == (1 << sp.n_vertices) - 1:
            per["eigen_V1"] = "zero_vector"
        else:
            lam1 = counting.spectra(sp).kneser_eigenvalues[1]
            dtot = int(counting.count_disjoint_pair(sp))
            ok4 = True
            for i, cnt in enumerate(counts):
                vi = scale * (L.bits >> i & 1) - size
                if scale * cnt - size * dtot != lam1 * vi:
                    ok4 = False
                    wit["eigen_V1"] = {"vertex": i}
                    break
            per["eigen_V1"] = "pass" if ok4 else "fail"

        base = spread(sp, 0)
        all_spreads = [base] + [transformed_spread(base, seed * 1000 + i)
                                for i in range(1, spreads + 1)]
        ok6 = True
        for s in all_spreads:
            meet = (L.bits & s.bits()).bit_count()
            if meet * denom != size:  # meet == x exactly
                ok6 = False
                wit["spread_sampled"] = {"spread": s.origin, "meet": meet}
                break
        per["spread_sampled"] = "pass" if ok6 else "fail"

        ok7 = True
        for s in all_spreads[1:]:
            r1, r2 = conjugate_switching_pair(base, s)
            m1 = (L.bits & r1.bits).bit_count()
            m2 = (L.bits & r2.bits).bit_count()
            if m1 != m2:
                ok7 = False
                wit["switching_sampled"] = {"spread": s.origin, "meets": (m1, m2)}
                break
        per["switching_sampled"] = "pass" if ok7 else "fail"

    is_cl = ok3 and not non_integral
    if ok2 is not None:
        is_cl = is_cl and ok2
    if ok4 is not None:
        is_cl = is_cl and ok4
    if non_integral:
        wit["size"] = f"{size} is not a multiple of q**((n-1)l) = {denom}"
    return CLVerdict(is_cl, x, size, non_integral, per, wit)


# ---------------------------------------------------------------------------
# Triviality classification.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrivialityReport:
    """Outcome of the decomposition search.

    trivial means a full partition into maximum intersecting families
    was found (point pencils, plus contained-in-hyperplane families when
    n = l).  nontrivial_certified means x * (largest intersecting family
    inside the set) < |set|, a sound impossibility certificate.  When
    neither holds the outcome is unresolved: the search not finding a
    decomposition does not by itself certify non-triviality.
    """
    trivial: bool
    pencil_cover: tuple
    hyperplane_cover: tuple
    nontrivial_certified: bool
    max_intersecting: int | None
    unresolved: bool

    @property
    def trivial_as_pencil_union(self) -> bool:
        return self.trivial and not self.hyperplane_cover


def classify_trivial(L: VertexSet, node_budget: int = 200000) -> TrivialityReport:
    sp = L.sp
    v = verdict(L, "fast")
    if not v.is_cl:
        raise NotCL("triviality classification needs a verified member family")
    x = int(v.x)
    if x == 0:
        return TrivialityReport(True, (), (), False, None, False)

    candidates = []  # (bits, kind, object)
    for p in att.enumerate_points(sp):
        pb = point_pencil(sp, p).bits
        if pb & ~L.bits == 0:
            candidates.append((pb, "pencil", p))
    if sp.n == sp.l:
        for h in att.enumerate_hyperplanes(sp):
            hb = hyperplane_set(sp, h).bits
            if hb & ~L.bits == 0:
                candidates.append((hb, "hyperplane", h))

    # a family covering vertex i need not have i as its lowest member,
    # so index every candidate under each vertex it covers
    cover_index = {}
    for cand in candidates:
        bits = cand[0]
        while bits:
            lowbit = bits & -bits
            cover_index.setdefault(lowbit.bit_length() - 1, []).append(cand)
            bits ^= lowbit

    nodes = 0
    budget_hit = False

    def dfs(remaining, chosen):
        nonlocal nodes, budget_hit
        if remaining == 0:
            return list(chosen)
        nodes += 1
        if nodes > node_budget:
            budget_hit = True
            return None
        low = (remaining & -remaining).bit_length() - 1
        for cand in cover_index.get(low, ()):
            bits = cand[0]
            if bits & ~remaining:
                continue
            chosen.append(cand)
            found = dfs(remaining & ~bits, chosen)
            if found is not None:
                return found
            chosen.pop()
            if budget_hit:
                return None
        return None

    cover = dfs(L.bits, [])
    if cover is not None:
        pencils = tuple(obj for _, kind, obj in cover if kind == "pencil")
        hyps = tuple(obj for _, kind, obj in cover if kind == "hyperplane")
        return TrivialityReport(True, pencils, hyps, False, None, False)

    from .search import max_intersecting_in
    best = max_intersecting_in(L)
    certified = x * best < L.size
    return TrivialityReport(False, (), (), certified, best, not certified)


# ---------------------------------------------------------------------------
# Member censuses used by the pairwise-bound checks.
# ---------------------------------------------------------------------------

def members_meeting(L: VertexSet, w: Vertex) -> int:
    """Members of L meeting w (including w itself when it is a member)."""
    return sum(1 for m in L.members() if att.dim_intersection(m, w) >= 1)


def members_disjoint_from_both(L: VertexSet, w1: Vertex, w2: Vertex) -> int:
    return sum(1 for m in L.members()
               if att.are_disjoint(m, w1) and att.are_disjoint(m, w2))


def d2_census_and_formula(L: VertexSet, w1: Vertex, w2: Vertex):
    """The census of members disjoint from a disjoint member pair, and
    the exact prediction from the span-spread meet count.

    Returns (census, formula_value, s0_meet) where the formula is
    (w_span - w_outer) * |S0 meet L| - 2 w_span + x w_outer for the
    explicitly supplied span spread S0.
    """
    sp = L.sp
    v = verdict(L, "fast")
    if not v.is_cl:
        raise NotCL("pair census needs a verified member family")
    x = int(v.x)
    wc = counting.w_counts(sp)
    s0 = span_restricted_spread(sp, w1, w2)
    s0_meet = sum(1 for m in s0 if L.contains_key(m.key))
    formula = ((wc.through_span_point - wc.through_outer_point) * s0_meet
               - 2 * wc.through_span_point + x * wc.through_outer_point)
    census = members_disjoint_from_both(L, w1, w2)
    return census, formula, s0_meet
