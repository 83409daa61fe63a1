"""Closed-form counts for the rank-metric subspace model.

Every formula here is exact integer arithmetic, and every formula has a
named ``census_*`` companion that recounts the same quantity by brute
force over the enumerations in :mod:`clforms.attenuated`.  The censuses
are the correctness oracles: a formula/census mismatch is a build
failure, never something to paper over.

Notation used throughout the docstrings: gb(n, k) is the q-binomial
coefficient, delta = q**C(n,2) * prod_{s=1}^{n-1} (q**(l-n+s) - 1) is
the number of vertices through a fixed point that are disjoint from a
fixed vertex not on the point, and c = q**((n-1)l) - delta is its
complement within the point's pencil.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import attenuated as att
from .attenuated import SpaceParams
from .errors import BadIndices, BadRank, NonIntegerResult, OutOfScopeParams
from .gf import field_new


@dataclass(frozen=True)
class CountResult:
    """An exact count plus the formula and inputs that produced it."""
    value: int
    formula_id: str
    params: dict = field(default_factory=dict, compare=False)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, CountResult):
            return self.value == other.value and self.formula_id == other.formula_id
        return self.value == other


def _result(value, formula_id, **params):
    assert value >= 0, f"{formula_id} produced a negative count"
    return CountResult(value, formula_id, params)


def _exact_div(num, den, what):
    if den == 0:
        raise NonIntegerResult(f"{what}: zero denominator")
    if num % den:
        raise NonIntegerResult(f"{what}: {num} is not divisible by {den}")
    return num // den


# ---------------------------------------------------------------------------
# Basic counts.
# ---------------------------------------------------------------------------

def _gb(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return _exact_div(num, den, "q-binomial")


def gaussian_binomial(n: int, k: int, q: int) -> CountResult:
    """Number of k-dimensional subspaces of F_q**n; 0 when k > n."""
    return _result(_gb(n, k, q), "gauss", n=n, k=k, q=q)


def _rank_count(rows: int, cols: int, m: int, q: int) -> int:
    if m > min(rows, cols) or m < 0:
        raise BadRank(f"rank {m} impossible for {rows}x{cols}")
    out = q ** comb(m, 2) * _gb(rows, m, q)
    for s in range(1, m + 1):
        out *= q ** (cols - m + s) - 1
    return out


def _rank_count_or_zero(rows, cols, m, q):
    if m < 0 or m > min(rows, cols):
        return 0
    return _rank_count(rows, cols, m, q)


def rank_count(n: int, l: int, m: int, q: int) -> CountResult:
    """Number of n x l matrices over F_q of rank exactly m."""
    return _result(_rank_count(n, l, m, q), "rank_count", n=n, l=l, m=m, q=q)


def count_through(i: int, j: int, sp: SpaceParams) -> CountResult:
    """Vertex-model subspaces of dimension j through a fixed i-dim one.

    Counts members of the j-th layer containing a fixed member of the
    i-th layer: q**(l*(j-i)) * gb(n-i, j-i).
    """
    if not 1 <= i <= j <= sp.n:
        raise BadIndices(f"need 1 <= i <= j <= n, got i={i}, j={j}, n={sp.n}")
    val = sp.q ** (sp.l * (j - i)) * _gb(sp.n - i, j - i, sp.q)
    return _result(val, "through", i=i, j=j, q=sp.q, n=sp.n, l=sp.l)


def count_disjoint_pair(sp: SpaceParams) -> CountResult:
    """Vertices disjoint from a fixed vertex."""
    q, n, l = sp.q, sp.n, sp.l
    val = q ** comb(n, 2)
    for s in range(1, n + 1):
        val *= q ** (l - n + s) - 1
    return _result(val, "disjoint_pair", q=q, n=n, l=l)


def _delta(q: int, n: int, l: int) -> int:
    val = q ** comb(n, 2)
    for s in range(1, n):
        val *= q ** (l - n + s) - 1
    return val


def delta(sp: SpaceParams) -> CountResult:
    """Vertices through a fixed point that are disjoint from a fixed
    vertex not on the point."""
    return _result(_delta(sp.q, sp.n, sp.l), "delta", q=sp.q, n=sp.n, l=sp.l)


def c_count(sp: SpaceParams) -> CountResult:
    """Complement of delta within a pencil: q**((n-1)l) - delta."""
    val = sp.q ** ((sp.n - 1) * sp.l) - _delta(sp.q, sp.n, sp.l)
    return _result(val, "c", q=sp.q, n=sp.n, l=sp.l)


def count_hyperplane_disjoint(sp: SpaceParams, pi_in_v: bool) -> CountResult:
    """Vertices inside a typed hyperplane disjoint from a fixed vertex.

    The fixed vertex either lies in the hyperplane or not; both closed
    forms degenerate correctly at n = l (inside case: 0) and n = 1.
    """
    q, n, l = sp.q, sp.n, sp.l
    if pi_in_v:
        val = q ** comb(n, 2)
        for s in range(0, n):
            val *= q ** (l - n + s) - 1
    else:
        val = q ** (l - 1 + comb(n - 1, 2))
        for s in range(1, n):
            val *= q ** (l - n + s) - 1
    return _result(max(val, 0), "hyperplane_disjoint", q=q, n=n, l=l,
                   pi_in_v=pi_in_v)


# ---------------------------------------------------------------------------
# Counts inside F_q**(2n) around three pairwise disjoint n-spaces.
# k = 0 is the degenerate case where the fixed k-space is the zero space.
# ---------------------------------------------------------------------------

def _check_km(k, m, n):
    if not (0 <= k <= m <= n):
        raise BadIndices(f"need 0 <= k <= m <= n, got k={k}, m={m}, n={n}")


def _d_km(q, n, k, m):
    val = q ** ((m - k) * (m + k - 1) // 2) * _gb(n - k, m - k, q)
    for i in range(1, m - k + 1):
        val *= q ** (n - k - i + 1) - 1
    return val


def d_km(q: int, n: int, k: int, m: int) -> CountResult:
    """m-spaces of F_q**(2n) through a fixed k-space avoiding two fixed
    disjoint n-spaces (the k-space avoiding both as well)."""
    _check_km(k, m, n)
    return _result(_d_km(q, n, k, m), "d_km", q=q, n=n, k=k, m=m)


def x_km(q: int, n: int, k: int, m: int) -> CountResult:
    """Pairs (T, S): T a k-space inside the third n-space, S an m-space
    through T avoiding the first two; equals gb(n, k) * d_km."""
    _check_km(k, m, n)
    return _result(_gb(n, k, q) * _d_km(q, n, k, m), "x_km", q=q, n=n, k=k, m=m)


def _z_km(q, n, k, m):
    total = 0
    for i in range(k, m + 1):
        term = _gb(i, k, q) * q ** comb(i - k, 2) * _gb(n, i, q) * _d_km(q, n, i, m)
        total += term if (i - k) % 2 == 0 else -term
    return total


def z_km(q: int, n: int, k: int, m: int) -> CountResult:
    """m-spaces avoiding the first two n-spaces and meeting the third in
    dimension exactly k, by inclusion-exclusion over x_km."""
    _check_km(k, m, n)
    return _result(_z_km(q, n, k, m), "z_km", q=q, n=n, k=k, m=m)


def _z_0m(q, n, m):
    total = 0
    for i in range(0, m + 1):
        term = _gb(m, i, q)
        for j in range(1, m - i + 1):
            term *= q ** (n - i - j + 1) - 1
        total += term if i % 2 == 0 else -term
    return q ** comb(m, 2) * _gb(n, m, q) * total


def z_0m(q: int, n: int, m: int) -> CountResult:
    """m-spaces of F_q**(2n) avoiding all three pairwise disjoint
    n-spaces (closed alternating form)."""
    if not 0 <= m <= n:
        raise BadIndices(f"need 0 <= m <= n, got m={m}, n={n}")
    return _result(_z_0m(q, n, m), "z_0m", q=q, n=n, m=m)


# ---------------------------------------------------------------------------
# Common-disjoint profiles around a disjoint vertex pair.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WCounts:
    """Counts of vertices disjoint from both members of a disjoint pair.

    by_dim[i] buckets them by the dimension of their intersection with
    the 2n-dimensional span of the pair; total is the sum.  The two
    through-point counts divide out incidences with points inside and
    outside the span; they are None when no qualifying point exists
    (q**n = 2) because the dividing denominator vanishes.

    Caution on through_span_point: for q = 2 the census shows the count
    really is the same for every qualifying span point, but for q >= 3
    it is not (the span of a disjoint pair carries a third distinguished
    n-space, its meet with the special l-space, and points sitting on
    the common ruling of that triple see a different count).  The value
    here is the exact incidence average, which is therefore a Fraction
    whenever the division is inexact.  through_outer_point divides
    evenly in every censused case and is kept integral.
    """
    by_dim: tuple
    total: int
    through_span_point: int | Fraction | None
    through_outer_point: int | None


def _w_by_dim(q, n, l):
    out = []
    for i in range(n + 1):
        val = _z_0m(q, n, i) * q ** (n * (n - i)) \
            * _rank_count_or_zero(n - i, l - n, n - i, q)
        out.append(val)
    return tuple(out)


def w_counts(sp: SpaceParams) -> WCounts:
    q, n, l = sp.q, sp.n, sp.l
    by_dim = _w_by_dim(q, n, l)
    total = sum(by_dim)
    span_pts = q ** n - 2  # (gb(2n,1) - 3 gb(n,1)) * (q-1) / (q^n - 1)
    if span_pts <= 0:
        through_span = None
    else:
        num = sum(by_dim[i] * (q ** i - 1) for i in range(1, n + 1))
        through_span = Fraction(num, (q ** n - 1) * (q ** n - 2))
        if through_span.denominator == 1:
            through_span = int(through_span)
    if l == n:
        through_outer = None  # every point lies in the span
    else:
        num = sum(by_dim[i] * (q ** n - q ** i) for i in range(n))
        through_outer = _exact_div(
            num, q ** n * (q ** (l - n) - 1) * (q ** n - 1), "w_sigma_bar")
    return WCounts(by_dim, total, through_span, through_outer)


def w_sigma_both_forms(sp: SpaceParams):
    """The through-span-point count from both printed denominator forms.

    The compact form divides sum W_i (q^i - 1) by (q^n - 1)(q^n - 2); the
    double-counting derivation divides sum W_i gb(i, 1) by
    gb(2n, 1) - 3 gb(n, 1).  They agree identically because the (q - 1)
    factors cancel; both are returned so tests can pin that down.
    """
    q, n = sp.q, sp.n
    by_dim = _w_by_dim(q, n, sp.l)
    compact_den = (q ** n - 1) * (q ** n - 2)
    derived_den = _gb(2 * n, 1, q) - 3 * _gb(n, 1, q)
    if compact_den == 0 or derived_den == 0:
        return None, None
    compact = Fraction(sum(by_dim[i] * (q ** i - 1) for i in range(1, n + 1)),
                       compact_den)
    derived = Fraction(sum(by_dim[i] * _gb(i, 1, q) for i in range(1, n + 1)),
                       derived_den)
    return compact, derived


@dataclass(frozen=True)
class SBounds:
    """Meeting/disjointness counts inside a verified family of size
    x * q**((n-1)l): s1 members meet a fixed member; d2_prime bounds the
    members disjoint from a fixed disjoint pair; s2_prime the members
    meeting both.  The primed values inherit the exact-rational type of
    the through-span-point count."""
    s1: int
    d2_prime: int | Fraction | None
    s2_prime: int | Fraction | None


def s_bounds(sp: SpaceParams, x: int) -> SBounds:
    q, n, l = sp.q, sp.n, sp.l
    dlt = _delta(q, n, l)
    s1 = x * q ** ((n - 1) * l) - (x - 1) * dlt
    wc = w_counts(sp)
    if wc.through_span_point is None:
        return SBounds(s1, None, None)
    d2p = (x - 2) * wc.through_span_point
    s2p = x * q ** ((n - 1) * l) - 2 * (x - 1) * dlt + d2p
    return SBounds(s1, d2p, s2p)


# ---------------------------------------------------------------------------
# Spectra (formula side; the matrix side lives in clforms.spectral).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectraFormulas:
    point_graph: tuple       # ((eig, mult), ...) for the point graph
    gram: tuple              # ((eig, mult), ...) for the incidence Gram matrix
    kneser_eigenvalues: tuple  # lambda_0 .. lambda_n of the disjointness graph
    kneser_dims: tuple         # matching eigenspace dimensions
    incidence_rank: int


def spectra(sp: SpaceParams) -> SpectraFormulas:
    q, n, l = sp.q, sp.n, sp.l
    gb_n1 = _gb(n, 1, q)
    gb_n11 = _gb(n - 1, 1, q)
    point_graph = (
        (q ** (l + 1) * gb_n11, 1),
        (0, (q ** l - 1) * gb_n1),
        (-q ** l, q * gb_n11),
    )
    gram = (
        (q ** ((n - 1) * l) * gb_n1, 1),
        (q ** ((n - 1) * l), (q ** l - 1) * gb_n1),
        (0, q * gb_n11),
    )
    lam, dims = [], []
    for j in range(n + 1):
        v = q ** comb(n, 2)
        for s in range(1, n - j + 1):
            v *= q ** (l - n + s) - 1
        lam.append(v if j % 2 == 0 else -v)
        d = _gb(n, j, q)
        for s in range(j):
            d *= q ** l - q ** s
        dims.append(d)
    rank_m = (q ** l - 1) * gb_n1 + 1
    return SpectraFormulas(point_graph, gram, tuple(lam), tuple(dims), rank_m)


# ---------------------------------------------------------------------------
# Classification-range checks (all comparisons exact integers).
# ---------------------------------------------------------------------------

def meet_dim1_count(sp: SpaceParams) -> CountResult:
    """Vertices through a fixed point meeting a fixed vertex (not on the
    point) in dimension exactly 1."""
    q, n, l = sp.q, sp.n, sp.l
    val = q ** (comb(n - 1, 2) + 1) * _gb(n - 1, 1, q)
    for s in range(2, n):
        val *= q ** (l - n + s) - 1
    return _result(val, "meet_dim1", q=q, n=n, l=l)


def ekr_bound(sp: SpaceParams) -> CountResult:
    """Maximum size of an intersecting vertex family: q**((n-1)l)."""
    return _result(sp.q ** ((sp.n - 1) * sp.l), "ekr", q=sp.q, n=sp.n, l=sp.l)


def hm_bound(sp: SpaceParams) -> CountResult:
    """Second-level maximum for intersecting families with trivial common
    intersection (Hilton-Milner analogue)."""
    q, n, l = sp.q, sp.n, sp.l
    if not (l >= n + 1 >= 3) or (q, l) == (2, n + 1):
        raise OutOfScopeParams(
            f"Hilton-Milner bound needs l >= n+1 >= 3 and (q,l) != (2,n+1); "
            f"got q={q}, n={n}, l={l}")
    if n != 3:
        val = q ** ((n - 1) * l) - _delta(q, n, l) + q ** (n - 1) * (q - 1)
    else:
        val = q ** l * (q ** 2 + q + 1) - q * (q + 1)
    return _result(val, "hm", q=q, n=n, l=l)


def parameter_in_range(sp: SpaceParams, x: int) -> bool:
    """Whether x <= (q-1)**(n/2) * q**((l-2n+1)/2), decided by squaring."""
    q, n, l = sp.q, sp.n, sp.l
    return x * x <= (q - 1) ** n * q ** (l - 2 * n + 1)


def max_x_in_range(sp: SpaceParams) -> int:
    """Largest integer x with x**2 <= (q-1)**n * q**(l-2n+1)."""
    from math import isqrt
    return isqrt((sp.q - 1) ** sp.n * sp.q ** (sp.l - 2 * sp.n + 1))


def packing_bound_holds(sp: SpaceParams, x: int, c: int) -> bool:
    """(c+1)s1 - C(c+1,2)s2' >= x q**((n-1)l): rules out c+1 pairwise
    disjoint members in any verified family of parameter x."""
    sb = s_bounds(sp, x)
    if sb.s2_prime is None:
        raise OutOfScopeParams("packing bound needs the through-span count")
    return (c + 1) * sb.s1 - comb(c + 1, 2) * sb.s2_prime >= x * sp.q ** ((sp.n - 1) * sp.l)


def c_bound_chain_ok(sp: SpaceParams) -> bool:
    """c <= gb(n,1) q**(l(n-2)) < q**(n + l(n-2)) / (q-1), exactly."""
    q, n, l = sp.q, sp.n, sp.l
    if n < 2:
        raise OutOfScopeParams("the chain applies for n >= 2")
    c = q ** ((n - 1) * l) - _delta(q, n, l)
    mid = _gb(n, 1, q) * q ** (l * (n - 2))
    return c <= mid and mid * (q - 1) < q ** (n + l * (n - 2))


@dataclass(frozen=True)
class ClassificationChecks:
    """Exact truth values of the desk-scale classification inequalities
    at one (q, n, l, x)."""
    q: int
    n: int
    l: int
    x: int
    in_range: bool
    ekr_bound: int
    hm_bound: int
    chain_ok: bool                # q**((n-1)l) > delta > w_sigma
    delta_exceeds_x2c: bool       # delta > x^2 c
    wsigma_within_margin: bool    # w_sigma <= delta - c
    packing_excluded: bool        # floor(3x/2) pairwise disjoint impossible
    meet_dim1: int
    hm_exclusion_ok: bool
    packing_c: int                # the implied cap: floor(3x/2) - 1


def classification_bounds(sp: SpaceParams, x: int) -> ClassificationChecks:
    q, n, l = sp.q, sp.n, sp.l
    if not (l >= 2 * n and n >= 2):
        raise OutOfScopeParams(f"checks need l >= 2n >= 4; got n={n}, l={l}")
    if x < 2:
        raise OutOfScopeParams(f"checks need x >= 2; got x={x}")
    dlt = _delta(q, n, l)
    c = q ** ((n - 1) * l) - dlt
    wc = w_counts(sp)
    ws = wc.through_span_point
    sb = s_bounds(sp, x)
    fl = (3 * x) // 2
    in_range = parameter_in_range(sp, x)
    chain_ok = q ** ((n - 1) * l) > dlt > ws
    delta_x2c = dlt > x * x * c
    ws_margin = ws <= dlt - c
    packing = fl * sb.s1 - comb(fl, 2) * sb.s2_prime > x * q ** ((n - 1) * l)
    d = fl - 2
    lhs = (x - 1) * dlt - d * (fl - 3) * sb.s2_prime
    if n != 3:
        rhs = d * (c + q ** (n - 1) * (q - 1))
    else:
        rhs = d * (q ** l * (q ** 2 + q + 1) - q * (q + 1))
    hm_ok = lhs > rhs
    return ClassificationChecks(
        q=q, n=n, l=l, x=x, in_range=in_range,
        ekr_bound=int(ekr_bound(sp)), hm_bound=int(hm_bound(sp)),
        chain_ok=chain_ok, delta_exceeds_x2c=delta_x2c,
        wsigma_within_margin=ws_margin, packing_excluded=packing,
        meet_dim1=int(meet_dim1_count(sp)), hm_exclusion_ok=hm_ok,
        packing_c=fl - 1)


# ---------------------------------------------------------------------------
# Brute-force censuses.
# ---------------------------------------------------------------------------

def census_gaussian_binomial(n: int, k: int, q: int,
                             cap: int = att.DEFAULT_ENUM_CAP) -> int:
    """Count k-subspaces of F_q**n by direct echelon enumeration."""
    return sum(1 for _ in att.enumerate_subspaces(field_new(q), n, k, cap))


def census_rank_count(n: int, l: int, m: int, q: int,
                      cap: int = att.DEFAULT_ENUM_CAP) -> int:
    """Count n x l matrices of rank m by enumerating all q**(nl)."""
    from .errors import CapExceeded
    total = q ** (n * l)
    if total > cap:
        raise CapExceeded(f"matrix census needs {total} items", required=total)
    f = field_new(q)
    count = 0
    for key in range(total):
        entries = att._unfold(q, key, n * l)
        rows = [entries[r * l:(r + 1) * l] for r in range(n)]
        if att._rank_rows_field(f, rows, l) == m:
            count += 1
    return count


def census_count_through(i: int, j: int, sp: SpaceParams) -> int:
    """Count layer-j members through the fixed i-space spanned by the
    first i unit vectors."""
    tau_rows = [tuple(1 if c == r else 0 for c in range(sp.ambient_dim))
                for r in range(i)]
    count = 0
    for S in att.enumerate_typed_subspaces(sp, j, 0):
        if all(S.contains_vector(v) for v in tau_rows):
            count += 1
    return count


def _zero_vertex(sp):
    return att.vertex_from_key(sp, 0)


def _top_identity_vertex(sp):
    entries = [0] * (sp.l * sp.n)
    for i in range(sp.n):
        entries[i * sp.n + i] = 1
    return att.vertex_from_entries(sp, entries)


def census_disjoint_pair(sp: SpaceParams) -> int:
    pi = _zero_vertex(sp)
    return sum(1 for w in att.enumerate_vertices(sp) if att.are_disjoint(w, pi))


def _unit_point(sp):
    """The point (e1, e1): u the first unit n-vector, v the first unit
    l-vector, so it does not lie on the zero-matrix vertex."""
    u = tuple(1 if i == 0 else 0 for i in range(sp.n))
    v = tuple(1 if i == 0 else 0 for i in range(sp.l))
    return att.point_from_pair(sp, u, v)


def census_delta(sp: SpaceParams) -> int:
    pi = _zero_vertex(sp)
    tau = _unit_point(sp)
    return sum(1 for w in att.enumerate_vertices(sp)
               if att.incident(tau, w) and att.are_disjoint(w, pi))


def census_c(sp: SpaceParams) -> int:
    pi = _zero_vertex(sp)
    tau = _unit_point(sp)
    return sum(1 for w in att.enumerate_vertices(sp)
               if att.incident(tau, w) and not att.are_disjoint(w, pi))


def census_hyperplane_disjoint(sp: SpaceParams, pi_in_v: bool) -> int:
    """Census against the hyperplane {(u; w) : w_1 = 0} (a = 0, b = e1),
    whose vertices are exactly those with zero first row."""
    if pi_in_v:
        pi = _zero_vertex(sp)
    else:
        entries = [0] * (sp.l * sp.n)
        entries[0] = 1  # first row nonzero: outside the hyperplane
        pi = att.vertex_from_entries(sp, entries)
    count = 0
    for w in att.enumerate_vertices(sp):
        if any(w.row(0)):
            continue
        if att.are_disjoint(w, pi):
            count += 1
    return count


@lru_cache(maxsize=None)
def _triple_profile(q: int, n: int, m: int, cap: int = att.DEFAULT_ENUM_CAP):
    """Profile every m-subspace of F_q**(2n) against the standard triple.

    The triple: P1 = first coordinate block, P2 = second block, P3 the
    diagonal {(u; u)}.  Returns tuples (disj1, disj2, dim3, gen_mask)
    where gen_mask bit i-1 records containment of the diagonal generator
    e_i + e_{n+i}.
    """
    f = field_new(q)
    amb = 2 * n
    out = []
    gens = []
    for i in range(n):
        v = [0] * amb
        v[i] = 1
        v[n + i] = 1
        gens.append(tuple(v))
    for S in att.enumerate_subspaces(f, amb, m, cap):
        rows = S.basis_rows()
        tails = [r[n:] for r in rows]
        heads = [r[:n] for r in rows]
        d1 = m - att._rank_rows_field(f, tails, n)   # meet with first block
        d2 = m - att._rank_rows_field(f, heads, n)   # meet with second block
        diag = [[f.sub(h, t) for h, t in zip(hr, tr)] for hr, tr in zip(heads, tails)]
        d3 = m - att._rank_rows_field(f, diag, n)
        gen_mask = 0
        for i, g in enumerate(gens):
            if S.contains_vector(g):
                gen_mask |= 1 << i
        out.append((d1 == 0, d2 == 0, d3, gen_mask))
    return out


@lru_cache(maxsize=None)
def _count_subspaces_by_enum(dim: int, k: int, q: int) -> int:
    return sum(1 for _ in att.enumerate_subspaces(field_new(q), dim, k))


def census_d_km(q, n, k, m) -> int:
    want = (1 << k) - 1
    return sum(1 for d1, d2, _, gm in _triple_profile(q, n, m)
               if d1 and d2 and (gm & want) == want)


def census_x_km(q, n, k, m) -> int:
    """Pairs (T, S) counted from the S side: for each qualifying m-space,
    add the number of k-subspaces of its meet with the diagonal."""
    return sum(_count_subspaces_by_enum(d3, k, q)
               for d1, d2, d3, _ in _triple_profile(q, n, m) if d1 and d2)


def census_z_km(q, n, k, m) -> int:
    return sum(1 for d1, d2, d3, _ in _triple_profile(q, n, m)
               if d1 and d2 and d3 == k)


def census_z_0m(q, n, m) -> int:
    return census_z_km(q, n, 0, m)


def _span_profile(sp: SpaceParams):
    """For each vertex: (disjoint from the zero vertex, disjoint from the
    top-identity vertex, dim of meet with their 2n-dim span)."""
    pi = _zero_vertex(sp)
    pi2 = _top_identity_vertex(sp)
    n = sp.n
    f = sp.field
    out = []
    for w in att.enumerate_vertices(sp):
        d1 = att.are_disjoint(w, pi)
        d2 = att.are_disjoint(w, pi2)
        # meet with the span {(u; w) : tail(w) = 0}: kernel of the bottom rows
        bottom = [w.row(r) for r in range(n, sp.l)]
        dim_span = n - att._rank_rows_field(f, bottom, n) if bottom else n
        out.append((d1, d2, dim_span))
    return out


def census_w(sp: SpaceParams):
    """by_dim and total counts of vertices disjoint from a fixed disjoint
    pair, bucketed by meet-dimension with the pair's span."""
    by_dim = [0] * (sp.n + 1)
    for d1, d2, ds in _span_profile(sp):
        if d1 and d2:
            by_dim[ds] += 1
    return tuple(by_dim), sum(by_dim)


def _span_points(sp: SpaceParams, inside: bool):
    """Points inside (resp. outside) the span of the standard disjoint
    pair, excluding points on either member when inside."""
    out = []
    for p in att.enumerate_points(sp):
        tail = p.v[sp.n:]
        in_span = not any(tail)
        if inside:
            if not in_span:
                continue
            if not any(p.v):
                continue                      # on the zero vertex
            if p.v[:sp.n] == p.u:
                continue                      # on the top-identity vertex
            out.append(p)
        elif not in_span:
            out.append(p)
    return out


def census_w_sigma_distribution(sp: SpaceParams) -> dict:
    """Histogram {count: points} of common-disjoint vertices through each
    qualifying span point.  A single bin for q = 2; two bins for q >= 3,
    where the points on the common ruling of the pair's span see fewer."""
    pi = _zero_vertex(sp)
    pi2 = _top_identity_vertex(sp)
    dist = {}
    for tau in _span_points(sp, inside=True):
        c = sum(1 for w in att.enumerate_vertices(sp)
                if att.incident(tau, w)
                and att.are_disjoint(w, pi) and att.are_disjoint(w, pi2))
        dist[c] = dist.get(c, 0) + 1
    return dist


def census_w_sigma(sp: SpaceParams):
    """Exact average of the span-point counts (what the closed form
    computes); an int when the distribution is a single bin."""
    dist = census_w_sigma_distribution(sp)
    avg = Fraction(sum(c * m for c, m in dist.items()), sum(dist.values()))
    return int(avg) if avg.denominator == 1 else avg


def census_w_sigma_bar(sp: SpaceParams, sample: int = 8) -> int:
    """Common-disjoint vertices through an outer point (first `sample`
    outer points in canonical order; counts must agree)."""
    pi = _zero_vertex(sp)
    pi2 = _top_identity_vertex(sp)
    pts = _span_points(sp, inside=False)[:sample]
    counts = set()
    for tau in pts:
        c = sum(1 for w in att.enumerate_vertices(sp)
                if att.incident(tau, w)
                and att.are_disjoint(w, pi) and att.are_disjoint(w, pi2))
        counts.add(c)
    assert len(counts) == 1, f"outer-point counts not constant: {sorted(counts)}"
    return counts.pop()


def census_meet_dim1(sp: SpaceParams) -> int:
    """Vertices through the point (e1, e1) whose meet with the zero
    vertex has dimension exactly 1."""
    pi = _zero_vertex(sp)
    tau = _unit_point(sp)
    return sum(1 for w in att.enumerate_vertices(sp)
               if att.incident(tau, w) and att.dim_intersection(w, pi) == 1)
