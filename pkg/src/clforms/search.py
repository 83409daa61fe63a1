"""Exhaustive enumeration of member families and extremal-family sizes.

The searched predicate is the exact per-vertex disjointness census (the
same identity the verdict uses), with kernel orthogonality available
both as an alternative search method and as the independent
re-verification applied to every hit.  Reports are deterministic:
results are merged in canonical bit-vector order whatever the chunking.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import attenuated as att
from . import counting, spectral
from .attenuated import SpaceParams
from .clsets import VertexSet
from .errors import BadParams, CapExceeded

FULL_POWER_SET_LIMIT = 16
DEFAULT_NODE_CAP = 10 ** 8


@dataclass
class SearchReport:
    q: int
    n: int
    l: int
    method: str
    x_filter: int | None
    by_parameter: dict            # x (Fraction) -> count of families found
    sets: tuple                   # bit vectors in increasing canonical order
    elapsed: float = field(default=0.0, compare=False)

    def vertex_sets(self, sp: SpaceParams):
        return [VertexSet(sp, b) for b in self.sets]


def _passes_census(sp: SpaceParams, bits: int, masks, dlt: int, denom: int) -> bool:
    size = bits.bit_count()
    for i, m in enumerate(masks):
        b = bits >> i & 1
        if (bits & m).bit_count() * denom != (size - b * denom) * dlt:
            return False
    return True


def _census_chunk(sp, lo, hi, masks, dlt, denom, size_target):
    found = []
    for bits in range(lo, hi):
        if size_target is not None and bits.bit_count() != size_target:
            continue
        if _passes_census(sp, bits, masks, dlt, denom):
            found.append(bits)
    return found


def _full_power_set(sp: SpaceParams, x, threads: int):
    total = sp.n_vertices
    if total > FULL_POWER_SET_LIMIT:
        raise CapExceeded(f"power set over {total} vertices is out of range",
                          required=1 << total)
    masks = att.disjointness_masks(sp)
    dlt = int(counting.delta(sp))
    denom = sp.q ** ((sp.n - 1) * sp.l)
    size_target = None if x is None else x * denom
    space_size = 1 << total
    threads = max(1, threads)
    bounds = [space_size * i // threads for i in range(threads + 1)]
    chunks = [(bounds[i], bounds[i + 1]) for i in range(threads)]
    if threads == 1:
        results = [_census_chunk(sp, lo, hi, masks, dlt, denom, size_target)
                   for lo, hi in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda c: _census_chunk(sp, c[0], c[1], masks, dlt, denom, size_target),
                chunks))
    found = [b for chunk in results for b in chunk]
    found.sort()
    return found


def _kernel_dfs(sp: SpaceParams, x, node_cap: int):
    """Depth-first 0/1 assignment in canonical vertex order.

    Each kernel vector of the incidence matrix contributes one exact
    linear equation; partial sums are pruned against the best the
    remaining suffix could still contribute on either side.
    """
    total = sp.n_vertices
    kb = spectral.incidence_kernel_basis(sp)
    nk = len(kb)
    # suffix extrema: what the vertices >= i can still add to each dot
    suff_pos = [[0] * (total + 1) for _ in range(nk)]
    suff_neg = [[0] * (total + 1) for _ in range(nk)]
    for t, vec in enumerate(kb):
        for i in range(total - 1, -1, -1):
            suff_pos[t][i] = suff_pos[t][i + 1] + (vec[i] if vec[i] > 0 else 0)
            suff_neg[t][i] = suff_neg[t][i + 1] + (vec[i] if vec[i] < 0 else 0)
    denom = sp.q ** ((sp.n - 1) * sp.l)
    size_target = None if x is None else x * denom

    found = []
    dots = [0] * nk
    nodes = 0

    def rec(i, bits, count):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise CapExceeded(f"kernel search exceeded {node_cap} nodes",
                              required=nodes)
        for t in range(nk):
            d = dots[t]
            if d + suff_pos[t][i] < 0 or d + suff_neg[t][i] > 0:
                return
        if size_target is not None:
            if count > size_target or count + (total - i) < size_target:
                return
        if i == total:
            if all(d == 0 for d in dots):
                found.append(bits)
            return
        rec(i + 1, bits, count)  # leave vertex i out
        for t in range(nk):
            dots[t] += kb[t][i]
        rec(i + 1, bits | (1 << i), count + 1)
        for t in range(nk):
            dots[t] -= kb[t][i]

    rec(0, 0, 0)
    found.sort()
    return found


def _fixed_x_dfs(sp: SpaceParams, x: int, node_cap: int):
    if x is None:
        raise BadParams("fixed-size search needs an explicit parameter")
    return _kernel_dfs(sp, x, node_cap)


def exhaustive(sp: SpaceParams, x: int | None = None, method: str = "auto",
               threads: int = 1, node_cap: int = DEFAULT_NODE_CAP) -> SearchReport:
    """Find every vertex subset passing the membership identity.

    Methods: full_power_set tests all 2**V subsets against the
    disjointness census; kernel_constrained and fixed_x_subsets walk the
    0/1 assignment tree pruned by the incidence-kernel equations.  Every
    hit is re-verified with the method not used to find it.
    """
    t0 = time.monotonic()
    if method == "auto":
        method = ("full_power_set" if sp.n_vertices <= FULL_POWER_SET_LIMIT
                  else "kernel_constrained")
    if method == "full_power_set":
        found = _full_power_set(sp, x, threads)
        recheck = "kernel"
    elif method == "kernel_constrained":
        found = _kernel_dfs(sp, x, node_cap)
        recheck = "census"
    elif method == "fixed_x_subsets":
        found = _fixed_x_dfs(sp, x, node_cap)
        recheck = "census"
    else:
        raise BadParams(f"unknown search method {method!r}")

    denom = sp.q ** ((sp.n - 1) * sp.l)
    if recheck == "kernel":
        kb = spectral.incidence_kernel_basis(sp)
        for bits in found:
            mkeys = VertexSet(sp, bits).member_keys()
            for vec in kb:
                assert sum(vec[k] for k in mkeys) == 0, \
                    "census hit fails kernel orthogonality"
    else:
        masks = att.disjointness_masks(sp)
        dlt = int(counting.delta(sp))
        for bits in found:
            assert _passes_census(sp, bits, masks, dlt, denom), \
                "kernel hit fails the disjointness census"

    by_param = {}
    for bits in found:
        xr = Fraction(bits.bit_count(), denom)
        by_param[xr] = by_param.get(xr, 0) + 1
    return SearchReport(sp.q, sp.n, sp.l, method, x,
                        dict(sorted(by_param.items())), tuple(found),
                        time.monotonic() - t0)


# ---------------------------------------------------------------------------
# Extremal families via exact branch-and-bound max clique.
# ---------------------------------------------------------------------------

def _max_clique(adj) -> int:
    """Maximum clique size; adj[i] is the neighbour bitmask of vertex i.

    Branch and bound with a greedy colouring bound.
    """
    n = len(adj)
    best = 0

    def expand(size, cand):
        nonlocal best
        if cand == 0:
            if size > best:
                best = size
            return
        order = []
        uncolored = cand
        color = 0
        while uncolored:
            color += 1
            q = uncolored
            while q:
                v = (q & -q).bit_length() - 1
                q &= ~((1 << v) | adj[v])
                uncolored &= ~(1 << v)
                order.append((v, color))
        for v, c in reversed(order):
            if size + c <= best:
                return
            expand(size + 1, cand & adj[v])
            cand &= ~(1 << v)

    expand(0, (1 << n) - 1)
    return best


def _restricted_adjacency(L: VertexSet, want_disjoint: bool):
    sp = L.sp
    members = L.members()
    k = len(members)
    adj = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            disjoint = att.are_disjoint(members[i], members[j])
            if disjoint == want_disjoint:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def max_disjoint_in(L: VertexSet) -> int:
    """Largest number of pairwise disjoint members (exact)."""
    if L.size > 4096:
        raise CapExceeded(f"set of {L.size} members is beyond the search cap",
                          required=L.size)
    if L.size == 0:
        return 0
    return _max_clique(_restricted_adjacency(L, want_disjoint=True))


def max_intersecting_in(L: VertexSet) -> int:
    """Largest pairwise-meeting subfamily (exact)."""
    if L.size > 4096:
        raise CapExceeded(f"set of {L.size} members is beyond the search cap",
                          required=L.size)
    if L.size == 0:
        return 0
    return _max_clique(_restricted_adjacency(L, want_disjoint=False))


def ekr_check(sp: SpaceParams) -> int:
    """Exact maximum intersecting family size over all vertices."""
    if sp.n_vertices > 256:
        raise CapExceeded(f"{sp.n_vertices} vertices exceed the extremal-search cap",
                          required=sp.n_vertices)
    return max_intersecting_in(VertexSet.full(sp))
