"""Command-line surface: counting, verification, construction, search,
spectra and inequality grids, all emitting JSON with decimal-string
numbers so arbitrary-precision values survive any consumer.

Exit codes: 0 success, 2 usage or parse failure, 3 identity-check
failure, 4 resource cap.  The matrix memory cap honours the
CLFORMS_CAP_MB environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import attenuated as att
from . import clsets, counting, search, spectral
from .attenuated import SpaceParams
from .errors import (BadIndices, BadParams, CapExceeded, ClformsError,
                     NonIntegerResult, NotPrimePower, OutOfScopeParams,
                     Unsupported)

FILE_MAGIC = "clforms-vertexset v1"


# ---------------------------------------------------------------------------
# JSON helpers: every number becomes a decimal string.
# ---------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, str) else k: _jsonable(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _emit(payload) -> None:
    print(json.dumps(_jsonable(payload), sort_keys=True))


# ---------------------------------------------------------------------------
# Vertex-set files.
# ---------------------------------------------------------------------------

def write_vertexset(path: str, L: clsets.VertexSet, comment: str = "") -> None:
    sp = L.sp
    lines = [f"{FILE_MAGIC} q={sp.q} n={sp.n} l={sp.l}"]
    if comment:
        lines.append(f"# {comment}")
    for key in L.member_keys():
        entries = att._unfold(sp.q, key, sp.n * sp.l)
        lines.append(" ".join(str(e) for e in entries))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_vertexset(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if not raw:
        raise BadParams(f"{path}:1: empty file, missing header")
    header = raw[0].strip()
    if not header.startswith(FILE_MAGIC):
        raise BadParams(f"{path}:1: bad header, expected '{FILE_MAGIC} ...'")
    fields = {}
    for tok in header[len(FILE_MAGIC):].split():
        if "=" not in tok:
            raise BadParams(f"{path}:1: bad header token {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = int(v)
    try:
        sp = att.space(fields["q"], fields["n"], fields["l"])
    except KeyError as exc:
        raise BadParams(f"{path}:1: header missing {exc}") from None
    keys = []
    seen = set()
    for lineno, line in enumerate(raw[1:], start=2):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        if len(parts) != sp.n * sp.l:
            raise BadParams(
                f"{path}:{lineno}: expected {sp.n * sp.l} entries, got {len(parts)}")
        try:
            entries = [int(p) for p in parts]
        except ValueError:
            raise BadParams(f"{path}:{lineno}: non-integer entry") from None
        if any(not 0 <= e < sp.q for e in entries):
            raise BadParams(f"{path}:{lineno}: entry outside [0, q)")
        key = att._fold(sp.q, entries)
        if key in seen:
            raise BadParams(f"{path}:{lineno}: duplicate vertex")
        seen.add(key)
        keys.append(key)
    return sp, clsets.VertexSet.from_keys(sp, keys)


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------

def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise BadParams(f"formula {args.formula!r} needs --{name}")
    return val


def _count_dispatch(args, sp: SpaceParams):
    """Return (value, oracle_callable_or_None, params_shown)."""
    f = args.formula
    if f == "gauss":
        k = _need(args, "k")
        return (int(counting.gaussian_binomial(sp.n, k, args.q)),
                lambda: counting.census_gaussian_binomial(sp.n, k, args.q),
                {"k": k})
    if f == "rank_count":
        m = _need(args, "m")
        return (int(counting.rank_count(sp.n, sp.l, m, args.q)),
                lambda: counting.census_rank_count(sp.n, sp.l, m, args.q),
                {"m": m})
    if f == "through":
        i, j = _need(args, "i"), _need(args, "j")
        return (int(counting.count_through(i, j, sp)),
                lambda: counting.census_count_through(i, j, sp), {"i": i, "j": j})
    if f == "disjoint_pair":
        return (int(counting.count_disjoint_pair(sp)),
                lambda: counting.census_disjoint_pair(sp), {})
    if f == "delta":
        return int(counting.delta(sp)), lambda: counting.census_delta(sp), {}
    if f == "c":
        return int(counting.c_count(sp)), lambda: counting.census_c(sp), {}
    if f == "hyperplane_disjoint_in":
        return (int(counting.count_hyperplane_disjoint(sp, True)),
                lambda: counting.census_hyperplane_disjoint(sp, True), {})
    if f == "hyperplane_disjoint_out":
        return (int(counting.count_hyperplane_disjoint(sp, False)),
                lambda: counting.census_hyperplane_disjoint(sp, False), {})
    if f in ("d_km", "x_km", "z_km"):
        k, m = _need(args, "k"), _need(args, "m")
        fn = {"d_km": counting.d_km, "x_km": counting.x_km, "z_km": counting.z_km}[f]
        cz = {"d_km": counting.census_d_km, "x_km": counting.census_x_km,
              "z_km": counting.census_z_km}[f]
        return (int(fn(args.q, sp.n, k, m)),
                lambda: cz(args.q, sp.n, k, m), {"k": k, "m": m})
    if f == "z_0m":
        m = _need(args, "m")
        return (int(counting.z_0m(args.q, sp.n, m)),
                lambda: counting.census_z_0m(args.q, sp.n, m), {"m": m})
    if f == "w_i":
        i = _need(args, "i")
        return (counting.w_counts(sp).by_dim[i],
                lambda: counting.census_w(sp)[0][i], {"i": i})
    if f == "w":
        return (counting.w_counts(sp).total,
                lambda: counting.census_w(sp)[1], {})
    if f == "w_sigma":
        return (counting.w_counts(sp).through_span_point,
                lambda: counting.census_w_sigma(sp), {})
    if f == "w_sigma_bar":
        return (counting.w_counts(sp).through_outer_point,
                lambda: counting.census_w_sigma_bar(sp), {})
    if f in ("s1", "d2_prime", "s2_prime"):
        x = _need(args, "x")
        sb = counting.s_bounds(sp, x)
        return getattr(sb, f), None, {"x": x}
    if f == "meet_dim1":
        return (int(counting.meet_dim1_count(sp)),
                lambda: counting.census_meet_dim1(sp), {})
    if f == "ekr":
        return int(counting.ekr_bound(sp)), lambda: search.ekr_check(sp), {}
    if f == "hm":
        return int(counting.hm_bound(sp)), None, {}
    if f == "rank_m":
        return (counting.spectra(sp).incidence_rank,
                lambda: spectral.incidence_rank(sp), {})
    raise BadParams(f"unknown formula {args.formula!r}")


FORMULAS = ["gauss", "rank_count", "through", "disjoint_pair", "delta", "c",
            "hyperplane_disjoint_in", "hyperplane_disjoint_out",
            "d_km", "x_km", "z_km", "z_0m", "w_i", "w", "w_sigma",
            "w_sigma_bar", "s1", "d2_prime", "s2_prime", "meet_dim1",
            "ekr", "hm", "rank_m"]


def cmd_count(args) -> int:
    sp = _make_space(args)
    value, oracle_fn, shown = _count_dispatch(args, sp)
    payload = {"formula": args.formula,
               "params": {"q": args.q, "n": args.n, "l": args.l, **shown},
               "value": value}
    code = 0
    if args.oracle:
        if oracle_fn is None:
            raise BadParams(f"formula {args.formula!r} has no standalone oracle")
        oracle = oracle_fn()
        payload["oracle"] = oracle
        payload["match"] = oracle == value
        if not payload["match"]:
            code = 3
    _emit(payload)
    return code


# ---------------------------------------------------------------------------
# verify / construct
# ---------------------------------------------------------------------------

def _verdict_payload(v: clsets.CLVerdict):
    out = {"is_cl": v.is_cl, "x": v.x, "size": v.size,
           "per_definition": v.per_definition}
    if v.witnesses:
        out["witnesses"] = {k: w if isinstance(w, str) else _jsonable(w)
                            for k, w in v.witnesses.items()}
    return out


def cmd_verify(args) -> int:
    sp, L = read_vertexset(args.file)
    v = clsets.verdict(L, level=args.level, spreads=args.spreads, seed=args.seed)
    _emit(_verdict_payload(v))
    return 0


def cmd_construct(args) -> int:
    sp = _make_space(args)
    kind = args.kind
    if kind == "pencil":
        p = att.enumerate_points(sp)[args.index]
        L = clsets.point_pencil(sp, p)
    elif kind == "hyperplane":
        h = att.enumerate_hyperplanes(sp)[args.index]
        L = clsets.hyperplane_set(sp, h)
    elif kind == "pencil-plus-hyperplane":
        p = att.enumerate_points(sp)[args.index]
        h = att.enumerate_hyperplanes(sp)[args.index2]
        if h.contains_point(p):
            raise BadParams("the point must not lie in the hyperplane")
        L = clsets.closure(clsets.point_pencil(sp, p),
                           clsets.hyperplane_set(sp, h), "union_disjoint")
    elif kind == "pencil-union":
        L = clsets.pencil_union_family(sp, args.size)
    elif kind == "nontrivial":
        L = clsets.nontrivial_family(sp, args.y)
    else:
        raise BadParams(f"unknown construction kind {kind!r}")
    v = clsets.verdict(L, level="fast")
    payload = {"kind": kind, "size": L.size, "verdict": _verdict_payload(v)}
    if args.out:
        write_vertexset(args.out, L, comment=f"constructed: {kind}")
        payload["file"] = args.out
    _emit(payload)
    return 0


# ---------------------------------------------------------------------------
# search / spectra / inequalities
# ---------------------------------------------------------------------------

def cmd_search(args) -> int:
    sp = _make_space(args)
    report = search.exhaustive(sp, x=args.x, method=args.method,
                               threads=args.threads)
    payload = {
        "q": report.q, "n": report.n, "l": report.l,
        "method": report.method,
        "x_filter": report.x_filter,
        "by_parameter": {str(k): v for k, v in report.by_parameter.items()},
        "sets_found": len(report.sets),
        "sets": [str(b) for b in report.sets],
    }
    if args.out:
        import os
        os.makedirs(args.out, exist_ok=True)
        for i, bits in enumerate(report.sets):
            write_vertexset(os.path.join(args.out, f"set-{i:05d}.vs"),
                            clsets.VertexSet(sp, bits))
        payload["out_dir"] = args.out
    print(f"elapsed: {report.elapsed:.3f}s", file=sys.stderr)
    _emit(payload)
    return 0


def cmd_spectra(args) -> int:
    sp = _make_space(args)
    sf = counting.spectra(sp)
    rank_exact = spectral.incidence_rank(sp)
    rep = spectral.kneser_spectrum_report(sp)
    kernel_ok = all(spectral.verify_disjoint_kernel_identity(sp, w)
                    for w in att.enumerate_vertices(sp))
    checks = {
        "rank_ok": rank_exact == sf.incidence_rank,
        "gram_ok": spectral.gram_check(sp),
        "spectrum_ok": (rep.annihilated and rep.dims_match
                        and rep.row_sum_ok and rep.dims_sum_ok),
        "kernel_identity_ok": kernel_ok,
    }
    payload = {
        "params": {"q": args.q, "n": args.n, "l": args.l},
        "incidence_rank": rank_exact,
        "point_graph_eigenvalues": [list(t) for t in sf.point_graph],
        "gram_eigenvalues": [list(t) for t in sf.gram],
        "disjointness_eigenvalues": list(sf.kneser_eigenvalues),
        "eigenspace_dims": list(sf.kneser_dims),
        "checks": checks,
    }
    _emit(payload)
    return 0 if all(checks.values()) else 3


def _parse_grid(spec: str):
    """Parse 'q=2,3;n=2;l=4..6' into a list of (q, n, l) triples."""
    vals = {}
    for part in spec.split(";"):
        if "=" not in part:
            raise BadParams(f"bad grid component {part!r}")
        key, body = part.split("=", 1)
        key = key.strip()
        items = []
        for tok in body.split(","):
            tok = tok.strip()
            if ".." in tok:
                lo, hi = tok.split("..", 1)
                items.extend(range(int(lo), int(hi) + 1))
            else:
                items.append(int(tok))
        vals[key] = items
    for key in ("q", "n", "l"):
        if key not in vals:
            raise BadParams(f"grid is missing {key!r}")
    return [(q, n, l) for q in vals["q"] for n in vals["n"] for l in vals["l"]]


def cmd_inequalities(args) -> int:
    rows = []
    all_ok = True
    for q, n, l in _parse_grid(args.grid):
        sp = att.space(q, n, l)
        xs = [args.x] if args.x is not None else \
            list(range(2, counting.max_x_in_range(sp) + 1))
        for x in xs:
            try:
                checks = counting.classification_bounds(sp, x)
            except OutOfScopeParams as exc:
                rows.append({"q": q, "n": n, "l": l, "x": x,
                             "out_of_scope": str(exc)})
                continue
            row = {
                "q": q, "n": n, "l": l, "x": x,
                "in_range": checks.in_range,
                "chain_ok": checks.chain_ok,
                "delta_exceeds_x2c": checks.delta_exceeds_x2c,
                "wsigma_within_margin": checks.wsigma_within_margin,
                "packing_excluded": checks.packing_excluded,
                "hm_exclusion_ok": checks.hm_exclusion_ok,
                "c_bound_chain_ok": counting.c_bound_chain_ok(sp),
            }
            if checks.in_range:
                ok = (row["chain_ok"] and row["delta_exceeds_x2c"]
                      and row["wsigma_within_margin"] and row["packing_excluded"]
                      and row["hm_exclusion_ok"] and row["c_bound_chain_ok"])
                row["row_ok"] = ok
                all_ok = all_ok and ok
            rows.append(row)
    _emit({"rows": rows, "all_ok": all_ok})
    return 0 if all_ok else 3


# ---------------------------------------------------------------------------
# Entry point.
# ---------------------------------------------------------------------------

def _make_space(args) -> SpaceParams:
    sp = att.space(args.q, args.n, args.l)
    if getattr(args, "cap", None):
        sp = SpaceParams(args.q, args.n, args.l, enumeration_cap=args.cap)
    return sp


def _add_space_args(p):
    p.add_argument("--q", type=int, required=True, help="field order (prime power, <= 16)")
    p.add_argument("--n", type=int, required=True, help="vertex dimension")
    p.add_argument("--l", type=int, required=True, help="special-space dimension (>= n)")
    p.add_argument("--cap", type=int, default=None, help="enumeration cap override")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="clforms",
        description=__doc__.splitlines()[0],
        epilog="Set CLFORMS_CAP_MB to bound dense matrix memory.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="evaluate a counting formula, optionally vs its census")
    _add_space_args(p)
    p.add_argument("--formula", required=True, choices=FORMULAS)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force census")
    for opt in ("i", "j", "k", "m", "x"):
        p.add_argument(f"--{opt}", type=int, default=None)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("verify", help="run the membership verdict on a vertex-set file")
    p.add_argument("file")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.add_argument("--spreads", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("construct", help="build a standard family and optionally write it")
    _add_space_args(p)
    p.add_argument("--kind", required=True,
                   choices=["pencil", "hyperplane", "pencil-plus-hyperplane",
                            "pencil-union", "nontrivial"])
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--index2", type=int, default=0)
    p.add_argument("--size", type=int, default=1)
    p.add_argument("--y", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("search", help="enumerate all families passing the membership identity")
    _add_space_args(p)
    p.add_argument("--x", type=int, default=None)
    p.add_argument("--method", default="auto",
                   choices=["auto", "full_power_set", "kernel_constrained",
                            "fixed_x_subsets"])
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="directory for one file per found set")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("spectra", help="verify the exact spectral identities")
    _add_space_args(p)
    p.set_defaults(fn=cmd_spectra)

    p = sub.add_parser("inequalities",
                       help="evaluate the classification inequalities over a grid")
    p.add_argument("--grid", required=True, help="e.g. 'q=2,3;n=2;l=4..6'")
    p.add_argument("--x", type=int, default=None, help="single x instead of the full range")
    p.set_defaults(fn=cmd_inequalities)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except CapExceeded as exc:
        print(json.dumps({"error": "cap_exceeded", "message": str(exc)}))
        return 4
    except NonIntegerResult as exc:
        print(json.dumps({"error": "identity_failure", "message": str(exc)}))
        return 3
    except (NotPrimePower, Unsupported, BadParams, BadIndices,
            OutOfScopeParams, FileNotFoundError) as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}))
        return 2
    except ClformsError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
