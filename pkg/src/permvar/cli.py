"""Command-line surface: permanents, ranks, ideals, Groebner data, torus
types, slices, the component census and the reproduction suite.

Exit codes: 0 all checks passed, 1 a check or case failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import experiments
from .config import CliConfig, load_config
from .errors import GroebnerTimeout, StructuralError
from .groebner import (
    buchberger,
    hilbert_degree,
    ideal_dimension,
    load_ideal_file,
    over_prime,
    saturate,
)
from .permanent import (
    GenericMatrixSpec,
    derivative_matrices,
    kirkup_matrix,
    matrix_from_json,
    perm_numeric,
    permanental_ideal,
    prk,
)
from .ring import GF, QQ, MonomialOrder, PolyRing, poly_from_text
from .torus import classify_type


def _common_flags(sub):
    sub.add_argument("--prime", type=int, default=None)
    sub.add_argument("--prime2", type=int, default=None)
    sub.add_argument("--order", choices=["degrevlex", "lex"], default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--timeout", type=float, default=None, dest="timeout_s")
    sub.add_argument("--json", action="store_true")
    sub.add_argument(
        "--tier", choices=["default", "extended"], default=None,
        help="extended unlocks the long-running reproduction cases",
    )


def _matrix_arg(sub, required=True):
    grp = sub.add_mutually_exclusive_group(required=required)
    grp.add_argument("--matrix", help="inline JSON grid, e.g. '[[1,1],[1,-1]]'")
    grp.add_argument("--matrix-file", help="path to a JSON grid file")


def _read_matrix(args):
    if getattr(args, "matrix", None):
        return matrix_from_json(args.matrix)
    with open(args.matrix_file) as fh:
        return matrix_from_json(fh.read())


def _read_ideal(path: str, prime: int | None, order_tag: str | None):
    order = MonomialOrder.from_tag(order_tag or "degrevlex")
    domain = GF(prime) if prime else QQ
    return load_ideal_file(path, domain, order)


def _emit(args, payload: dict, text_lines):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for ln in text_lines:
            print(ln)


def _cfg(args) -> CliConfig:
    return load_config(
        prime=getattr(args, "prime", None),
        prime2=getattr(args, "prime2", None),
        order=getattr(args, "order", None),
        seed=getattr(args, "seed", None),
        timeout_s=getattr(args, "timeout_s", None),
        output="json" if getattr(args, "json", False) else None,
        tier=getattr(args, "tier", None),
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="permvar",
        description="Exact computations on permanental ideals and their strata.",
    )
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("perm", help="permanent of a constant matrix")
    _matrix_arg(p)
    p.add_argument("--method", choices=["ryser", "glynn"], default="ryser")
    _common_flags(p)

    p = sp.add_parser("prk", help="permanental rank of a constant matrix")
    _matrix_arg(p)
    _common_flags(p)

    p = sp.add_parser("ideal", help="ideal constructions")
    isub = p.add_subparsers(dest="ideal_command", required=True)
    pg = isub.add_parser("gen", help="print permanental-ideal generators")
    pg.add_argument("--k", type=int, required=True)
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--h", type=int, default=None)
    pg.add_argument(
        "--pattern", choices=["generic", "hankel2xn", "circulant"], default="generic"
    )
    pg.add_argument("--period", type=int, default=None)
    _common_flags(pg)

    for name, help_ in (
        ("gb", "reduced Groebner basis of an ideal file"),
        ("dim", "dimension/codimension report of an ideal file"),
        ("degree", "Hilbert-series degree of a homogeneous ideal file"),
    ):
        p = sp.add_parser(name, help=help_)
        p.add_argument("--ideal-file", required=True)
        p.add_argument(
            "--rational", action="store_true",
            help="compute over QQ instead of F_p (records coefficient-size telemetry)",
        )
        _common_flags(p)

    p = sp.add_parser("saturate", help="saturate an ideal file by a polynomial")
    p.add_argument("--ideal-file", required=True)
    p.add_argument("--by", help="polynomial in canonical text form")
    p.add_argument(
        "--by-all-vars", action="store_true", help="saturate by the product of all variables"
    )
    _common_flags(p)

    p = sp.add_parser("kirkup", help="print a Kirkup matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    _common_flags(p)

    for mode, help_ in (("b1", "symmetric sub-permanent matrix, one scaled row"),
                        ("lp", "symmetric sub-permanent matrix, two scaled rows")):
        p = sp.add_parser(mode, help=help_)
        _matrix_arg(p)
        _common_flags(p)

    p = sp.add_parser("type", help="corank type report at a probe point")
    _matrix_arg(p)
    p.add_argument("--mode", choices=["B1", "L"], required=True)
    _common_flags(p)

    p = sp.add_parser("slice", help="print a slice matrix; optionally its height bound")
    p.add_argument(
        "--kind",
        choices=["hankel2xn", "circulant3", "circulant4", "circulant2xn"],
        required=True,
    )
    p.add_argument("--param", type=int, default=None, help="n or k where applicable")
    p.add_argument("--bound", action="store_true", help="compute the codimension bound")
    _common_flags(p)

    p = sp.add_parser("census", help="component census of the 2xn permanental locus")
    p.add_argument("--n", type=int, required=True, choices=[3, 4])
    _common_flags(p)

    p = sp.add_parser(
        "reproduce",
        help="run registered reproduction cases",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Registered case ids:\n"
        + "\n".join(f"  {cid}" for cid in experiments.case_ids()),
    )
    p.add_argument("case", help="case id or 'all'")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", help="append JSON-lines reports to this file")
    _common_flags(p)

    return ap


def _run_perm(args) -> int:
    mat = _read_matrix(args)
    val = perm_numeric(mat, args.method)
    _emit(args, {"permanent": str(val), "method": args.method}, [str(val)])
    return 0


def _run_prk(args) -> int:
    mat = _read_matrix(args)
    val = prk(mat)
    _emit(args, {"prk": val}, [str(val)])
    return 0


def _run_ideal_gen(args) -> int:
    spec = GenericMatrixSpec(args.k, args.n, h=args.h, pattern=args.pattern, period=args.period)
    gens = permanental_ideal(spec)
    _emit(
        args,
        {"generators": [g.text() for g in gens]},
        [g.text() for g in gens],
    )
    return 0


def _gb_of_file(args, cfg):
    prime = None if getattr(args, "rational", False) else cfg.prime
    gens = _read_ideal(args.ideal_file, prime, args.order)
    return buchberger(gens, timeout_s=cfg.timeout_s), gens


def _run_gb(args, cfg) -> int:
    G, _ = _gb_of_file(args, cfg)
    payload = {
        "basis": [g.text() for g in G.gens],
        "basis_size": len(G.gens),
        "order": G.order.tag(),
        "field": G.ring.domain.tag(),
        "prime": None if getattr(args, "rational", False) else cfg.prime,
        "seed": cfg.seed,
        "stats": G.stats,
    }
    _emit(args, payload, [g.text() for g in G.gens] + [f"# size {len(G.gens)}"])
    return 0


def _dim_payload(G, cfg) -> dict:
    rep = ideal_dimension(G)
    out = {
        "dim": rep.dim,
        "codim": rep.codim,
        "prime": cfg.prime,
        "order": G.order.tag(),
        "seed": cfg.seed,
        "wall_ms": G.stats.get("wall_ms"),
        "basis_size": len(G.gens),
        "independent_set": list(rep.independent_set),
    }
    if rep.degree is not None:
        out["degree"] = rep.degree
    return out


def _run_dim(args, cfg) -> int:
    G, _ = _gb_of_file(args, cfg)
    payload = _dim_payload(G, cfg)
    _emit(args, payload, [f"dim {payload['dim']}  codim {payload['codim']}"])
    return 0


def _run_degree(args, cfg) -> int:
    G, _ = _gb_of_file(args, cfg)
    deg = hilbert_degree(G)
    payload = _dim_payload(G, cfg)
    payload["degree"] = deg
    _emit(args, payload, [f"degree {deg}"])
    return 0


def _run_saturate(args, cfg) -> int:
    gens = _read_ideal(args.ideal_file, cfg.prime, args.order)
    ring = gens[0].ring
    if args.by_all_vars:
        f = ring.one
        for g in ring.gens():
            f = f * g
    elif args.by:
        f = poly_from_text(args.by, ring)
    else:
        print("saturate needs --by or --by-all-vars", file=sys.stderr)
        return 2
    sat = saturate(gens, f, timeout_s=cfg.timeout_s)
    _emit(args, {"generators": [g.text() for g in sat]}, [g.text() for g in sat])
    return 0


def _run_kirkup(args) -> int:
    K = kirkup_matrix(args.k)
    rows = K.as_lists()
    lines = [" ".join(f"{x:6d}" for x in r) for r in rows]
    payload = {"k": args.k, "matrix": rows}
    if args.verify:
        vanish = all(
            perm_numeric([[r[c] for c in range(args.k + 1) if c != j] for r in rows]) == 0
            for j in range(args.k + 1)
        )
        payload["all_maximal_permanents_vanish"] = vanish
        lines.append(f"all {args.k}x{args.k} permanents vanish: {str(vanish).lower()}")
        _emit(args, payload, lines)
        return 0 if vanish else 1
    _emit(args, payload, lines)
    return 0


def _run_derived(args, mode: str) -> int:
    mat = _read_matrix(args)
    B = derivative_matrices(mat, mode)
    _emit(
        args,
        {"mode": mode, "matrix": [[str(x) for x in r] for r in B]},
        [" ".join(str(x) for x in r) for r in B],
    )
    return 0


def _run_type(args, cfg) -> int:
    mat = _read_matrix(args)
    rep = classify_type(mat, args.mode, seed=cfg.seed)
    payload = rep.to_json()
    _emit(
        args,
        payload,
        [f"rank {rep.rank}  corank {rep.corank}  type {rep.type}",
         f"kernel basis: {[list(v) for v in rep.kernel_basis]}"],
    )
    return 0


def _run_slice(args, cfg) -> int:
    M = experiments.build_slice(args.kind, args.param)
    lines = [" ".join(e.text() for e in row) for row in M.rows]
    payload = {"kind": args.kind, "entries": [[e.text() for e in row] for row in M.rows]}
    if args.bound:
        k, n = M.dims
        gens = over_prime(permanental_ideal(GenericMatrixSpec(k, n)), cfg.prime)
        target = PolyRing(M.ring.universe, GF(cfg.prime))
        slice_map = experiments._slice_map_for(M, k, n, target)
        ht = experiments.slice_codim_bound(gens, slice_map, target, timeout_s=cfg.timeout_s)
        payload["ht"] = ht
        payload["codim_lower_bound"] = ht
        lines.append(f"ht {ht} (codimension lower bound {ht})")
    _emit(args, payload, lines)
    return 0


def _run_census(args, cfg) -> int:
    rep = experiments.component_census_2xn(args.n, cfg, timeout_s=cfg.timeout_s)
    _emit(
        args,
        rep.to_json(),
        [f"{k}: {v}" for k, v in rep.measured.items()] + [f"passed: {rep.passed}"],
    )
    return 0 if rep.passed else 1


def _run_reproduce(args, cfg) -> int:
    if args.case == "all":
        reports = experiments.reproduce_all(cfg, tier=cfg.tier)
    else:
        spec = experiments.registry().get(args.case)
        if spec is None:
            print(
                f"unknown case {args.case!r}; known ids: {', '.join(experiments.case_ids())}",
                file=sys.stderr,
            )
            return 2
        if spec.tier == "extended" and cfg.tier != "extended":
            print(
                f"case {args.case} is extended tier; pass --tier extended", file=sys.stderr
            )
            return 2
        reports = [experiments.reproduce(args.case, cfg, n=args.n, k=args.k)]
    ok = True
    for rep in reports:
        ok &= rep.passed
        if args.out:
            experiments.append_report(rep, args.out)
        if args.json:
            print(json.dumps(rep.to_json(), sort_keys=True))
        else:
            print(f"[{'PASS' if rep.passed else 'FAIL'}] {rep.id} ({rep.wall_ms} ms)")
            if not rep.passed:
                print(f"  measured: {rep.measured}")
                print(f"  expected: {rep.expected}")
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    cfg = _cfg(args)
    try:
        if args.command == "perm":
            return _run_perm(args)
        if args.command == "prk":
            return _run_prk(args)
        if args.command == "ideal":
            return _run_ideal_gen(args)
        if args.command == "gb":
            return _run_gb(args, cfg)
        if args.command == "dim":
            return _run_dim(args, cfg)
        if args.command == "degree":
            return _run_degree(args, cfg)
        if args.command == "saturate":
            return _run_saturate(args, cfg)
        if args.command == "kirkup":
            return _run_kirkup(args)
        if args.command == "b1":
            return _run_derived(args, "B1")
        if args.command == "lp":
            return _run_derived(args, "L")
        if args.command == "type":
            return _run_type(args, cfg)
        if args.command == "slice":
            return _run_slice(args, cfg)
        if args.command == "census":
            return _run_census(args, cfg)
        if args.command == "reproduce":
            return _run_reproduce(args, cfg)
        print(f"unknown command {args.command!r}", file=sys.stderr)
        return 2
    except GroebnerTimeout as e:
        print(f"timeout: {e} (partial stats: {e.stats})", file=sys.stderr)
        return 1
    except (StructuralError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
