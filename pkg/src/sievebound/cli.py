"""Command-line entry point: ``sievebound <command> ...``.

Exit codes: 0 success, 1 a check or reproduction failed, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report as rep
from .combiner import FeasibilityError, combine, get_tables
from .constants import compute_constants
from .empirical import (
    buchstab_check,
    build_sifted_sets,
    census_series,
    switching_structure_check,
    weighted_chain_check,
)
from .integrals import integral_C, integral_I
from .optimizer import (
    G_COLUMNS,
    H_COLUMNS,
    Objective,
    g_config_from,
    h_config_from,
    read_config,
    search_G,
    search_H,
    write_csv,
)
from .sieve_functions import SieveDomainError, cache_path_for, dimension_for, load_or_tabulate


class UsageError(Exception):
    pass


def _out(obj) -> None:
    print(rep.dumps(obj))


def _tables(args):
    cache = getattr(args, "sieve_table_cache", None)
    return get_tables(args.smax, args.step, str(cache) if cache else None)


def cmd_tabulate(args) -> int:
    dim = dimension_for(args.kappa)
    path = Path(args.sieve_table_cache) if args.sieve_table_cache else cache_path_for(dim, args.smax, args.step)
    if path.is_dir():
        path = cache_path_for(dim, args.smax, args.step, path)
    table, hit = load_or_tabulate(dim, args.smax, args.step, path)
    _out({"path": str(path), "cache_hit": hit, "kappa": dim.kappa, "beta": dim.beta, "s_max": table.s_max,
          "step": table.step, "count": table.count, "F_at_s_max": float(table.F_values[-1]),
          "f_at_s_max": float(table.f_values[-1])})
    return 0


def cmd_constants(args) -> int:
    r = compute_constants(args.cutoff, alt_C=args.alt_C, c3_with_prime_two=args.c3_with_prime_two)
    rows = [{"name": k, "value": getattr(r, k).value, "cutoff": r.cutoff, "tail_error": getattr(r, k).tail_bound}
            for k in ("C", "c1", "c2", "c3")]
    if args.json:
        _out(rows)
    else:
        for row in rows:
            print(f"{row['name']:>3} = {row['value']:.10g}  (cutoff {row['cutoff']}, tail <= {row['tail_error']:.3g})")
    return 0


def cmd_integral(args) -> int:
    if args.which == "C":
        if args.theta1 is None:
            raise UsageError("integral C needs --theta1")
        res = integral_C(args.theta1)
    else:
        if None in (args.theta, args.theta1, args.theta2):
            raise UsageError("integral I needs --theta, --theta1 and --theta2")
        res = integral_I(args.theta, args.theta1, args.theta2, _tables(args))
    _out({"value": res.value, "error": res.abs_error_estimate, "evaluations": res.evaluations,
          "converged": res.converged})
    return 0


def cmd_combine(args) -> int:
    mode = {"F": "upper", "f": "lower"}[args.mode]
    res = combine(_tables(args), mode, args.sigma1, args.sigma2)
    _out({"value": res.value, "s1": res.s1, "s2": res.s2, "feasible": True})
    return 0


def cmd_optimize(args) -> int:
    values = read_config(args.config) if args.config else {}
    objective = Objective(_tables(args))
    if args.which == "G":
        cfg = g_config_from(values)
        if args.workers:
            cfg = g_config_from({**values, "workers": str(args.workers)})
        key = (args.smax, args.step, str(args.sieve_table_cache) if args.sieve_table_cache else None)
        res = search_G(cfg, objective, keep_rows=bool(args.csv), tables_key=key)
        if args.csv:
            write_csv(args.csv, G_COLUMNS, res.rows)
        out = {"found": res.found, "theta1": res.theta1, "theta2": res.theta2, "G": res.G_value,
               "evaluations": res.evaluations, "theta1_range": str(cfg.theta1), "theta2_range": str(cfg.theta2),
               "step": cfg.step}
    else:
        cfg = h_config_from(values)
        res = search_H(cfg, objective, keep_rows=bool(args.csv))
        if args.csv:
            write_csv(args.csv, H_COLUMNS, res.rows)
        out = {"found": res.found, "incumbent": res.best.to_dict() if res.best else None,
               "omega_history": res.history, "evaluations": res.evaluations, "steps": list(cfg.steps),
               "refine_rounds": cfg.refine_rounds}
    if args.json:
        Path(args.json).write_text(rep.dumps(out) + "\n")
    _out(out)
    return 0 if out["found"] else 1


def cmd_verify(args) -> int:
    sets = build_sifted_sets(args.x, args.theta1, args.theta2)
    b = buchstab_check(sets)
    out = {"x": args.x, "theta1": args.theta1, "theta2": args.theta2, "A_size": int(sets.A.size),
           "A0_size": int(sets.A0.size),
           "buchstab": {"lhs": b.lhs, "s_z1": b.s_z1, "t_sum": b.t_sum, "residual": b.residual, "pass": b.ok}}
    ok = b.ok
    if args.theta is not None:
        lam = args.lam if args.lam is not None else 0.14
        c = weighted_chain_check(sets, args.theta, lam)
        out["weighted_chain"] = {"theta": args.theta, "lambda": lam, "values": c.values, "checks": c.checks,
                                 "pass": c.ok}
        ok &= c.ok
    if args.theta1 > 0.25:
        s = switching_structure_check(sets)
        out["switching_structure"] = {"counted": s.counted, "violations": s.violations,
                                      "equal_primes": s.equal_primes, "p2_above_sqrt_x": s.p2_above_sqrt_x,
                                      "pass": s.ok}
        ok &= s.ok
    out["pass"] = bool(ok)
    _out(out)
    return 0 if ok else 1


def cmd_census(args) -> int:
    rows = census_series(args.x, args.k)
    if args.csv:
        print("x,count,normalized")
        for r in rows:
            print(f"{r.x},{r.count},{r.normalized:.10g}")
    else:
        _out([{"x": r.x, "k": r.k, "count": r.count, "normalized": r.normalized} for r in rows])
    return 0


def cmd_report(args) -> int:
    if not args.paper_repro:
        rows: list = []
    else:
        rows = rep.headline_repro(Objective(_tables(args)), full_search=args.full_search, workers=args.workers or 1)
    jpath, mpath = rep.emit_report(rows, args.out)
    for r in rows:
        v = "n/a" if r.value is None else f"{r.value:.10g}"
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {v} (target {r.target:.10g} +/- {r.tolerance:g})")
    print(f"wrote {jpath} and {mpath}")
    return 0 if all(r.passed for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sievebound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def table_opts(sp):
        sp.add_argument("--smax", type=float, default=60.0)
        sp.add_argument("--step", type=float, default=1e-4)
        sp.add_argument("--sieve-table-cache", type=Path, default=None,
                        help="cache directory for the two sieve tables (default: $SIEVEBOUND_CACHE_DIR if set)")

    sp = sub.add_parser("tabulate", help="tabulate F and f for one dimension and write the table cache")
    sp.add_argument("--kappa", type=float, required=True, choices=[0.5, 1.0])
    sp.add_argument("--smax", type=float, default=60.0)
    sp.add_argument("--step", type=float, default=1e-4)
    sp.add_argument("--sieve-table-cache", type=Path, default=None, help="cache file or directory")
    sp.set_defaults(func=cmd_tabulate)

    sp = sub.add_parser("constants", help="Euler-product constants C, c1, c2, c3")
    sp.add_argument("--cutoff", type=int, default=10**8)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--alt-C", action="store_true", help="use (p-2)^2 in the p = 1 (mod 4) factor of C")
    sp.add_argument("--c3-with-prime-two", action="store_true", help="include the p = 2 factor in c3")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("integral", help="C(theta1) or I(theta, theta1, theta2)")
    sp.add_argument("which", choices=["C", "I"])
    sp.add_argument("--theta", type=float)
    sp.add_argument("--theta1", type=float)
    sp.add_argument("--theta2", type=float)
    table_opts(sp)
    sp.set_defaults(func=cmd_integral)

    sp = sub.add_parser("combine", help="vector-sieve F(sigma1, sigma2) or f(sigma1, sigma2)")
    sp.add_argument("--mode", choices=["F", "f"], required=True)
    sp.add_argument("--sigma1", type=float, required=True)
    sp.add_argument("--sigma2", type=float, required=True)
    table_opts(sp)
    sp.set_defaults(func=cmd_combine)

    sp = sub.add_parser("optimize", help="search for G > 0 or minimal omega bound with H > 0")
    sp.add_argument("which", choices=["G", "H"])
    sp.add_argument("--config", type=Path, help="key = value file with ranges and steps")
    sp.add_argument("--csv", type=Path, help="write every evaluated cell here")
    sp.add_argument("--json", type=Path, help="also write the incumbent JSON here")
    sp.add_argument("--workers", type=int, default=0)
    table_opts(sp)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("verify", help="exact sieve identities on enumerated sets")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--theta1", type=float, required=True)
    sp.add_argument("--theta2", type=float, required=True)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("census", help="count primes p = m^2 + n^2 + 1 with Omega(p+2) <= k")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--k", type=int, default=11)
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("report", help="headline reproduction report")
    sp.add_argument("--paper-repro", action="store_true", help="run the G and H reproductions")
    sp.add_argument("--full-search", action="store_true", help="scan theta2 over (0, 0.05) instead of [0.020, 0.024]")
    sp.add_argument("--out", type=Path, default=Path("report"))
    sp.add_argument("--workers", type=int, default=0)
    table_opts(sp)
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, FeasibilityError, SieveDomainError, OSError) as exc:
        print(f"sievebound {args.command}: error: {exc}".replace("\n", " "), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
