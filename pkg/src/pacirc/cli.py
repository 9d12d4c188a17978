"""Command-line entry point: simulate | exact | analytic | degree | clt | verify.

Exit codes: 0 success, 1 verification/check failure, 2 usage error,
3 budget refusal. Machine output is JSON by default (CSV via --format
csv where tabular); exact rationals are always rendered as "num/den"
strings. stdout carries the human summary when --out takes the artifact.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import degrees, mc, moments, oracle, verify
from .dist import DistTable

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _emit(payload, args, human_summary: str | None = None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        if human_summary:
            print(human_summary)
        print(f"wrote {args.out}")
    else:
        print(text)


def _emit_table(table: DistTable, args, what: str) -> None:
    if getattr(args, "format", "json") == "csv":
        rows = list(table.to_csv_rows())
        if getattr(args, "out", None):
            with open(args.out, "w", newline="", encoding="utf-8") as fh:
                csv.writer(fh).writerows(rows)
            print(f"{what}: {len(table)} outcomes")
            print(f"wrote {args.out}")
        else:
            csv.writer(sys.stdout).writerows(rows)
    else:
        _emit(table.to_json_rows(), args, human_summary=f"{what}: {len(table)} outcomes")


def _intlist(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pacirc",
        description="Simulator and exact analytics for preferential dynamic attachment circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    default_workers = int(os.environ.get("WORKERS", "1"))

    p = sub.add_parser("simulate", help="Grow replicated circuits and write a moment report")
    p.add_argument("--m", type=int, required=True, help="circuit index (parents per insertion)")
    p.add_argument("--n", type=int, required=True, help="number of insertions per replicate")
    p.add_argument("--replicates", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--degree-nodes", type=_intlist, default=[], metavar="J1,J2,...",
                   help="node labels whose degrees to record")
    p.add_argument("--no-colors", action="store_true",
                   help="skip the (y0, y1) color statistics")
    p.add_argument("--workers", type=int, default=default_workers,
                   help="parallel worker threads (default: WORKERS env or 1)")
    p.add_argument("--max-total-draws", type=int, default=None,
                   help="refuse runs that would exceed this many parent draws")
    p.add_argument("--per-replicate", metavar="CSV",
                   help="also write one CSV row of statistics per replicate")
    p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("exact", help="Exact law of the color counts (DP or enumeration)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["dp", "histories"], default="dp")
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_HISTORY_BUDGET,
                   help="history-count budget for --mode histories")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("analytic", help="Closed-form moments and martingale matrices")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--which", choices=["means", "second-moments", "cond-step", "cov-limit", "martingale"],
                   default="means")
    p.add_argument("--white", type=int, help="white count for --which cond-step")
    p.add_argument("--blue", type=int, help="blue count for --which cond-step")
    p.add_argument("--out")

    p = sub.add_parser("degree", help="Exact degree law, moments, and growth regimes")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--j", type=int, required=True, help="node label (use with --n where needed)")
    p.add_argument("--n", type=int)
    p.add_argument("--which", choices=["pmf", "moments", "asymptotics"], default="pmf")
    p.add_argument("--regime", choices=["fixed_j", "linear_theta"], default="fixed_j",
                   help="regime for --which asymptotics")
    p.add_argument("--theta", type=float, help="limit of j/n for the linear_theta regime")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")

    p = sub.add_parser("clt", help="Check a saved simulation report against the Gaussian limit")
    p.add_argument("--report", required=True, help="JSON report produced by simulate")
    p.add_argument("--cov-tol", type=float, default=0.05)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="Run exact cross-check suites")
    p.add_argument("--suite", choices=["props", "degree", "martingale", "all"], required=True)
    p.add_argument("--max-m", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--out")

    return parser


def _cmd_simulate(args) -> int:
    config = mc.SimConfig(
        m=args.m,
        n=args.n,
        replicates=args.replicates,
        seed=args.seed,
        degree_nodes=tuple(args.degree_nodes),
        track_colors=not args.no_colors,
        workers=args.workers,
        max_total_draws=args.max_total_draws,
    )
    report = mc.run_sim(config, keep_values=bool(args.per_replicate))
    if args.per_replicate:
        with open(args.per_replicate, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["replicate", *report.stat_names])
            for i, row in enumerate(report.values):
                writer.writerow([i, *(int(x) for x in row)])
    summary = ", ".join(
        f"mean {name} = {value:.6g}" for name, value in zip(report.stat_names, report.mean)
    )
    _emit(report.to_json_dict(), args,
          human_summary=f"{config.replicates} replicates at m={config.m}, n={config.n}: {summary}")
    return EXIT_OK


def _cmd_exact(args) -> int:
    if args.mode == "histories":
        table = oracle.enumerate_histories(args.m, args.n, budget=args.budget)
    else:
        table = oracle.dp_color_counts(args.m, args.n)
    _emit_table(table, args, what=f"(white, blue) law at m={args.m}, n={args.n}")
    return EXIT_OK


def _require(args, parser_error, *fields) -> None:
    for name in fields:
        if getattr(args, name, None) is None:
            parser_error(f"--which {args.which} requires --{name.replace('_', '-')}")


def _cmd_analytic(args, parser) -> int:
    if args.which == "means":
        _require(args, parser.error, "n")
        mv = moments.mean_y(args.m, args.n)
        payload = {
            "m": args.m,
            "n": args.n,
            "ey0": _frac_str(mv.ey0),
            "ey1": _frac_str(mv.ey1),
            "ey0_decimal": f"{float(mv.ey0):.12g}",
            "ey1_decimal": f"{float(mv.ey1):.12g}",
            "boundary": mv.boundary,
        }
    elif args.which == "second-moments":
        _require(args, parser.error, "n")
        sm = moments.second_moments(args.m, args.n)
        payload = {
            "m": args.m,
            "n": args.n,
            "ew2": _frac_str(sm.ew2),
            "ewb": _frac_str(sm.ewb),
            "eb2": _frac_str(sm.eb2),
        }
    elif args.which == "cond-step":
        _require(args, parser.error, "n", "white", "blue")
        st = moments.cond_step_moments(args.m, args.n, args.white, args.blue)
        payload = {
            "m": args.m,
            "n": args.n,
            "white": args.white,
            "blue": args.blue,
            "ew": _frac_str(st.ew),
            "eb": _frac_str(st.eb),
            "ew2": _frac_str(st.ew2),
            "ewb": _frac_str(st.ewb),
            "eb2": _frac_str(st.eb2),
        }
    elif args.which == "cov-limit":
        cov = moments.cov_limit(args.m)
        payload = {
            "m": args.m,
            "var_y0": _frac_str(cov.var_y0),
            "cov_y0_y1": _frac_str(cov.cov_y0_y1),
            "var_y1": _frac_str(cov.var_y1),
        }
    else:
        _require(args, parser.error, "n")
        mats = moments.martingale_matrices(args.m, args.n)
        payload = {
            "m": args.m,
            "n": args.n,
            "p": [[_frac_str(x) for x in row] for row in mats.p],
            "q": [_frac_str(x) for x in mats.q],
            "a": [[_frac_str(x) for x in row] for row in mats.a],
            "k_diag": [mpf_str(x) for x in mats.k_diag],
            "sigma": [[mpf_str(x) for x in row] for row in mats.sigma],
            "dps": mats.dps,
        }
    _emit(payload, args)
    return EXIT_OK


def mpf_str(x) -> str:
    return f"{x}"


def _cmd_degree(args, parser) -> int:
    if args.which == "pmf":
        _require(args, parser.error, "n")
        table = degrees.degree_pmf(args.m, args.j, args.n)
        _emit_table(table, args, what=f"degree law of node {args.j} at m={args.m}, n={args.n}")
        return EXIT_OK
    if args.which == "moments":
        _require(args, parser.error, "n")
        rep = degrees.degree_moments(args.m, args.j, args.n)
        _emit(rep.to_json_dict(), args)
        return EXIT_OK
    if args.regime == "linear_theta":
        if args.theta is None:
            parser.error("--regime linear_theta requires --theta")
        regime = degrees.RegimeSpec(kind="linear_theta", theta=args.theta)
    else:
        regime = degrees.RegimeSpec(kind="fixed_j", j=args.j)
    rep = degrees.degree_asymptotics(args.m, regime)
    _emit(rep.to_json_dict(), args)
    return EXIT_OK


def _cmd_clt(args) -> int:
    with open(args.report, encoding="utf-8") as fh:
        report = mc.SimReport.from_json_dict(json.load(fh))
    check = mc.clt_check(report, cov_tol=args.cov_tol, alpha=args.alpha)
    _emit(check.to_json_dict(), args,
          human_summary=f"cov_rel_err = {check.cov_rel_err:.4f}, passed = {check.passed}")
    return EXIT_OK if check.passed else EXIT_CHECK_FAILED


def _cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, max_m=args.max_m, max_n=args.max_n)
    payload = [r.to_json_dict() for r in results]
    ok = verify.all_passed(results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.check_id}" for r in results]
    _emit(payload, args, human_summary="\n".join(lines))
    if not getattr(args, "out", None):
        print("\n".join(lines), file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "exact":
            return _cmd_exact(args)
        if args.command == "analytic":
            return _cmd_analytic(args, parser)
        if args.command == "degree":
            return _cmd_degree(args, parser)
        if args.command == "clt":
            return _cmd_clt(args)
        return _cmd_verify(args)
    except oracle.BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
