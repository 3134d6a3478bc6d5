"""Command-line front end.

Subcommands: simulate, scaling, leakage, validate-ghz, converse.  Flags can
also come from a JSON config file (--config); explicit flags win.  Exit
code 0 on success; failures print a phase-tagged diagnostic and exit
nonzero.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import rng as rngmod
from .errors import PhaseError, ProtocolAbort, StateSpaceError
from .ghz import PhaseGHZSource, protocol3_validate
from .harness import (
    ConverseReport,
    ExperimentConfig,
    SCENARIOS,
    converse_demo,
    run_experiment,
    scaling_report,
    write_scaling_csv,
)
from .leakage import (
    Coalition,
    Protocol4Runner,
    StrategyIIRunner,
    exact_mutual_information,
    leakage_row,
    sampled_mutual_information,
    secret_r,
    secret_x,
    secret_xor_x,
    write_leakage_csv,
)

VALIDATION_CSV_HEADER = ["source_kind", "param", "N", "m", "trial", "verdict",
                         "z_failures", "x_failures"]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file with default values for any flag")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="output directory for CSV artifacts")
    parser.add_argument("-N", type=int, default=4, dest="N", help="receiver count (default 4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paritycast")
    parser.sub_map = {}
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name: str, **kwargs) -> argparse.ArgumentParser:
        child = sub.add_parser(name, **kwargs)
        parser.sub_map[name] = child
        return child

    p = add_parser("simulate", help="end-to-end rate/error experiment")
    _add_common(p)
    p.add_argument("--scenario", choices=SCENARIOS, default="classical-only-II")
    p.add_argument("-n", type=int, default=64, dest="n", help="block length (default 64)")
    p.add_argument("-m", type=int, default=2, dest="m", help="GHZ security parameter (default 2)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--local-map", default="constant-zero")
    p.add_argument("--source", default="honest", dest="source_kind")
    p.add_argument("--param", type=float, default=0.0, dest="source_param")
    p.add_argument("--save-transcript", action="store_true")

    p = add_parser("scaling", help="resource totals and log-log exponents across N")
    _add_common(p)
    p.add_argument("--scenario", choices=SCENARIOS[1:], default="classical-only-II")
    p.add_argument("--n-list", default="4,8,16,32", help="comma-separated receiver counts")
    p.add_argument("-n", type=int, default=1, dest="n")
    p.add_argument("-m", type=int, default=1, dest="m")

    p = add_parser("leakage", help="coalition mutual-information report")
    _add_common(p)
    p.add_argument("--protocol", choices=("strategy-ii", "protocol4"), default="strategy-ii")
    p.add_argument("--coalition", default=None,
                   help="comma-separated member indices (default: all but receivers 0 and 1)")
    p.add_argument("--secret", default="r", help="'r' / 'x' / 'xor', optionally 'r:<i>'")
    p.add_argument("--method", choices=("exact", "sampled"), default="exact")
    p.add_argument("--view", choices=("full", "broadcasts"), default="full")
    p.add_argument("--trials", type=int, default=100_000, help="samples for --method sampled")

    p = add_parser("validate-ghz", help="Monte-Carlo detection sweep for one source")
    _add_common(p)
    p.add_argument("--source", default="honest", dest="source_kind")
    p.add_argument("--param", type=float, default=0.0, dest="source_param")
    p.add_argument("-m", type=int, default=2, dest="m")
    p.add_argument("--trials", type=int, default=1000)

    p = add_parser("converse", help="effective-channel and independence evidence")
    _add_common(p)
    p.add_argument("--samples", type=int, default=100_000)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            defaults = json.load(fh)
        unknown = set(defaults) - set(vars(args))
        if unknown:
            parser.error(f"config file sets unknown options: {sorted(unknown)}")
        # defaults live on the subparser; explicit flags still win on re-parse
        parser.sub_map[args.command].set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _out_dir(args) -> Path:
    out = Path(args.out if args.out else f"paritycast-{args.command}")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_simulate(args) -> int:
    out = _out_dir(args)
    config = ExperimentConfig(
        scenario=args.scenario, N=args.N, n=args.n, m=args.m, trials=args.trials,
        seed=args.seed, local_map=args.local_map, source_kind=args.source_kind,
        source_param=args.source_param, out_dir=str(out), save_transcript=args.save_transcript,
    )
    result = run_experiment(config)
    rep = result.report
    totals = result.ledger.totals
    print(f"scenario={rep.scenario} N={rep.N} n={rep.n} trials={rep.trials} "
          f"P_err={rep.p_err:.6g} aborts={rep.aborts} rate={rep.rates[0]:.6g}")
    print(f"ledger: p2p={totals.p2p_messages} broadcasts={totals.broadcasts} "
          f"keys={totals.key_messages} ghz={totals.ghz_copies}")
    print(f"artifacts written to {out}")
    return 0


def _cmd_scaling(args) -> int:
    out = _out_dir(args)
    ns = [int(v) for v in args.n_list.split(",") if v.strip()]
    report = scaling_report(args.scenario, ns, n=args.n, m=args.m)
    write_scaling_csv(out / "scaling.csv", report)
    print(f"scenario={report.scenario} classical slope={report.classical_slope:.3f} "
          f"R2={report.classical_r2:.4f} ({report.classical_class})")
    if report.ghz_slope is not None:
        print(f"ghz copies slope={report.ghz_slope:.3f} R2={report.ghz_r2:.4f} ({report.ghz_class})")
    print(f"artifacts written to {out}")
    return 0


def _parse_secret(selector: str, coalition: Coalition):
    parts = selector.split(":")
    kind = parts[0]
    if kind == "r":
        idx = int(parts[1]) if len(parts) > 1 else coalition.outsiders[0]
        return secret_r(idx)
    if kind == "x":
        idx = int(parts[1]) if len(parts) > 1 else coalition.outsiders[0]
        t = int(parts[2]) if len(parts) > 2 else 0
        return secret_x(idx, t)
    if kind == "xor":
        return secret_xor_x(coalition.outsiders)
    raise ValueError(f"unknown secret selector {selector!r}")


def _cmd_leakage(args) -> int:
    out = _out_dir(args)
    members = ([int(v) for v in args.coalition.split(",")] if args.coalition
               else list(range(2, args.N)))
    coalition = Coalition(members=frozenset(members), N=args.N)
    runner = StrategyIIRunner(args.N) if args.protocol == "strategy-ii" else Protocol4Runner(args.N)
    secret = _parse_secret(args.secret, coalition)
    if args.method == "exact":
        mi = exact_mutual_information(runner, secret, coalition, view=args.view)
        row = leakage_row(runner.name, args.N, coalition, secret, "exact", mi)
        print(f"I({secret.name}; view_{{{coalition.label()}}}) = {mi:.6g} bits (exact)")
    else:
        est = sampled_mutual_information(runner, secret, coalition, trials=args.trials,
                                         rng=np.random.default_rng(args.seed), view=args.view)
        row = leakage_row(runner.name, args.N, coalition, secret, "sampled",
                          est.mi_bits, est.ci_low, est.ci_high)
        sat = " (support-saturated; plug-in bias dominates)" if est.saturated else ""
        print(f"I({secret.name}; view_{{{coalition.label()}}}) ~= {est.mi_bits:.6g} bits "
              f"[{est.ci_low:.6g}, {est.ci_high:.6g}]{sat}")
    write_leakage_csv(out / "leakage.csv", [row])
    print(f"artifacts written to {out}")
    return 0


def _cmd_validate_ghz(args) -> int:
    out = _out_dir(args)
    source = PhaseGHZSource(kind=args.source_kind, N=args.N, param=args.source_param)
    rng = rngmod.substream(args.seed, rngmod.ADVERSARY_STREAM)
    rows = []
    passes = 0
    for trial in range(args.trials):
        report = protocol3_validate(source, args.m, rng)
        passes += report.verdict
        rows.append([args.source_kind, f"{args.source_param:.12g}", args.N, args.m, trial,
                     "pass" if report.verdict else "fail", report.z_failures, report.x_failures])
    with open(out / "validation.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(VALIDATION_CSV_HEADER)
        writer.writerows(rows)
    print(f"source={args.source_kind} param={args.source_param} N={args.N} m={args.m} "
          f"pass_rate={passes / args.trials:.6g} over {args.trials} trials")
    print(f"artifacts written to {out}")
    return 0


def _cmd_converse(args) -> int:
    out = _out_dir(args)
    report: ConverseReport = converse_demo(args.N, samples=args.samples, seed=args.seed)
    with open(out / "converse.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["N", "mi_bits", "max_cell_deviation", "max_abs_correlation",
                         "correlation_bound", "samples"])
        writer.writerow([report.N, f"{report.mi_bits:.12g}", f"{report.max_cell_deviation:.12g}",
                         f"{report.max_abs_correlation:.12g}", f"{report.correlation_bound:.12g}",
                         report.samples])
    print(f"N={report.N} I(input;output)={report.mi_bits:.3g} bits "
          f"max_cell_dev={report.max_cell_deviation:.3g} "
          f"max|corr|={report.max_abs_correlation:.4f} (bound {report.correlation_bound:.4f})")
    print(f"artifacts written to {out}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "scaling": _cmd_scaling,
    "leakage": _cmd_leakage,
    "validate-ghz": _cmd_validate_ghz,
    "converse": _cmd_converse,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = _apply_config_file(parser, list(sys.argv[1:] if argv is None else argv))
    try:
        return _COMMANDS[args.command](args)
    except PhaseError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 3
    except ProtocolAbort as exc:
        print(f"error [phase=validation] {exc}", file=sys.stderr)
        return 4
    except StateSpaceError as exc:
        print(f"error [phase=analysis] {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error [phase=configuration] {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
