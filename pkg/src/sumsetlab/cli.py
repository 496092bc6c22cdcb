"""Command-line front end.

Exit codes: 0 on success, 2 on usage/configuration errors, 1 on runtime
errors (invalid numeric domains, I/O failures).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict
from pathlib import Path

from . import checkers, theory
from .core import ThresholdSpec, read_set, window_bounds
from .errors import ConfigurationError, DomainError, SumsetLabError
from .harness import (
    SUMMARY_COLUMNS,
    ExperimentConfig,
    records_to_csv,
    records_to_jsonl,
    rows_to_csv,
    run_balls_boxes,
    run_trials,
    selection_probability,
    sweep,
    theory_row,
)
from .repcount import ENGINES, rep_counts

log = logging.getLogger("sumsetlab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--h", type=int, default=2)
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--A", type=float, default=0.0)
    p.add_argument("--p", type=float, help="override the threshold selection probability")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--engine", choices=ENGINES, default="convolution")
    p.add_argument("--out", type=Path, help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "jsonl", "json"))
    p.add_argument("--sparse", action="store_true", help="omit zero rows from count output")
    p.add_argument("--K-corr", dest="K_corr", type=float, default=1.0)
    p.add_argument("--L-t1", dest="L_t1", type=float, default=1.0)
    p.add_argument("--workers", type=int, help="worker threads (default: SUMSETLAB_THREADS)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared()
    parser = _Parser(prog="sumsetlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("theory", parents=[shared], help="evaluate threshold formulas as JSON")

    c = sub.add_parser("count", parents=[shared], help="representation counts of a set file")
    c.add_argument("--in", dest="infile", type=Path, required=True)

    c = sub.add_parser("check", parents=[shared], help="set predicates as JSON")
    c.add_argument("--in", dest="infile", type=Path, required=True)

    for name, help_ in (("simulate-basis", "Monte Carlo truncated-basis trials"),
                        ("simulate-bhg", "Monte Carlo B_h[g] trials")):
        c = sub.add_parser(name, parents=[shared], help=help_)
        c.add_argument("--config", type=Path)
        c.add_argument("--summary", type=Path, help="also write a one-row summary CSV")
        c.add_argument("--timings", action="store_true", help="include wall_time_ms in records")
        if name == "simulate-bhg":
            c.add_argument("--k-scale", dest="k_scale", type=float, default=1.0)

    c = sub.add_parser("sweep", parents=[shared], help="sweep the offset A")
    c.add_argument("--config", type=Path)
    c.add_argument("--A-grid", dest="A_grid", type=str, help="comma-separated offsets")
    c.add_argument("--records", type=Path, help="write per-trial JSONL for every grid point")
    c.add_argument("--plot", type=str, metavar="PREFIX",
                   help="write PREFIX.dat and a gnuplot script PREFIX.gp")

    c = sub.add_parser("balls-boxes", parents=[shared], help="balls-in-boxes baselines")
    c.add_argument("--boxes", type=int, required=True)
    c.add_argument("--balls", type=int)
    c.add_argument("--mode", choices=("threshold", "waiting"), default="threshold")
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _require_n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    return args.n


def _json_safe(d: dict) -> dict:
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in d.items()}


# ---------------------------------------------------------------------------
# subcommands


def cmd_theory(args) -> None:
    spec = ThresholdSpec(_require_n(args), args.alpha, args.h, args.g, args.A)
    p = args.p if args.p is not None else theory.threshold_p(spec)
    w = window_bounds(spec.n, spec.alpha, spec.h)
    out = {
        "n": spec.n, "alpha": spec.alpha, "h": spec.h, "g": spec.g, "A": spec.A,
        "p": p, "window": [w.lo, w.hi],
        "limit_prob": theory.limit_probability(spec),
        "bhg_threshold_size": theory.bhg_threshold_size(spec.n, spec.h, spec.g),
    }
    if spec.h == 2:
        out.update(theory_row(spec, p, args.K_corr, args.L_t1))
        if 0 < p < 1:
            out["t1_exact"] = theory.t1_component(spec.n, spec.alpha, p, spec.g)
    if spec.n >= 3:
        out["balls_boxes"] = asdict(theory.balls_boxes_formulas(spec.n, spec.g))
    _emit(json.dumps(_json_safe(out), indent=2) + "\n", args.out)


def cmd_count(args) -> None:
    A = read_set(args.infile)
    counts = rep_counts(A, args.h, args.engine).counts
    rows = [(j, int(c)) for j, c in enumerate(counts.tolist()) if c or not args.sparse]
    if (args.format or "csv") == "csv":
        text = "j,count\n" + "".join(f"{j},{c}\n" for j, c in rows)
    elif args.format == "jsonl":
        text = "".join(json.dumps({"j": j, "count": c}) + "\n" for j, c in rows)
    else:
        text = json.dumps({"h": args.h, "counts": dict(rows)}) + "\n"
    _emit(text, args.out)


def cmd_check(args) -> None:
    A = read_set(args.infile)
    max_sigma, max_delta, max_sum = checkers.max_sigma_delta(A)
    out = {
        "n": A.n, "size": len(A), "h": args.h, "g": args.g, "alpha": args.alpha,
        "sidon": checkers.is_sidon(A, args.h, args.engine),
        "bhg": checkers.is_bhg(A, args.h, args.g, args.engine),
        "truncated_basis": checkers.is_truncated_basis(A, args.alpha, args.h, args.g, args.engine),
        "max_sigma": max_sigma,
        "max_delta": max_delta,
        "max_sigma_plus_delta": max_sum,
    }
    _emit(json.dumps(out) + "\n", args.out)


def _load_config(args, kind: str) -> ExperimentConfig:
    if getattr(args, "config", None) is not None:
        cfg = ExperimentConfig.from_json(args.config.read_text())
        if cfg.kind != kind:
            raise ConfigurationError(f"config kind {cfg.kind!r} does not match subcommand ({kind})")
        return cfg
    spec = ThresholdSpec(_require_n(args), args.alpha, args.h, args.g, args.A)
    grid = None
    if getattr(args, "A_grid", None):
        try:
            grid = tuple(float(x) for x in args.A_grid.split(","))
        except ValueError:
            raise ConfigurationError(f"--A-grid must be comma-separated numbers, got {args.A_grid!r}")
    return ExperimentConfig(
        kind=kind, spec=spec, trials=args.trials, master_seed=args.seed, engine=args.engine,
        p=args.p, A_grid=grid, k_scale=getattr(args, "k_scale", 1.0),
        K_corr=args.K_corr, L_t1=args.L_t1,
    )


def _summary_row(cfg: ExperimentConfig, est, p: float) -> dict:
    spec = cfg.spec
    row = {"A": spec.A, "n": spec.n, "alpha": spec.alpha, "g": spec.g, "p": p,
           "trials": est.trials, "successes": est.successes, "p_hat": est.p_hat,
           "ci_lo": est.ci_lo, "ci_hi": est.ci_hi, "mean_X": est.mean_X}
    if cfg.kind == "basis" and spec.h == 2:
        row.update(theory_row(spec, p, cfg.K_corr, cfg.L_t1))
    else:
        row.update({k: float("nan") for k in SUMMARY_COLUMNS if k not in row})
    return row


def cmd_simulate(args, kind: str) -> None:
    cfg = _load_config(args, kind)
    p = selection_probability(cfg)
    est, records = run_trials(cfg, args.workers)
    log.info("p=%.6g successes=%d/%d p_hat=%.4f [%.4f, %.4f] mean_X=%.4f",
             p, est.successes, est.trials, est.p_hat, est.ci_lo, est.ci_hi, est.mean_X)
    fmt = args.format or "jsonl"
    if fmt == "jsonl":
        text = records_to_jsonl(records, args.timings)
    elif fmt == "csv":
        text = records_to_csv(records, args.timings)
    else:
        text = json.dumps({"config": cfg.to_dict(), "p": p, "estimate": asdict(est)}, indent=2) + "\n"
    _emit(text, args.out)
    if args.summary is not None:
        args.summary.write_text(rows_to_csv([_summary_row(cfg, est, p)], SUMMARY_COLUMNS))


def cmd_sweep(args) -> None:
    cfg = _load_config(args, "basis")
    if not cfg.A_grid:
        raise ConfigurationError("sweep needs a nonempty --A-grid (or A_grid in the config)")
    chunks: list[str] = []

    def keep(k, records):
        if args.records is not None:
            chunks.append(records_to_jsonl(records))

    rows = sweep(cfg, args.workers, on_point=keep)
    summaries = [r.summary() for r in rows]
    fmt = args.format or "csv"
    if fmt == "csv":
        text = rows_to_csv(summaries, SUMMARY_COLUMNS)
    elif fmt == "jsonl":
        text = "".join(json.dumps(_json_safe(s)) + "\n" for s in summaries)
    else:
        text = json.dumps([_json_safe(s) for s in summaries], indent=2) + "\n"
    _emit(text, args.out)
    if args.records is not None:
        args.records.write_text("".join(chunks))
    if args.plot:
        write_gnuplot(summaries, args.plot)


def write_gnuplot(summaries: list[dict], prefix: str) -> None:
    dat = Path(prefix + ".dat")
    lines = ["# A p_hat ci_lo ci_hi limit_prob exp(-lambda_exact)"]
    for s in summaries:
        lines.append(f"{s['A']!r} {s['p_hat']!r} {s['ci_lo']!r} {s['ci_hi']!r} "
                     f"{s['limit_prob']!r} {math.exp(-s['lambda_exact'])!r}")
    dat.write_text("\n".join(lines) + "\n")
    Path(prefix + ".gp").write_text(
        "set xlabel 'A'\n"
        "set ylabel 'P(basis)'\n"
        "set yrange [0:1]\n"
        "set key left top\n"
        f"plot '{dat.name}' using 1:2:3:4 with yerrorbars title 'Monte Carlo', \\\n"
        f"     '{dat.name}' using 1:5 with linespoints title 'limit law', \\\n"
        f"     '{dat.name}' using 1:6 with linespoints title 'exp(-lambda)'\n"
    )


def cmd_balls_boxes(args) -> None:
    rows = run_balls_boxes(args.boxes, args.g, args.trials, args.seed, args.mode,
                           args.balls, args.workers)
    fmt = args.format or "csv"
    if fmt == "csv":
        text = "trial,seed,value\n" + "".join(f"{t},{s},{v}\n" for t, s, v in rows)
    elif fmt == "jsonl":
        text = "".join(json.dumps({"trial": t, "seed": s, "value": v}) + "\n" for t, s, v in rows)
    else:
        text = json.dumps([{"trial": t, "seed": s, "value": v} for t, s, v in rows]) + "\n"
    _emit(text, args.out)


COMMANDS = {
    "theory": cmd_theory,
    "count": cmd_count,
    "check": cmd_check,
    "simulate-basis": lambda a: cmd_simulate(a, "basis"),
    "simulate-bhg": lambda a: cmd_simulate(a, "bhg"),
    "sweep": cmd_sweep,
    "balls-boxes": cmd_balls_boxes,
}


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (UsageError, ConfigurationError) as exc:
        parser.print_usage(sys.stderr)
        print(f"sumsetlab {args.command}: usage error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, SumsetLabError, ValueError, OSError, ArithmeticError) as exc:
        print(f"sumsetlab {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
