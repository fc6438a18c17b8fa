"""Threshold-sweep crisp-set QCA from the command line.

Exit codes: 0 success, 1 usage error, 2 data or validation error, 3 I/O error.
"""
import argparse
import sys
from typing import List, Optional

import requests
from tqdm.auto import tqdm

from csqca import __version__, render
from csqca.data_util import OutcomeSpec, load_csv
from csqca.script_util import (DEFAULT_INCL_CUT, DEFAULT_N_CUT, UsageError, parse_axes, parse_dir_exp,
                               parse_names, parse_thresholds, parse_values)
from csqca.sweep import SweepResult, ct_sweep_m, ct_sweep_s, dt_sweep, ot_sweep


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_output_flags(p: argparse.ArgumentParser):
    p.add_argument("--out", "-o", default=None,
                   help="Write the result file (JSON) to this path.")
    p.add_argument("--report", default=None,
                   help="Write a Markdown report to this path.")
    p.add_argument("--title", default="Threshold Sweep Report",
                   help="Report title.")
    p.add_argument("--format", default="full", choices=["full", "summary"],
                   help="Report format; full adds one section per threshold point when details were kept.")
    p.add_argument("--chart", default="term", choices=["term", "threshold", "none"],
                   help="Configuration chart level in the report.")
    p.add_argument("--symbols", default="unicode", choices=["unicode", "ascii", "latex"],
                   help="Configuration chart symbol set.")
    p.add_argument("--timestamp", default=None,
                   help="Fixed 'Generated:' value for the report, e.g. 2026-01-01T00:00:00")
    p.add_argument("--quiet", "-q", action="store_true",
                   help="Suppress progress and diagnostics.")


def _sweep_parent() -> argparse.ArgumentParser:
    p = ArgumentParser(add_help=False)
    p.add_argument("--input", "-i", required=True,
                   help="CSV file (or http(s) URL) with a header row and one row per case.")
    p.add_argument("--id-col", default=None,
                   help="Column holding case identifiers; rows are numbered from 1 otherwise.")
    p.add_argument("--outcome", required=True,
                   help="Outcome column; prefix with ~ to analyse the negated outcome, e.g. '~Y'.")
    p.add_argument("--conditions", required=True,
                   help="Comma separated condition columns, e.g. A,B,C")
    p.add_argument("--incl-cut", type=float, default=DEFAULT_INCL_CUT,
                   help="Consistency cutoff in (0, 1].")
    p.add_argument("--n-cut", type=int, default=DEFAULT_N_CUT,
                   help="Frequency cutoff; rows with fewer cases are remainders.")
    p.add_argument("--include", default="none", choices=["none", "remainders"],
                   help="Use remainders as don't-cares (parsimonious or intermediate solutions).")
    p.add_argument("--dir-exp", default=None,
                   help="Directional expectations per condition: 1, 0 or -, e.g. 1,1,-")
    p.add_argument("--details", action="store_true",
                   help="Keep truth tables, all models and fits per threshold point.")
    p.add_argument('--wandb_project', '-proj', default=None,
                   help='Name W&B will use when logging sweep rows.\ne.g. `--wandb_project "my_project"`')
    p.add_argument('--wandb_entity', '-ent', default=None,
                   help='(optional) Name of W&B team/entity to log to.')
    _add_output_flags(p)
    return p


def build_parser() -> ArgumentParser:
    p = ArgumentParser(prog="csqca", description=__doc__,
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    parent = _sweep_parent()
    fmt = argparse.ArgumentDefaultsHelpFormatter

    ot = sub.add_parser("otsweep", parents=[parent], formatter_class=fmt,
                        help="Sweep the outcome threshold with fixed condition thresholds.")
    ot.add_argument("--sweep-range", required=True, help="Outcome thresholds: LO:HI[:STEP] or v1|v2|...")
    ot.add_argument("--thrx", required=True, help="Condition thresholds, e.g. A=2,B=2")

    cts = sub.add_parser("ctsweeps", parents=[parent], formatter_class=fmt,
                         help="Sweep one condition threshold.")
    cts.add_argument("--sweep-var", required=True, help="Condition whose threshold is swept.")
    cts.add_argument("--sweep-range", required=True, help="Thresholds for --sweep-var: LO:HI[:STEP] or v1|v2|...")
    cts.add_argument("--thry", type=float, required=True, help="Outcome threshold.")
    cts.add_argument("--thrx-default", type=float, required=True, help="Threshold of every other condition.")

    ctm = sub.add_parser("ctsweepm", parents=[parent], formatter_class=fmt,
                         help="Sweep a grid of condition thresholds.")
    ctm.add_argument("--sweep-list", required=True, help="One axis per condition, e.g. A=2:3,B=2|4")
    ctm.add_argument("--thry", type=float, required=True, help="Outcome threshold.")

    dt = sub.add_parser("dtsweep", parents=[parent], formatter_class=fmt,
                        help="Sweep outcome thresholds and a condition threshold grid together.")
    dt.add_argument("--sweep-list-x", required=True, help="One axis per condition, e.g. A=2:3,B=2:3")
    dt.add_argument("--sweep-range-y", required=True, help="Outcome thresholds: LO:HI[:STEP] or v1|v2|...")

    rep = sub.add_parser("report", formatter_class=fmt,
                         help="Regenerate a report from a saved result file.")
    rep.add_argument("--result", required=True, help="Result file written by --out.")
    _add_output_flags(rep)
    return p


def check_usage(args) -> Optional[tuple]:
    conditions = parse_names(args.conditions)
    if args.dir_exp is None:
        return None
    if args.include == "none":
        raise UsageError("directional expectations require remainder inclusion")
    dir_exp = parse_dir_exp(args.dir_exp)
    if len(dir_exp) != len(conditions):
        raise UsageError(f"--dir-exp has {len(dir_exp)} entries for {len(conditions)} conditions")
    return dir_exp


def run_sweep(args) -> SweepResult:
    dir_exp = check_usage(args)
    conditions = parse_names(args.conditions)
    if args.command == "otsweep":
        sweep_range, thrX = parse_values(args.sweep_range, "--sweep-range"), parse_thresholds(args.thrx, "--thrx")
    elif args.command == "ctsweeps":
        sweep_range = parse_values(args.sweep_range, "--sweep-range")
    elif args.command == "ctsweepm":
        sweep_list = parse_axes(args.sweep_list, "--sweep-list")
    else:
        sweep_list_x = parse_axes(args.sweep_list_x, "--sweep-list-x")
        sweep_range_y = parse_values(args.sweep_range_y, "--sweep-range-y")

    raw = load_csv(args.input, id_column=args.id_col,
                   variables=[OutcomeSpec.parse(args.outcome).name, *conditions])
    common = dict(
        incl_cut=args.incl_cut,
        n_cut=args.n_cut,
        include_remainders=args.include == "remainders",
        dir_exp=dir_exp,
        return_details=args.details,
        progress=not args.quiet,
        wandb_project=args.wandb_project,
        wandb_entity=args.wandb_entity,
    )
    if args.command == "otsweep":
        return ot_sweep(raw, args.outcome, conditions, sweep_range, thrX, **common)
    if args.command == "ctsweeps":
        return ct_sweep_s(raw, args.outcome, conditions, args.thry, args.sweep_var, sweep_range,
                          args.thrx_default, **common)
    if args.command == "ctsweepm":
        return ct_sweep_m(raw, args.outcome, conditions, args.thry, sweep_list, **common)
    return dt_sweep(raw, args.outcome, conditions, sweep_list_x, sweep_range_y, **common)


def write_outputs(result: SweepResult, args):
    if args.out is not None:
        render.export_result(result, args.out)
        if not args.quiet:
            tqdm.write(f"Result written: {args.out}", file=sys.stderr)
    if args.report is not None:
        render.generate_report(
            result, args.report, title=args.title, fmt=args.format,
            include_chart=args.chart != "none", chart_symbol_set=args.symbols,
            chart_level="term" if args.chart == "none" else args.chart,
            timestamp=args.timestamp,
        )
    print(render.format_print(result))
    print()
    print(render.format_stats(result.stats))


def run(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "report":
            result = render.import_result(args.result)
        else:
            result = run_sweep(args)
        write_outputs(result, args)
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else 0
    except UsageError as e:
        tqdm.write(f"csqca: usage error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        tqdm.write(f"csqca: error: {e}", file=sys.stderr)
        return 2
    except (OSError, requests.RequestException) as e:
        tqdm.write(f"csqca: I/O error: {e}", file=sys.stderr)
        return 3
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
