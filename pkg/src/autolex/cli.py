"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 input/format error,
3 computation error (e.g. a saturated distance, zero variance).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import __version__
from .chrono import CalibrationPoint, calibrate, divergence_time
from .errors import AutolexError, ComputationError, DataError, LeafSetMismatch, ParseError
from .lexstat import (
    SynonymPolicy,
    correlation_curve,
    default_grid,
    language_distance,
    rank_meanings,
    stability,
)
from .phylo import newick_serialize, rf_curve, upgma
from .synth import simulate_family
from .wordlist import parse_wordlist, write_wordlist

EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_COMPUTE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _write_matrix(m, out):
    w = _writer(out)
    w.writerow(["language", *m.labels])
    for i, lab in enumerate(m.labels):
        w.writerow([lab, *(_fmt(v) for v in m.values[i])])


def _parse_grid(text, n_meanings):
    if text is None:
        return default_grid(n_meanings)
    try:
        grid = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--grid: not a comma-separated list of integers: {text!r}") from None
    if not grid:
        raise UsageError("--grid is empty")
    bad = [n for n in grid if not 1 <= n <= n_meanings]
    if bad:
        raise UsageError(f"--grid values must be in [1, {n_meanings}], got {bad}")
    return grid


def _parse_top(text, n_meanings):
    if text is None or text == "all":
        return None
    if text.startswith("top:"):
        text = text[4:]
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"expected 'all' or 'top:<n>', got {text!r}") from None
    if not 1 <= n <= n_meanings:
        raise UsageError(f"top-n must be in [1, {n_meanings}], got {n}")
    return n


def _parse_calibration(text):
    parts = text.rsplit(":", 2)
    if len(parts) != 3:
        raise UsageError(f"--calibrate expects <langA>:<langB>:<time>, got {text!r}")
    a, b, t = parts
    try:
        return CalibrationPoint((a, b), float(t))
    except ValueError as exc:
        raise UsageError(f"--calibrate: {exc}") from None


def _selected_distances(ds, policy, top):
    if top is None:
        return language_distance(ds, policy=policy)
    return language_distance(ds, rank_meanings(stability(ds, policy))[:top], policy)


def _time_matrix(m, args):
    if args.calibrate is not None:
        point = _parse_calibration(args.calibrate)
        for lang in point.pair:
            if lang not in m.labels:
                raise UsageError(f"--calibrate: unknown language {lang!r}")
        return divergence_time(m, calibrate(m, point))
    return divergence_time(m, args.epsilon)


# -- subcommands ---------------------------------------------------------------

def cmd_distances(args, out):
    ds = args.load()
    top = _parse_top(args.meanings, ds.n_meanings)
    _write_matrix(_selected_distances(ds, args.synonyms, top), out)


def cmd_stability(args, out):
    table = stability(args.load(), args.synonyms)
    w = _writer(out)
    w.writerow(["meaning", "S", "pairs_compared", "rank"])
    for meaning, s, pairs, rank in table.rows():
        w.writerow([meaning, _fmt(s), pairs, rank])


def cmd_correlate(args, out):
    ds = args.load()
    grid = _parse_grid(args.grid, ds.n_meanings)
    curve = correlation_curve(ds, stability(ds, args.synonyms), grid, args.synonyms)
    w = _writer(out)
    w.writerow(["n", "c"])
    for n, c in curve:
        w.writerow([n, _fmt(c)])


def cmd_rf_curve(args, out):
    ds = args.load()
    grid = _parse_grid(args.grid, ds.n_meanings)
    curve = rf_curve(ds, stability(ds, args.synonyms), grid, args.synonyms)
    w = _writer(out)
    w.writerow(["n", "rf"])
    w.writerows(curve)


def cmd_tree(args, out):
    ds = args.load()
    m = _selected_distances(ds, args.synonyms, _parse_top(args.top_n, ds.n_meanings))
    if args.epsilon is not None or args.calibrate is not None:
        m = _time_matrix(m, args)
    out.write(newick_serialize(upgma(m)) + "\n")


def cmd_times(args, out):
    ds = args.load()
    m = _selected_distances(ds, args.synonyms, _parse_top(args.top_n, ds.n_meanings))
    if args.epsilon is None and args.calibrate is None:
        args.epsilon = 1.0
    _write_matrix(_time_matrix(m, args), out)


def cmd_synth(args, out):
    if args.languages < 2 or args.meanings < 1:
        raise UsageError("--languages must be >= 2 and --meanings >= 1")
    try:
        ds, tree, rates = simulate_family(
            args.languages, args.meanings, slow=args.slow, fast=args.fast,
            fraction_slow=args.fraction_slow, mutation_rate=args.mutation_rate,
            seed=args.seed, height=args.height,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_wordlist(ds, out)
    truth = {
        "tree": newick_serialize(tree),
        "rates": dict(zip(ds.meanings, (float(r) for r in rates))),
        "params": {
            "languages": args.languages, "meanings": args.meanings, "slow": args.slow,
            "fast": args.fast, "fraction_slow": args.fraction_slow,
            "mutation_rate": args.mutation_rate, "height": args.height, "seed": args.seed,
        },
    }
    text = json.dumps(truth, indent=2, sort_keys=True) + "\n"
    if args.truth is None:
        sys.stderr.write(text)
    else:
        with open(args.truth, "w", encoding="utf-8") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="autolex", description="Automated lexicostatistics from wordlists.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("file", help="wordlist TSV ('-' for standard input)")
        p.add_argument("--synonyms", choices=[p.value for p in SynonymPolicy], default="first",
                       help="compare first-listed forms or the closest pair of forms (default: first)")
        return p

    p = with_file("distances", "language distance matrix as CSV")
    p.add_argument("--meanings", default="all", metavar="all|top:N")
    p.set_defaults(func=cmd_distances)

    p = with_file("stability", "per-meaning stability table as CSV")
    p.set_defaults(func=cmd_stability)

    p = with_file("correlate", "correlation of truncated-list distances with full-list distances")
    p.add_argument("--grid", metavar="N1,N2,...", help="list lengths (default 10,20,...,M)")
    p.set_defaults(func=cmd_correlate)

    p = with_file("rf-curve", "Robinson-Foulds difference of truncated-list trees to the full-list tree")
    p.add_argument("--grid", metavar="N1,N2,...", help="list lengths (default 10,20,...,M)")
    p.set_defaults(func=cmd_rf_curve)

    for name, func, help_text in (
        ("tree", cmd_tree, "UPGMA tree in Newick format"),
        ("times", cmd_times, "divergence time matrix as CSV"),
    ):
        p = with_file(name, help_text)
        p.add_argument("--top-n", metavar="N", help="use only the N most stable meanings")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--epsilon", type=float, help="replacement rate (default for 'times': 1)")
        g.add_argument("--calibrate", metavar="LANG_A:LANG_B:TIME",
                       help="fix the rate so that this pair diverged TIME units ago")
        p.set_defaults(func=func)

    p = sub.add_parser("synth", help="simulate a two-rate language family",
                       description="Simulate a two-rate family. The wordlist goes to the output; "
                                   "the true tree and rates go to --truth (default: standard error).")
    p.add_argument("--languages", type=int, required=True)
    p.add_argument("--meanings", type=int, required=True)
    p.add_argument("--slow", type=float, default=0.05)
    p.add_argument("--fast", type=float, default=1.0)
    p.add_argument("--fraction-slow", type=float, default=0.5)
    p.add_argument("--mutation-rate", type=float, default=0.1)
    p.add_argument("--height", type=float, default=1.0, help="root height of the simulated tree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="wordlist destination (default: standard output)")
    p.add_argument("--truth", help="ground-truth JSON destination")
    p.set_defaults(func=cmd_synth, file=None)
    return parser


def _loader(path):
    def load():
        if path == "-":
            return parse_wordlist(sys.stdin)
        return parse_wordlist(path)
    return load


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    stage = args.command
    args.load = _loader(args.file)
    args.synonyms = SynonymPolicy(getattr(args, "synonyms", "first"))
    out = sys.stdout
    try:
        if getattr(args, "output", None):
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                args.func(args, fh)
        else:
            args.func(args, out)
    except UsageError as exc:
        print(f"autolex {stage}: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ParseError, OSError, UnicodeDecodeError) as exc:
        print(f"autolex {stage}: input: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (ComputationError, LeafSetMismatch) as exc:
        print(f"autolex {stage}: computation: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except AutolexError as exc:  # pragma: no cover - all subclasses are mapped above
        print(f"autolex {stage}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return 0


if __name__ == "__main__":
    sys.exit(main())
