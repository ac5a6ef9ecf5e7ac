"""Command-line interface.

Subcommands: ``tau``, ``analyze``, ``sign``, ``curves`` and ``screen``.
Run ``signconf <subcommand> --help`` for the flags of each.

Exit status: 0 success, 2 usage error, 3 domain error, 4 numeric
failure, 5 batch finished but some rows were rejected as malformed.
"""

from __future__ import annotations

import argparse
import math
import sys
from contextlib import contextmanager
from typing import Sequence

from . import curves, design, screen
from .errors import DomainError, NumericError
from .signpolicy import level_bound, make_policy, decide, sign_error_bound

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4
EXIT_ROW_ERRORS = 5

FORMAT_HELP = (
    "output format: 'plain' prints one 'key: value' line per quantity; "
    "'csv' prints a header row of keys and one row of values"
)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _df(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _emit(pairs: list[tuple[str, object]], fmt: str, digits: int, out) -> None:
    def show(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return f"{v:.{digits}g}"
        return str(v)

    if fmt == "csv":
        out.write(",".join(k for k, _ in pairs) + "\n")
        out.write(",".join(show(v) for _, v in pairs) + "\n")
    else:
        for k, v in pairs:
            out.write(f"{k}: {show(v)}\n")


def _analysis_pairs(res: design.DesignAnalysis) -> list[tuple[str, object]]:
    return [
        ("alpha", res.alpha),
        ("power", res.power),
        ("tau", res.tau),
        ("crit_z", res.crit_z),
        ("min_ratio", res.min_ratio),
        ("type_s", res.type_s),
        ("exaggeration", res.exaggeration),
        ("pos_mean", res.pos_mean),
        ("neg_mean", res.neg_mean),
    ]


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_tau(args) -> int:
    res = design.exaggeration_analytic(design.DesignPoint(args.alpha, args.power))
    _emit(_analysis_pairs(res), args.format, args.digits, sys.stdout)
    return EXIT_OK


def cmd_analyze(args, parser) -> int:
    by_design = args.power is not None
    by_effect = args.effect is not None or args.se is not None
    if by_design == by_effect:
        parser.error("give either --power, or --effect and --se (not both)")
    if by_effect and (args.effect is None or args.se is None):
        parser.error("--effect and --se must be given together")
    if by_design and not math.isinf(args.df):
        parser.error("--df only applies with --effect/--se")

    pairs: list[tuple[str, object]] = []
    if by_design:
        res = design.exaggeration_analytic(design.DesignPoint(args.alpha, args.power))
        effect, se = 1.0, res.tau
        pairs += _analysis_pairs(res)
    else:
        effect, se = args.effect, args.se
        if not effect > 0 or not se > 0:
            raise DomainError("--effect and --se must be positive")
        if math.isinf(args.df):
            res = design.analyze_tau(se / effect, args.alpha)
            pairs += _analysis_pairs(res)
        else:
            power, ts = design.retrodesign_power(effect, se, args.alpha, args.df)
            pairs += [("alpha", args.alpha), ("tau", se / effect), ("df", args.df),
                      ("power", power), ("type_s", ts)]
    pairs.append(("one_tailed_wrong_sign",
                  design.one_tailed_wrong_sign(args.alpha, se / effect)))

    if args.mc:
        mc = design.retrodesign_mc(effect, se, args.alpha, args.df, args.n_sims, args.seed)
        pairs += [
            ("mc_power", mc.power),
            ("mc_type_s", mc.type_s),
            ("mc_exaggeration", mc.exaggeration),
            ("mc_exaggeration_se", mc.exaggeration_se),
            ("mc_n_significant", mc.n_significant),
            ("n_sims", mc.n_sims),
            ("seed", mc.seed),
        ]
    _emit(pairs, args.format, args.digits, sys.stdout)
    return EXIT_OK


def cmd_sign(args) -> int:
    policy = make_policy(args.alpha1, args.alpha_s)
    rep = decide(args.estimate, args.se, args.df, policy=policy)
    pairs = [
        ("decision", rep.decision.value),
        ("z", rep.z),
        ("p1", rep.p1),
        ("p_sign", rep.p_sign),
        ("alpha1", policy.alpha1),
        ("alpha_s", policy.alpha_s),
        ("alpha2", policy.alpha2),
        ("sign_error_bound", sign_error_bound(policy)),
        ("crude_bound", level_bound(policy.alpha1, policy.alpha2, crude=True)),
    ]
    _emit(pairs, args.format, args.digits, sys.stdout)
    return EXIT_OK


def cmd_curves(args) -> int:
    if args.which == "density":
        table = curves.density_cutoff_table(args.alpha, args.power, args.grid_n)
    elif args.which == "type-s":
        table = curves.type_s_curve(args.alpha)
    elif args.which == "exaggeration":
        table = curves.exaggeration_curve(args.alpha)
    else:
        table = curves.sign_power_curves(args.alpha1, args.alpha_s)
    with _open_out(args.output) as out:
        table.write_csv(out)
    return EXIT_OK


def cmd_screen(args) -> int:
    policy = make_policy(args.alpha1, args.alpha_s)
    try:
        with open(args.input, encoding="utf-8", newline="") as fh:
            entries = screen.read_records(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {args.input}: {exc.strerror}") from None
    results, summary = screen.screen_batch(entries, policy)
    with _open_out(args.output) as out:
        screen.write_results(results, out)
    for r in results:
        if isinstance(r, screen.RowError):
            where = f"line {r.line}" if r.line is not None else f"id {r.id}"
            print(f"row error ({where}): {r.message}", file=sys.stderr)
    to_stdout = args.output is None or args.output == "-"
    print(screen.format_summary(summary), file=sys.stderr if to_stdout else sys.stdout)
    return EXIT_ROW_ERRORS if summary.n_errors else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signconf",
        description="Retrospective design analysis and sign-error control.",
        epilog="exit status: 0 ok, 2 usage, 3 domain error, 4 numeric failure, "
               "5 screen finished with row errors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("plain", "csv"), default="plain", help=FORMAT_HELP)
        p.add_argument("--digits", type=int, default=7,
                       help="significant digits for printed numbers (default 7)")

    p = sub.add_parser("tau", help="standard error implied by a level and a power")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float, required=True)
    common(p)

    p = sub.add_parser("analyze", help="power, type S and exaggeration of a design")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float)
    p.add_argument("--effect", type=float, help="assumed true effect")
    p.add_argument("--se", type=float, help="standard error of the estimate")
    p.add_argument("--df", type=_df, default=math.inf, help="t degrees of freedom (default inf)")
    p.add_argument("--mc", action="store_true", help="add a Monte Carlo exaggeration estimate")
    p.add_argument("--n-sims", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=1)
    common(p)

    p = sub.add_parser("sign", help="two-level test of one estimate")
    p.add_argument("--estimate", type=float, required=True)
    p.add_argument("--se", type=float, required=True)
    p.add_argument("--alpha1", type=float, default=0.05)
    p.add_argument("--alpha-s", type=float, required=True)
    p.add_argument("--df", type=_df, default=math.inf)
    common(p)

    p = sub.add_parser("curves", help="write a figure table as CSV")
    p.add_argument("which", choices=("density", "type-s", "exaggeration", "sign-power"))
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--power", type=float, default=0.06, help="density table only")
    p.add_argument("--grid-n", type=int, default=curves.DENSITY_POINTS)
    p.add_argument("--alpha1", type=float, default=0.05)
    p.add_argument("--alpha-s", type=_float_list, default=list(curves.DEFAULT_ALPHA_S),
                   help="comma-separated sign-error budgets (default 0.1,0.01,0.001)")
    p.add_argument("--output", "-o", help="output path (default stdout)")

    p = sub.add_parser("screen", help="apply the two-level rule to a CSV of estimates")
    p.add_argument("--input", "-i", required=True, help="CSV with columns id,estimate,se[,df]")
    p.add_argument("--alpha1", type=float, default=0.05)
    p.add_argument("--alpha-s", type=float, required=True)
    p.add_argument("--output", "-o", help="output CSV path (default stdout)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "tau":
            return cmd_tau(args)
        if args.command == "analyze":
            return cmd_analyze(args, parser)
        if args.command == "sign":
            return cmd_sign(args)
        if args.command == "curves":
            return cmd_curves(args)
        return cmd_screen(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except DomainError as exc:
        print(f"signconf: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericError as exc:
        print(f"signconf: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
