"""Command-line interface: ``euparl apportion | solve | table``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .camcom import (
    Composition,
    camcom_apportion,
    check_degressive,
    power_trace,
    power_variant,
    uncapped,
)
from .divisor import RoundingRule, composite, divisor_interval
from .model import (
    ApportionmentError,
    ApportionmentProblem,
    Roster,
    builtin_eu27,
    read_roster,
    reference_columns,
)
from .powerlaw import display_range, exponent_range, nice_exponent
from .report import FORMATS, Report, fmt_fixed, fmt_int, fmt_short, render

PROG = "euparl"
RULES = {r.value: r for r in RoundingRule}
DEFAULT_TABLE = "idx:0.91,idx:0.9,cc,par,pwr,sq"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"{PROG}: error: {message}\n")
        raise SystemExit(2)


@dataclass
class ReportSpec:
    columns: list[str]
    format: str = "text"
    precision: int = 4

    def __post_init__(self):
        if not self.columns:
            raise ApportionmentError("at least one column is required")
        if self.precision < 1:
            raise ApportionmentError("precision must be at least 1")
        if self.format not in FORMATS:
            raise ApportionmentError(f"unknown format {self.format!r}")


def _roster(args) -> Roster:
    if args.roster:
        try:
            return read_roster(args.roster)
        except OSError as exc:
            raise ApportionmentError(f"cannot read roster {args.roster}: {exc.strerror or exc}") from exc
    return builtin_eu27()


def _problem(args, roster: Roster, cap: Optional[int] = None, exponent: float = 1.0) -> ApportionmentProblem:
    cap = args.house if cap is None else cap
    return ApportionmentProblem(roster, args.house, args.base, cap, exponent)


def _base_report(roster: Roster) -> Report:
    rep = Report(roster.codes, [s.name for s in roster])
    rep.add("population", [fmt_int(p) for p in roster.populations], fmt_int(roster.total_population))
    return rep


def _seat_column(rep: Report, header: str, seats: Sequence[int]) -> None:
    rep.add(header, [fmt_int(s) for s in seats], fmt_int(sum(seats)))


def _index_column(rep: Report, roster: Roster, exponent: float) -> None:
    rep.add(f"Popn^{fmt_short(exponent)}", [f"{v:.1f}" for v in roster.weighted_indices(exponent)])


def _divisor_items(div, places: int) -> dict[str, str]:
    return {
        "divisor": fmt_short(div.nice),
        "divisor_min": fmt_fixed(div.d_min, places),
        "divisor_max": fmt_fixed(div.d_max, places),
    }


def _range_items(rng, places: int) -> dict[str, str]:
    lo, hi = display_range(rng, places)
    return {
        "exponent_min": str(lo),
        "exponent_max": "inf" if hi.is_infinite() else str(hi),
        "exponent_nice": fmt_short(nice_exponent(rng)),
    }


def cmd_apportion(args) -> Report:
    roster = _roster(args)
    rule = RULES[args.rule]
    if not args.exponent > 0:
        raise ApportionmentError("exponent must be positive")
    rep = _base_report(roster)
    _index_column(rep, roster, args.exponent)
    info = {"exponent": fmt_short(args.exponent), "rule": rule.value,
            "house": str(args.house), "base": str(args.base)}
    if args.cap is not None:
        comp = camcom_apportion(_problem(args, roster, args.cap, args.exponent))
        _seat_column(rep, "seats", comp.seats)
        info["cap"] = str(args.cap)
        info["capped"] = " ".join(roster.codes[i] for i in comp.capped) or "none"
        info.update(_divisor_items(comp.divisor, args.precision))
        rep.summary("summary", **info)
        return rep
    _problem(args, roster, exponent=args.exponent)   # validates house/base
    lw = roster.log_weights(args.exponent)
    seats = composite(lw, args.house, args.base, rule)
    _seat_column(rep, "seats", seats)
    info.update(_divisor_items(divisor_interval(lw, seats, rule, args.base), args.precision))
    info.update(_range_items(exponent_range(roster, seats.shifted(-args.base), rule), args.precision))
    rep.summary("summary", **info)
    return rep


def _solution_items(comp: Composition, rng, places: int) -> dict[str, str]:
    deg = check_degressive(comp)
    items = {"exponent": fmt_short(comp.exponent_used)}
    if rng is not None:
        lo, hi = display_range(rng, places)
        items["exponent_min"], items["exponent_max"] = str(lo), str(hi)
    items.update(_divisor_items(comp.divisor, places))
    items["largest"] = str(comp.seats[0])
    items["degressive_seats"] = str(deg.holds_on_seats).lower()
    items["degressive_quotients"] = str(deg.holds_on_quotients).lower()
    if deg.violations:
        items["violations"] = "; ".join(f"{a}>{b} {why}" for a, b, why in deg.violations)
    return items


def cmd_solve(args) -> Report:
    roster = _roster(args)
    problem = _problem(args, roster, args.cap)
    rep = _base_report(roster)
    plain = uncapped(problem, 1.0)
    if max(plain.seats) <= args.cap:
        _seat_column(rep, "CC", plain.seats)
        rep.summary("solution", **_solution_items(plain, None, args.precision))
        rep.notes.append("cap not binding")
        return rep
    comps = power_variant(problem)
    ranges = {s.exponent: s.range for s in power_trace(problem).solutions}
    if args.pick == "smallest":
        comps = comps[:1]
    elif args.pick == "largest":
        comps = comps[-1:]
    for comp in comps:
        _seat_column(rep, f"x({fmt_short(comp.exponent_used)})", comp.seats)
    for comp in comps:
        rep.summary("solution", **_solution_items(comp, ranges[comp.exponent_used], args.precision))
    return rep


def build_table(roster: Roster, problem: ApportionmentProblem, spec: ReportSpec) -> Report:
    rep = _base_report(roster)
    refs = None
    for token in spec.columns:
        kind, _, param = token.strip().partition(":")
        if kind == "idx":
            _index_column(rep, roster, _exponent(param, token))
        elif kind == "x":
            e = _exponent(param, token)
            _seat_column(rep, f"x({fmt_short(e)})", uncapped(problem, e).seats)
        elif kind == "cc":
            _seat_column(rep, "CC", camcom_apportion(problem).seats)
        elif kind == "pwr":
            for comp in power_variant(problem):
                _seat_column(rep, f"x({fmt_short(comp.exponent_used)})", comp.seats)
        elif kind in ("sq", "par"):
            refs = refs or reference_columns()
            data = refs["status_quo" if kind == "sq" else "parabolic"]
            missing = [c for c in roster.codes if c not in data]
            if missing:
                raise ApportionmentError(f"no {kind} data for {', '.join(missing)}")
            _seat_column(rep, "Now" if kind == "sq" else "Par.", [data[c] for c in roster.codes])
        else:
            raise ApportionmentError(f"unknown column {token!r}")
    return rep


def _exponent(text: str, token: str) -> float:
    try:
        e = float(text)
    except ValueError:
        raise ApportionmentError(f"column {token!r} needs an exponent, e.g. x:0.9") from None
    if not e > 0:
        raise ApportionmentError(f"column {token!r}: exponent must be positive")
    return e


def cmd_table(args) -> Report:
    roster = _roster(args)
    spec = ReportSpec([c for c in args.columns.split(",") if c.strip()], args.format, args.precision)
    return build_table(roster, _problem(args, roster, args.cap), spec)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--builtin", choices=["eu27"], help="bundled dataset (default: eu27)")
    src.add_argument("--roster", metavar="PATH", help="CSV file with header code,name,population")
    common.add_argument("--house", type=int, default=751, help="total seats (default 751)")
    common.add_argument("--base", type=int, default=5, help="base seats per state (default 5)")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--precision", type=int, default=4, help="decimals for exponents and divisors")

    parser = _Parser(prog=PROG, description="European Parliament seat apportionment.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("apportion", parents=[common], help="base seats + divisor method at one exponent")
    p.add_argument("--exponent", type=float, default=1.0)
    p.add_argument("--rule", choices=list(RULES), default="up")
    p.add_argument("--cap", type=int, default=None, help="apply iterative capping at this size")
    p.set_defaults(func=cmd_apportion)

    p = sub.add_parser("solve", parents=[common], help="power-weighted variant hitting the cap")
    p.add_argument("--cap", type=int, default=96)
    p.add_argument("--pick", choices=["all", "smallest", "largest"], default="all")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", parents=[common], help="side-by-side comparison of compositions")
    p.add_argument("--cap", type=int, default=96)
    p.add_argument("--columns", default=DEFAULT_TABLE,
                   help="comma list of cc, pwr, x:E, idx:E, sq, par (default: %(default)s)")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.precision < 1:
            raise ApportionmentError("precision must be at least 1")
        report = args.func(args)
    except ApportionmentError as exc:
        sys.stderr.write(f"{PROG}: error: {' '.join(str(exc).split())}\n")
        return 1
    sys.stdout.write(render(report, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
