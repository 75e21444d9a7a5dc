"""Command-line interface.

Exit status: 0 on success (or a passing suite), 1 on a failing suite or a
semantic error such as a forbidden unsatisfiable premise, 2 on usage errors
(bad arguments, unreadable files, malformed formulas).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .canonical import DEFAULT_MODEL_CAP, reduce_to_urn
from .continuum import (
    POLICIES, RegionFormatError, converge, load_region_pair, parse_region_pair, carnap_premise,
)
from .formula import And, Formula, FormulaSyntaxError, parse, symbols, to_text
from .plausibility import Plausibility, plausibility_detail
from .requirements import PROVIDERS, GenParams, run_suite
from .semantics import UnsatisfiablePremise, compare_implication, count_models, entails

DEFAULT_DIGITS = 6


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# input helpers


def _fixture(name: str) -> str | None:
    base = resources.files("plausible.fixtures")
    for candidate in (name, name + ".pl", name + ".json"):
        ref = base.joinpath(candidate)
        if ref.is_file():
            return ref.read_text(encoding="utf-8")
    return None


def _read_source(name: str) -> str:
    """Contents of a file on disk, else of a bundled fixture of that name."""
    path = Path(name)
    if path.is_file():
        return path.read_text(encoding="utf-8")
    text = _fixture(name)
    if text is None:
        raise UsageError(f"no such file or bundled fixture: {name}")
    return text


def _formula(arg: str) -> Formula:
    """Parse ``arg``, or the file it names when prefixed with ``@``."""
    if arg.startswith("@"):
        text = re.sub(r"#[^\n]*", "", _read_source(arg[1:]))
    else:
        text = arg
    try:
        return parse(text)
    except FormulaSyntaxError as exc:
        raise UsageError(f"cannot parse {arg!r}: {exc}") from None


def _csv_ints(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("resolutions must be positive integers")
    return values


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational like 1/4, got {text!r}")


def render_decimal(value: Fraction, digits: int = DEFAULT_DIGITS) -> str:
    """Round half to even at ``digits`` places, without going through float."""
    scaled = round(value * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def probability_envelope(value: Fraction, digits: int, convention: bool = False) -> dict:
    return {
        "value": str(value),
        "decimal": render_decimal(value, digits),
        "digits": digits,
        "approximate": Fraction(render_decimal(value, digits)) != value,
        "convention_applied": convention,
    }


def _emit(args, payload: dict, plain: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(plain)


# --------------------------------------------------------------------------
# subcommands


def _plausibility_plain(p: Plausibility) -> str:
    if p.convention_applied:
        return f"{p.value} (premise unsatisfiable; value by convention)"
    return str(p.value)


def cmd_prob(args) -> int:
    a, x = _formula(args.query), _formula(args.premise)
    p = plausibility_detail(a, x)
    payload = {
        "command": "prob",
        "query": to_text(a),
        "premise": to_text(x),
        "favorable": p.favorable,
        "possible": p.possible,
        **probability_envelope(p.value, args.digits, p.convention_applied),
    }
    _emit(args, payload, _plausibility_plain(p))
    return 0


def cmd_count(args) -> int:
    f = _formula(args.formula)
    if args.symbols is not None:
        domain = [s.strip() for s in args.symbols.split(",") if s.strip()]
        missing = symbols(f) - set(domain)
        if missing:
            raise UsageError(f"--symbols lacks {', '.join(sorted(missing))}")
    else:
        domain = sorted(symbols(f))
    n = count_models(f, domain)
    payload = {"command": "count", "formula": to_text(f), "symbols": sorted(set(domain)), "count": n}
    _emit(args, payload, str(n))
    return 0


def cmd_entails(args) -> int:
    x, a = _formula(args.premise), _formula(args.query)
    result = entails(x, a)
    payload = {"command": "entails", "premise": to_text(x), "query": to_text(a), "entails": result}
    _emit(args, payload, "true" if result else "false")
    return 0


def cmd_order(args) -> int:
    x, a, b = _formula(args.premise), _formula(args.a), _formula(args.b)
    rel = compare_implication(x, a, b)
    payload = {
        "command": "order",
        "premise": to_text(x),
        "a": to_text(a),
        "b": to_text(b),
        "order": rel.value,
    }
    _emit(args, payload, rel.value)
    return 0


def cmd_canon(args) -> int:
    a, x = _formula(args.query), _formula(args.premise)
    try:
        trace = reduce_to_urn(a, x, cap=args.cap)
    except ValueError as exc:
        if isinstance(exc, UnsatisfiablePremise):
            raise
        raise UsageError(str(exc)) from None
    payload = {
        "command": "canon",
        "query": to_text(a),
        "premise": to_text(x),
        "m": trace.m,
        "n": trace.n,
        "urn_query": to_text(trace.urn_query),
        "urn_premise": [t.name for t in trace.fresh],
        "checkpoints": [
            {"label": c.label, **probability_envelope(c.value, args.digits)}
            for c in trace.checkpoints
        ],
        "consistent": trace.consistent,
        **probability_envelope(trace.original, args.digits),
    }
    _emit(args, payload, trace.report())
    return 0 if trace.consistent else 1


def cmd_check(args) -> int:
    names = list(PROVIDERS) if args.provider == "all" else args.provider.split(",")
    unknown = [n for n in names if n not in PROVIDERS]
    if unknown:
        raise UsageError(
            f"unknown provider {', '.join(unknown)}; choose from {', '.join(PROVIDERS)} or all"
        )
    if args.cases < 1:
        raise UsageError("--cases must be positive")
    params = GenParams(symbols=args.symbols, depth=args.depth)
    report = run_suite(
        [PROVIDERS[n]() for n in names], seed=args.seed, cases=args.cases, params=params
    )
    if args.json:
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def _region_pair(name: str):
    try:
        if Path(name).is_file():
            return load_region_pair(name)
        text = _fixture(name)
        if text is None:
            raise UsageError(f"no such file or bundled fixture: {name}")
        return parse_region_pair(json.loads(text))
    except (RegionFormatError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad region file {name}: {exc}") from None


def cmd_limit(args) -> int:
    query, premise = _region_pair(args.regionfile)
    try:
        rows = converge(query, premise, args.schedule, args.reference, args.policy)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {
        "command": "limit",
        "policy": args.policy,
        "reference": None if args.reference is None else str(args.reference),
        "rows": [
            {
                "g": r.g,
                **(probability_envelope(r.value, args.digits) if r.value is not None else {}),
                "error": None if r.error is None else str(r.error),
                "error_decimal": None if r.error is None else render_decimal(r.error, args.digits),
                "message": r.message,
            }
            for r in rows
        ],
    }
    lines = [f"{'g':>6}  {'value':<16} {'decimal':<10} {'|error|':<10}"]
    for r in rows:
        if r.value is None:
            lines.append(f"{r.g:>6}  {r.message}")
            continue
        err = "" if r.error is None else render_decimal(r.error, args.digits)
        lines.append(f"{r.g:>6}  {str(r.value):<16} {render_decimal(r.value, args.digits):<10} {err:<10}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_carnap(args) -> int:
    try:
        model = carnap_premise(args.individuals, args.granularity)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    query = _formula(args.query)
    given = _formula(args.given) if args.given else None
    premise = model.premise if given is None else And(given, model.premise)
    p = plausibility_detail(query, premise)
    payload = {
        "command": "carnap",
        "individuals": args.individuals,
        "granularity": args.granularity,
        "query": to_text(query),
        "given": None if given is None else to_text(given),
        "premise_formulas": len(model.conjuncts),
        "favorable": p.favorable,
        "possible": p.possible,
        **probability_envelope(p.value, args.digits, p.convention_applied),
    }
    _emit(args, payload, _plausibility_plain(p))
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--digits", type=int, default=DEFAULT_DIGITS,
        help=f"decimal places for approximate renderings (default {DEFAULT_DIGITS})",
    )

    parser = argparse.ArgumentParser(
        prog="plausible",
        description="Exact plausibility of propositional queries given premises.",
        epilog="Formulas may be given as @FILE (a path or a bundled fixture such as "
        "@die.pl, @bertrand.pl, @bertrand_naive.pl).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("prob", parents=[common], help="plausibility of QUERY given PREMISE")
    p.add_argument("query")
    p.add_argument("premise")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("count", parents=[common], help="number of models of FORMULA")
    p.add_argument("formula")
    p.add_argument("--symbols", help="comma-separated symbol set (a superset of the formula's)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("entails", parents=[common], help="does PREMISE entail QUERY")
    p.add_argument("premise")
    p.add_argument("query")
    p.set_defaults(func=cmd_entails)

    p = sub.add_parser("order", parents=[common], help="implication order of A and B given PREMISE")
    p.add_argument("premise")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("canon", parents=[common], help="reduce QUERY | PREMISE to urn form")
    p.add_argument("query")
    p.add_argument("premise")
    p.add_argument("--cap", type=int, default=DEFAULT_MODEL_CAP, help="largest premise model count")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("check", parents=[common], help="run the R1-R4 requirement suite")
    p.add_argument("--provider", default="counting",
                   help=f"{', '.join(PROVIDERS)}, a comma-separated list, or all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100, help="instances per requirement")
    p.add_argument("--symbols", type=int, default=GenParams.symbols, help="symbol pool size")
    p.add_argument("--depth", type=int, default=GenParams.depth, help="formula depth bound")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("limit", parents=[common], help="grid approximations of a region pair")
    p.add_argument("regionfile", help="RegionSpec JSON file or bundled fixture name")
    p.add_argument("--schedule", type=_csv_ints, required=True, help="resolutions, e.g. 10,30,100")
    p.add_argument("--reference", type=_rational, help="reference value such as 1/4")
    p.add_argument("--policy", choices=POLICIES, default="corner")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("carnap", parents=[common], help="latent-variable premise query")
    p.add_argument("--individuals", type=int, required=True)
    p.add_argument("--granularity", type=int, required=True)
    p.add_argument("--query", required=True, help="formula over x1.., h0.., s1_1..")
    p.add_argument("--given", help="extra premise conjoined with the model")
    p.set_defaults(func=cmd_carnap)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.digits < 0:
        print("error: --digits must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsatisfiablePremise as exc:
        print(f"error: unsatisfiable premise: {to_text(exc.premise)}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
