"""Command-line front end.

Variables are numbered in the flag-adapted order and the lattice order
compares ``x_n`` first: ``x1^k < x2`` for every k.
"""

from __future__ import annotations

import argparse
import io
import json
import re
import sys
from contextlib import redirect_stderr
from fractions import Fraction
from pathlib import Path

from .algebraic import PolynomialOverSeries, solve_roots
from .calculus import ChangeOfVariables, LogDifferentialForm, pullback, residue
from .errors import FlagSeriesError, InsufficientPrecision
from .lattice import FlagOfLattices, semigroup_contains
from .parser import parse_expression, to_polynomial_in_t, to_rational
from .rational import LOG, TOP, expand_form, expand_rational
from .series import TruncatedSeries, in_O_L, valuation

DEFAULT_PRECISION = 10


def _format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(exponent, c: Fraction, var: str = "x") -> str:
    factors = [
        f"{var}{i}" if e == 1 else f"{var}{i}^{e}"
        for i, e in enumerate(exponent, start=1)
        if e
    ]
    if not factors:
        return _format_coefficient(c)
    if c == 1:
        return " ".join(factors)
    if c == -1:
        return "-" + " ".join(factors)
    return " ".join([_format_coefficient(c)] + factors)


def format_series(f: TruncatedSeries, var: str = "x") -> str:
    """Terms in ascending lattice order, then ``O(N)`` for a truncated series."""
    parts = []
    for e, c in f.sorted_terms():
        text = format_monomial(e, c, var)
        if not parts:
            parts.append(text)
        elif text.startswith("-"):
            parts.append("- " + text[1:])
        else:
            parts.append("+ " + text)
    if not f.is_exact:
        parts.append(("+ " if parts else "") + f"O({f.precision})")
    return " ".join(parts) if parts else "0"


def load_flag(path) -> FlagOfLattices:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return FlagOfLattices(int(data["n"]), {int(k): v for k, v in data.get("sublattices", {}).items()})


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p, default):
    p.add_argument("--n", type=int, default=default, help="rank (number of variables)")
    p.add_argument("--prec", type=int, default=default, help="precision of expansions")
    p.add_argument("--flag", default=default, help="JSON flag file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flagseries", description=__doc__)
    _add_common(parser, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("expand", "valuation", "residue", "solve", "changevars", "membership"):
        p = sub.add_parser(name)
        _add_common(p, argparse.SUPPRESS)
        p.add_argument("expression")
        if name in ("residue", "changevars"):
            p.add_argument("--measure", choices=[LOG, TOP], default=LOG)
        if name == "changevars":
            p.add_argument("--map", required=True, dest="images", help='"f1;f2;...;fn"')
        if name == "solve":
            p.add_argument("--ramify", type=int, default=None)
    return parser


def _rank(args, flag, texts) -> int:
    n = getattr(args, "n", None)
    if flag is not None:
        if n is not None and n != flag.n:
            raise UsageError(f"--n {n} disagrees with the flag rank {flag.n}")
        return flag.n
    if n is not None:
        if n < 1:
            raise UsageError("--n must be positive")
        return n
    indices = [int(m) for text in texts for m in re.findall(r"x(\d+)", text)]
    return max(indices, default=1)


def _expand(text, n, prec, allow_t=False):
    r = to_rational(parse_expression(text, n, allow_t), n)
    return expand_rational(r.num, r.den, prec)


def _dispatch(args) -> str:
    flag = load_flag(args.flag) if getattr(args, "flag", None) else None
    texts = [args.expression] + ([args.images] if args.command == "changevars" else [])
    n = _rank(args, flag, texts)
    prec = getattr(args, "prec", None)
    if prec is None:
        prec = DEFAULT_PRECISION
    if prec < 1:
        raise UsageError("--prec must be positive")
    cmd = args.command

    if cmd == "expand":
        return format_series(_expand(args.expression, n, prec))

    if cmd == "valuation":
        v = valuation(_expand(args.expression, n, prec))
        return f"exponent {v.exponent}\ncoefficient {_format_coefficient(v.coefficient)}"

    if cmd == "residue":
        density = _density(args.expression, n, prec, args.measure)
        return _format_coefficient(residue(LogDifferentialForm(density)))

    if cmd == "changevars":
        images = [s for s in args.images.split(";")]
        if len(images) != n:
            raise UsageError(f"--map needs {n} images, got {len(images)}")
        cv = ChangeOfVariables(tuple(_expand(s, n, prec) for s in images), precision=prec)
        form = pullback(LogDifferentialForm(_density(args.expression, n, prec, args.measure)), cv)
        lines = [format_series(form.density)]
        try:
            lines.append(f"residue {_format_coefficient(residue(form))}")
        except InsufficientPrecision:
            lines.append("residue undetermined")
        return "\n".join(lines)

    if cmd == "membership":
        if flag is None:
            flag = FlagOfLattices.normal(n)
        if re.fullmatch(r"\s*\(?\s*-?\d+(\s*,\s*-?\d+)*\s*\)?\s*", args.expression):
            vec = tuple(int(x) for x in re.findall(r"-?\d+", args.expression))
            if len(vec) != n:
                raise UsageError(f"vector of length {len(vec)} for rank {n}")
            return "true" if semigroup_contains(flag, vec) else "false"
        return "true" if in_O_L(_expand(args.expression, n, prec), flag) else "false"

    if cmd == "solve":
        poly = to_polynomial_in_t(parse_expression(args.expression, n, allow_t=True), n)
        degree = max(poly)
        coeffs = []
        for i in range(degree + 1):
            r = poly.get(i)
            coeffs.append(
                TruncatedSeries.zero(n) if r is None or r.num.is_zero()
                else expand_rational(r.num, r.den, prec)
            )
        sols = solve_roots(PolynomialOverSeries(tuple(coeffs)), prec, args.ramify)
        var = "x" if sols.ramification == 1 else "z"
        lines = [
            f"root {k} ramification {r.ramification}: {format_series(r.series, var)}"
            for k, r in enumerate(sols.roots, start=1)
        ]
        for u in sols.unresolved:
            poly_text = ", ".join(_format_coefficient(Fraction(a)) for a in u.leading_poly)
            lines.append(
                f"unresolved {u.count} slope {tuple(str(x) for x in u.exponent)} "
                f"leading [{poly_text}]: {u.reason}"
            )
        if args.ramify is not None and not sols.all_slopes_integral:
            lines.append(f"ramification {args.ramify} leaves non-integral slopes")
        return "\n".join(lines)

    raise UsageError(f"unknown command {cmd}")


def _density(text, n, prec, measure):
    r = to_rational(parse_expression(text, n), n)
    return expand_form(r.num, r.den, measure, prec).density


def run_command(argv) -> tuple[int, str]:
    """Run one command; returns ``(exit code, stdout text)``.

    Exit 0 on success, 1 on user error, 2 when precision is insufficient.
    Error messages go to stderr.
    """
    parser = build_parser()
    try:
        with redirect_stderr(io.StringIO()) as captured:
            try:
                args = parser.parse_args(argv)
            except SystemExit as exc:  # --help
                sys.stderr.write(captured.getvalue())
                return int(exc.code or 0), ""
        return 0, _dispatch(args) + "\n"
    except InsufficientPrecision as exc:
        sys.stderr.write(f"insufficient precision: {exc}\n")
        return 2, ""
    except (UsageError, FlagSeriesError, ValueError, ZeroDivisionError, OSError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1, ""


def main(argv=None) -> int:
    code, out = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
