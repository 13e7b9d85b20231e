"""Command-line entry point: ``fibzeta {fib,roots,eval,poles,special,grid}``."""
from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from decimal import Decimal, InvalidOperation
from typing import List, Optional, Sequence

import mpmath

from .continuation import zeta_continued
from .numerics import (
    DomainError,
    FibZetaError,
    PoleProximityError,
    PrecisionFault,
    check_precision,
    default_precision,
    precision,
    to_decimal,
)
from .poles import Window, enumerate_poles
from .recurrence import fib_sequence
from .roots import all_roots
from .special_values import PoleError, zeta_negative
from .zeta_direct import zeta_direct

EXIT_OK, EXIT_USAGE, EXIT_POLE, EXIT_FAULT = 0, 1, 2, 3
AUTO_SWITCH = mpmath.mpf(1) / 2

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^(?P<re>{_NUM})?(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])?$")
_VALUE_OPTIONS = ("--s", "--re", "--im")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text: str):
    """'2', '-1.5+1i', '3i', '1-2j' -> (re, im) decimal strings."""
    t = text.strip().replace(" ", "")
    if re.fullmatch(rf"{_NUM}?[ij]", t) and not re.fullmatch(rf"{_NUM}", t):
        coef = t[:-1]
        coef = {"": "1", "+": "1", "-": "-1"}.get(coef, coef)
        return "0", coef
    m = _COMPLEX.match(t)
    if not t or not m:
        raise UsageError(f"cannot parse complex number {text!r}")
    re_part = m.group("re") or "0"
    im_part = m.group("im")
    if im_part is None:
        im_part = "0"
    elif im_part in "+-":
        im_part += "1"
    return re_part, im_part


def parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"range must look like lo:hi, got {text!r}")
    try:
        lo, hi = (Decimal(p) for p in parts)
    except InvalidOperation:
        raise UsageError(f"cannot parse range {text!r}") from None
    if not (lo.is_finite() and hi.is_finite()):
        raise UsageError(f"range must be bounded, got {text!r}")
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def _positive_decimal(text: str) -> str:
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_finite() or value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return text


def _precision(text: str) -> int:
    try:
        return check_precision(int(text))
    except (ValueError, DomainError):
        raise argparse.ArgumentTypeError("precision must be an integer >= 64") from None


def _ell(text: str) -> int:
    try:
        ell = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("ell must be an integer") from None
    if ell < 2:
        raise argparse.ArgumentTypeError("ell must be >= 2")
    return ell


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=None,
                        help="working precision in bits (default 256 or $FIBZETA_PRECISION)")
    common.add_argument("--tol", type=_positive_decimal, default="1e-30")
    common.add_argument("--format", choices=("json", "csv"), default=None, dest="output_format")

    parser = _Parser(prog="fibzeta", description="l-generalized Fibonacci zeta function toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fib", parents=[common], help="exact generalized Fibonacci numbers")
    p.add_argument("--ell", type=_ell, required=True)
    p.add_argument("--n-max", type=_positive_int, required=True)

    p = sub.add_parser("roots", parents=[common], help="roots of the characteristic polynomial")
    p.add_argument("--ell", type=_ell, required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate the zeta function at s")
    p.add_argument("--ell", type=_ell, required=True)
    p.add_argument("--s", required=True, help="complex argument, e.g. 2+0i or -1.5+1i")
    p.add_argument("--method", choices=("direct", "continuation", "auto"), default="auto")
    p.add_argument("--k-max", type=_positive_int, default=256)

    p = sub.add_parser("poles", parents=[common], help="candidate poles and residues in a window")
    p.add_argument("--ell", type=_ell, required=True)
    p.add_argument("--re", required=True, help="lo:hi")
    p.add_argument("--im", required=True, help="lo:hi")

    p = sub.add_parser("special", parents=[common], help="certified rational value at s = -m")
    p.add_argument("--ell", type=_ell, required=True)
    p.add_argument("--m", type=_positive_int, required=True)

    p = sub.add_parser("grid", parents=[common], help="CSV grid of |zeta| and arg zeta")
    p.add_argument("--ell", type=_ell, required=True)
    p.add_argument("--re", required=True, help="lo:hi")
    p.add_argument("--im", required=True, help="lo:hi")
    p.add_argument("--step", type=_positive_decimal, required=True)
    p.add_argument("--k-max", type=_positive_int, default=256)
    return parser


def _join_value_options(argv: Sequence[str]) -> List[str]:
    """Let '--re -5:1' through argparse, which would read '-5:1' as an option."""
    out, i = [], 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _cplx(z, bits: int) -> dict:
    z = mpmath.mpc(z)
    return {"re": to_decimal(z.real, bits), "im": to_decimal(z.imag, bits)}


def _emit_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=2))
    out.write("\n")


def _evaluate(ell: int, s, method: str, tol, bits: int, k_max: int):
    if method == "auto":
        method = "direct" if s.real >= AUTO_SWITCH else "continuation"
    if method == "direct":
        return zeta_direct(ell, s, tol, precision_bits=bits)
    return zeta_continued(ell, s, tol, k_max=k_max, precision_bits=bits)


def cmd_fib(args, bits, out) -> int:
    seq = fib_sequence(args.ell, args.n_max)
    if (args.output_format or "csv") == "json":
        _emit_json([{"n": n, "value": str(v)} for n, v in seq.items()], out)
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "value"])
        for n, v in seq.items():
            w.writerow([n, v])
    return EXIT_OK


def cmd_roots(args, bits, out) -> int:
    r = all_roots(args.ell, bits)
    with precision(bits):
        _emit_json(
            {
                "ell": r.ell,
                "precision_bits": bits,
                "alpha": to_decimal(r.alpha, bits),
                "others": [_cplx(z, bits) for z in r.others],
                "binet": [_cplx(c, bits) for c in r.binet],
                "coeffs": [_cplx(c, bits) for c in r.coeffs],
                "logs": [_cplx(g, bits) for g in r.logs],
                "residual_bound": mpmath.nstr(r.residual_bound, 6),
            },
            out,
        )
    return EXIT_OK


def cmd_eval(args, bits, out) -> int:
    re_s, im_s = parse_complex(args.s)
    with precision(bits):
        s = mpmath.mpc(mpmath.mpf(re_s), mpmath.mpf(im_s))
        tol = mpmath.mpf(args.tol)
    try:
        res = _evaluate(args.ell, s, args.method, tol, bits, args.k_max)
    except PoleProximityError as e:
        with precision(bits):
            _emit_json(
                {
                    "error": "pole_proximity",
                    "s": _cplx(s, bits),
                    "k": e.k,
                    "parts": list(e.parts),
                    "n": e.branch_n,
                    "distance": mpmath.nstr(e.distance, 6),
                },
                out,
            )
        print(f"fibzeta: {e}", file=sys.stderr)
        return EXIT_POLE
    with precision(bits):
        _emit_json(
            {
                "ell": args.ell,
                "s": _cplx(res.s, bits),
                "value_re": to_decimal(res.value.real, bits),
                "value_im": to_decimal(res.value.imag, bits),
                "error_bound": mpmath.nstr(res.bound.magnitude, 6),
                "bound_kind": res.bound.kind,
                "method": res.method,
                "terms_used": res.terms_used,
                "precision_bits": bits,
            },
            out,
        )
    return EXIT_OK


def _window(args) -> Window:
    re_lo, re_hi = parse_range(args.re)
    im_lo, im_hi = parse_range(args.im)
    return Window(re_lo, re_hi, im_lo, im_hi)


def cmd_poles(args, bits, out) -> int:
    w = _window(args)
    roots = all_roots(args.ell, bits)
    with precision(bits):
        window = Window(*(mpmath.mpf(str(v)) for v in (w.re_min, w.re_max, w.im_min, w.im_max)))
    groups = enumerate_poles(args.ell, window, roots)
    with precision(bits):
        _emit_json(
            [
                {
                    "location": _cplx(g.location, bits),
                    "residue": _cplx(g.total_residue, bits),
                    "genuine": g.genuine,
                    "multiple": g.multiple,
                    "contributors": [
                        {"k": c.k, "parts": list(c.parts), "n": c.branch_n,
                         "residue": _cplx(c.residue, bits)}
                        for c in g.contributors
                    ],
                }
                for g in groups
            ],
            out,
        )
    return EXIT_OK


def cmd_special(args, bits, out) -> int:
    try:
        rv = zeta_negative(args.ell, args.m, bits)
    except PoleError as e:
        _emit_json({"error": "pole", "ell": args.ell, "m": args.m}, out)
        print(f"fibzeta: {e}", file=sys.stderr)
        return EXIT_POLE
    with precision(bits):
        _emit_json(
            {
                "ell": rv.ell,
                "m": rv.m,
                "numeric": _cplx(rv.numeric, bits),
                "rational": None if rv.rational is None else str(rv.rational),
                "certified": rv.certified,
                "precisions_checked": list(rv.precisions_checked),
            },
            out,
        )
    return EXIT_OK


def _steps(lo: Decimal, hi: Decimal, step: Decimal):
    count = int((hi - lo) // step) + 1
    return [lo + i * step for i in range(count)]


def _dec(x: Decimal) -> str:
    return format(x.normalize(), "f") if x else "0"


def cmd_grid(args, bits, out) -> int:
    re_lo, re_hi = parse_range(args.re)
    im_lo, im_hi = parse_range(args.im)
    step = Decimal(args.step)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["re", "im", "abs", "arg"])
    with precision(bits):
        tol = mpmath.mpf(args.tol)
    for x in _steps(re_lo, re_hi, step):
        for y in _steps(im_lo, im_hi, step):
            with precision(bits):
                s = mpmath.mpc(mpmath.mpf(str(x)), mpmath.mpf(str(y)))
            try:
                res = _evaluate(args.ell, s, "auto", tol, bits, args.k_max)
            except PoleProximityError:
                w.writerow([_dec(x), _dec(y), "", ""])
                continue
            with precision(bits):
                w.writerow([
                    _dec(x),
                    _dec(y),
                    mpmath.nstr(abs(res.value), 20),
                    mpmath.nstr(mpmath.arg(res.value), 20),
                ])
    return EXIT_OK


COMMANDS = {
    "fib": cmd_fib,
    "roots": cmd_roots,
    "eval": cmd_eval,
    "poles": cmd_poles,
    "special": cmd_special,
    "grid": cmd_grid,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = parser.parse_args(_join_value_options(argv))
    try:
        bits = args.precision or default_precision()
        return COMMANDS[args.command](args, bits, out)
    except (UsageError, DomainError) as e:
        print(f"fibzeta: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionFault as e:
        print(f"fibzeta: convergence fault: {e}", file=sys.stderr)
        return EXIT_FAULT
    except FibZetaError as e:
        print(f"fibzeta: {e}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
