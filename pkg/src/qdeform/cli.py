"""Command line front end: ``qdeform <verb> ...``.

Exit status: 0 on success, 1 on a computation error, 2 on unparseable input,
3 when a trace scan finds a theorem violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from . import __version__
from .lab import ScanCapExceeded, ScanSpec, TheoremViolation, cohn_matrix, divisibility_report, scan_traces
from .polycore import LaurentPoly, QSeries, parse_poly
from .qarith import (
    CFWord,
    Flavor,
    IllDefinedWord,
    eval_cf_classical,
    eval_negative_cf_q,
    eval_regular_cf_q,
    negative_cf,
    parse_cf_word,
    parse_fraction,
    q_rational,
    q_series_from_cf,
    regular_cf,
)
from .qmodular import QMat2, matrix_from_word, normalize_trace, parse_group_word, q_deform_word
from .qquadratic import Surd, parse_surd, periodic_negative_cf, q_quadratic
from .repro import TABLES, run_table

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_THEOREM = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _parse(fn: Callable[[str], Any], text: str) -> Any:
    try:
        return fn(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- renderers ---------------------------------------------------------------


def _poly_json(p: LaurentPoly) -> dict:
    return {"text": str(p), "terms": p.to_json()}


def _series_json(s: QSeries) -> dict:
    return {"text": str(s), "order": s.order, "terms": [[e, c] for e, c in sorted(s.terms.items())]}


def _matrix_json(m: QMat2) -> dict:
    return {
        "entries": [[_poly_json(m.a), _poly_json(m.b)], [_poly_json(m.c), _poly_json(m.d)]],
        "det": _poly_json(m.det()),
        "at_one": [list(row) for row in m.at_one()],
    }


def _matrix_text(m: QMat2) -> str:
    return f"{m}\ndet = {m.det()}"


# -- verbs -------------------------------------------------------------------


def cmd_qrat(args) -> tuple[str, dict]:
    x = _parse(parse_fraction, args.number)
    c = q_rational(x.numerator, x.denominator)
    data = {
        "value": str(x),
        "sign": c.sign,
        "N": c.N,
        "R": _poly_json(c.R),
        "S": _poly_json(c.S),
        "text": str(c),
    }
    return str(c), data


def cmd_cf(args) -> tuple[str, dict]:
    x = _parse(parse_fraction, args.number)
    fn = regular_cf if args.flavor == "reg" else negative_cf
    w = fn(x.numerator, x.denominator)
    return str(w), {"value": str(x), "flavor": args.flavor, "coeffs": list(w.coeffs), "text": str(w)}


def cmd_qcf(args) -> tuple[str, dict]:
    w: CFWord = _parse(parse_cf_word, args.word)
    value = eval_cf_classical(w)
    ev = eval_regular_cf_q if w.flavor == Flavor.REGULAR else eval_negative_cf_q
    unit, f = ev(w.coeffs)
    text = f"{unit} * ({f.num})/({f.den})" if unit.exp or unit.sign < 0 else f"({f.num})/({f.den})"
    data = {
        "word": str(w),
        "value": str(value),
        "unit": {"sign": unit.sign, "exp": unit.exp},
        "num": _poly_json(f.num),
        "den": _poly_json(f.den),
        "text": text,
    }
    return text, data


def _matrix_arg(text: str) -> QMat2:
    t = text.strip()
    if t.startswith("M"):
        return matrix_from_word(t)
    return q_deform_word(parse_group_word(t)).rep


def cmd_mat(args) -> tuple[str, dict]:
    m = _parse(_matrix_arg, args.word)
    return _matrix_text(m), {"word": args.word, **_matrix_json(m)}


def cmd_trace(args) -> tuple[str, dict]:
    m = _parse(_matrix_arg, args.word)
    t = m.trace()
    n = normalize_trace(t) if t else t
    data = {
        "word": args.word,
        "trace": _poly_json(t),
        "normalized": _poly_json(n),
        "palindrome": t.is_palindrome() if t else True,
        "unimodal": n.is_unimodal() if n else True,
        "nonneg": n.has_nonneg_coeffs(),
    }
    text = f"{t}\npalindrome={data['palindrome']} unimodal={data['unimodal']} nonneg={data['nonneg']}"
    return text, data


def cmd_quad(args) -> tuple[str, dict]:
    x: Surd = _parse(parse_surd, args.surd)
    cf = periodic_negative_cf(x)
    y = q_quadratic(x)
    data = {
        "surd": str(x),
        "preperiod": list(cf.preperiod),
        "period": list(cf.period),
        "R": _poly_json(y.R),
        "P": _poly_json(y.P),
        "S": _poly_json(y.S),
        "branch": y.branch,
        "text": str(y),
    }
    return f"{cf}\n{y}", data


def _number_arg(text: str):
    if "sqrt" in text:
        return parse_surd(text)
    return parse_fraction(text)


def _stdin_stream():
    for line in sys.stdin:
        for tok in line.split():
            yield int(tok)


def cmd_series(args) -> tuple[str, dict]:
    if args.order < 0:
        raise UsageError("order must be nonnegative")
    if args.number == "-":
        s = q_series_from_cf(_stdin_stream(), args.order, flavor=args.flavor)
        label = f"stdin ({args.flavor})"
    else:
        x = _parse(_number_arg, args.number)
        if isinstance(x, Fraction):
            s = q_rational(x.numerator, x.denominator).series(args.order)
        else:
            s = q_quadratic(x).series(args.order)
        label = str(x)
    lo = min(0, s.val_lower_bound)
    coeffs = s.coeff_range(lo, args.order)
    data = {"number": label, "series": _series_json(s), "coeffs_from": lo, "coeffs": coeffs}
    return f"{s}\n{coeffs}", data


def _range_arg(text: str) -> tuple[int, int]:
    parts = text.replace("..", ":").split(":")
    if len(parts) == 1:
        return int(parts[0]), int(parts[0])
    if len(parts) != 2:
        raise ValueError(f"bad range {text!r}")
    return int(parts[0]), int(parts[1])


def cmd_scan(args) -> tuple[str, dict]:
    try:
        spec = ScanSpec(
            k_range=_range_arg(args.k),
            coeff_range=_range_arg(args.range),
            hypothesis=args.hypothesis,
            checks=tuple(c.strip() for c in args.checks.split(",") if c.strip()),
            cap=args.cap,
            sample=args.sample,
            seed=args.seed,
            workers=args.workers,
        )
    except ScanCapExceeded:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    report = scan_traces(spec, strict=False)
    if report.theorem_failed:
        raise TheoremViolation(report)
    return report.to_text(), report.to_dict()


def cmd_cohn(args) -> tuple[str, dict]:
    m = _parse(cohn_matrix, args.word)
    t = m.trace()
    data = {"word": args.word, **_matrix_json(m), "trace": _poly_json(t)}
    return f"{m}\ntrace = {t}", data


def _target_arg(text: str) -> tuple[str, LaurentPoly]:
    """Polynomial text, ``quad:<surd>`` for a radicand or ``cohn:<word>`` for a trace."""
    if text.startswith("quad:"):
        return text, q_quadratic(parse_surd(text[5:])).P
    if text.startswith("cohn:"):
        return text, cohn_matrix(text[5:]).trace()
    if text.startswith("trace:"):
        return text, _matrix_arg(text[6:]).trace()
    return text, parse_poly(text)


def cmd_divcheck(args) -> tuple[str, dict]:
    targets = dict(_parse(_target_arg, t) for t in args.target)
    cands = dict(_parse(_target_arg, c) for c in args.by)
    rows = divisibility_report(targets, cands)
    lines = []
    for r in rows:
        if r.divides:
            lines.append(f"{r.target} / {r.candidate} = {r.quotient}  positive={r.positive}")
        else:
            lines.append(f"{r.target} / {r.candidate}: no")
    return "\n".join(lines), {"rows": [r.to_dict() for r in rows]}


def cmd_repro(args) -> tuple[str, dict]:
    if args.table == "list":
        return "\n".join(TABLES), {"tables": {name: [] for name in TABLES}, "ok": True}
    names = list(TABLES) if args.table == "all" else [args.table]
    if any(n not in TABLES for n in names):
        raise UsageError(f"unknown table {args.table!r}; choose from all, list, {', '.join(TABLES)}")
    lines, out, ok = [], {}, True
    for n in names:
        rows = run_table(n)
        out[n] = [r.to_dict() for r in rows]
        good = sum(r.ok for r in rows)
        ok &= good == len(rows)
        lines.append(f"{n}: {good}/{len(rows)} ok")
        for r in rows:
            if not r.ok:
                lines.append(f"  MISMATCH {r.label}: expected {r.expected}, got {r.got}")
            elif args.verbose:
                lines.append(f"  ok {r.label}" + (f"  ({r.note})" if r.note else ""))
    return "\n".join(lines), {"tables": out, "ok": ok}


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdeform", description="q-deformed rationals, reals and matrices")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--json", action="store_true", help="emit a JSON document instead of text")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
        sp.set_defaults(fn=fn)
        return sp

    verb("qrat", cmd_qrat, "canonical q-rational").add_argument("number", help="r/s")
    sp = verb("cf", cmd_cf, "continued fraction of a rational")
    sp.add_argument("number")
    sp.add_argument("--flavor", choices=("reg", "neg"), default="reg")
    verb("qcf", cmd_qcf, "evaluate a q-continued fraction word").add_argument("word", help="[a1,...] or [[c1,...]]")
    verb("mat", cmd_mat, "matrix of M[...], M+[...] or a group word").add_argument("word")
    verb("trace", cmd_trace, "trace of M[...], M+[...] or a group word").add_argument("word")
    verb("quad", cmd_quad, "closed form of a q-quadratic irrational").add_argument("surd")
    sp = verb("series", cmd_series, "Laurent series of [x]_q")
    sp.add_argument("number", help="r/s, a surd, or - to read CF coefficients from stdin")
    sp.add_argument("--order", type=int, default=12)
    sp.add_argument("--flavor", choices=("reg", "neg"), default="reg", help="flavor of a stdin stream")
    sp = verb("scan", cmd_scan, "exhaustive or sampled trace scan")
    sp.add_argument("--k", default="1:4", help="word lengths, e.g. 1:6")
    sp.add_argument("--range", default="2:4", help="coefficient range, e.g. 2:5")
    sp.add_argument("--checks", default="palindrome,reversal,positive,unimodal")
    sp.add_argument("--hypothesis", choices=("interior>=2", "all"), default="interior>=2")
    sp.add_argument("--cap", type=int, default=10**7)
    sp.add_argument("--sample", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    verb("cohn", cmd_cohn, "q-deformed Cohn matrix product").add_argument("word", help="e.g. AAB")
    sp = verb("divcheck", cmd_divcheck, "trial division of targets by candidates")
    sp.add_argument("--target", action="append", required=True, help="polynomial, quad:<surd>, cohn:<word> or trace:<word>")
    sp.add_argument("--by", action="append", required=True)
    sp = verb("repro", cmd_repro, "replay a golden table")
    sp.add_argument("table", help=f"all, list, or one of: {', '.join(TABLES)}")
    sp.add_argument("-v", "--verbose", action="store_true")
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = getattr(args, "json", False)
    try:
        text, data = args.fn(args)
    except UsageError as exc:
        parser.print_usage(err)
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except TheoremViolation as exc:
        if as_json:
            print(json.dumps({"verb": args.verb, "ok": False, "result": exc.report.to_dict()}, sort_keys=True), file=out)
        else:
            print(exc.report.to_text(), file=out)
        print(f"theorem violation: {exc}", file=err)
        return EXIT_THEOREM
    except (ArithmeticError, ValueError, RuntimeError, IllDefinedWord, KeyError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_COMPUTE
    except Exception as exc:  # keep the driver total
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_COMPUTE
    if as_json:
        ok = data.get("ok", True) if isinstance(data, dict) else True
        print(json.dumps({"verb": args.verb, "ok": ok, "result": data}, sort_keys=True), file=out)
    else:
        print(text, file=out)
    if args.verb == "repro" and not data["ok"]:
        return EXIT_COMPUTE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
