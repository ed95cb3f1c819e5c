"""Command-line front end.

Data goes to stdout as compact JSON (or CSV with ``--format csv``); progress
of long enumerations goes to stderr.  Exit codes: 0 success, 1 validation
error or bad usage, 2 budget/cap exceeded.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import acceptance, folner, jw, spread
from .car import eval_quasifree, format_polynomial, parse_monomial
from .errors import BudgetExceeded, JzlabError, ValidationError
from .monoid import JElement, apply, compose, parse_normal_form, parse_word
from .toeplitz import ToeplitzCovariance, certify_norm, min_eigenvalue

log = logging.getLogger("jzlab")


@dataclass
class RunConfig:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    output: str | None = None
    format: str = "json"
    threads: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- serialization ------------------------------------------------------------


def _clean(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, JElement):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return str(obj)


def render(result: dict, fmt: str) -> str:
    data = _clean(result)
    if fmt == "json":
        return json.dumps(data, separators=(",", ":"), ensure_ascii=False) + "\n"
    buf = io.StringIO()
    rows = data.get("rows") if isinstance(data, dict) else None
    if rows is None:
        rows = [{k: v for k, v in data.items()}]
    columns = list(rows[0].keys()) if rows else []
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: json.dumps(v, separators=(",", ":")) if isinstance(v, (dict, list)) else v
                         for k, v in row.items()})
    return buf.getvalue()


def _element(text: str) -> JElement:
    """Accept either a normal form (``th[0]^2 t^1``) or a generator word (``tsT``)."""
    text = text.strip()
    if text and set(text) <= set("tTs "):
        return parse_word(text)
    return parse_normal_form(text)


def _fraction(x: Fraction) -> dict:
    return {"exact": x, "float": float(x)}


# --- command implementations -----------------------------------------------------


def cmd_jz_compose(a) -> dict:
    f, g = _element(a.f), _element(a.g)
    return {"f": f, "g": g, "fg": compose(f, g)}


def cmd_jz_apply(a) -> dict:
    f = _element(a.f)
    return {"f": f, "k": a.k, "value": apply(f, a.k)}


def cmd_folner_card(a) -> dict:
    return {"n": a.n, "count": str(folner.card_Fn(a.n))}


def cmd_folner_enumerate(a) -> dict:
    p = folner.FolnerParams(a.n, a.cap)
    family = folner.enumerate_Gn(p) if a.left else folner.enumerate_Fn(p)
    elems = [str(x) for x in family]
    return {"n": a.n, "family": "G" if a.left else "F", "count": str(len(elems)),
            "rows": [{"index": i, "element": e} for i, e in enumerate(elems)]}


def cmd_folner_ratio(a, threads: int) -> dict:
    f = _element(a.f)
    p = folner.FolnerParams(a.n, a.cap)
    if a.left:
        rep = folner.left_report(p, f)
        return {"n": a.n, "side": "left", "f": f, "ratio": rep.ratio, "ratio_float": float(rep.ratio),
                "image_size": str(rep.image_size), "family_size": str(rep.family_size)}
    rep = folner.right_report(p, f, workers=threads)
    bound = folner.right_ratio_lower_bound(a.n, f)
    return {
        "n": a.n, "side": "right", "f": f,
        "ratio": rep.ratio, "ratio_float": float(rep.ratio),
        "preimage_ratio": rep.preimage_ratio,
        "bound": bound, "bound_float": float(bound),
        "image_size": str(rep.image_size), "family_size": str(rep.family_size),
        "injective": rep.injective,
        "symmetric_difference": str(rep.symmetric_difference),
    }


def cmd_folner_bound(a) -> dict:
    f = _element(a.f)
    lo, hi = (a.n, a.n) if a.n else (1, a.n_max)
    rows = []
    for n in range(lo, hi + 1):
        b = folner.right_ratio_lower_bound(n, f)
        rows.append({"n": n, "bound": b, "bound_float": float(b)})
    big_n, u = folner.right_bound_data(f)
    return {"f": f, "N": big_n, "u": u, "rows": rows}


def cmd_folner_growth(a) -> dict:
    spheres = folner.growth_spheres(a.radius, a.max_radius)
    rows, total = [], 0
    for r, s in enumerate(spheres):
        total += s
        rows.append({"radius": r, "sphere": s, "ball": total, "word_bound": sum(3**k for k in range(r + 1))})
    return {"radius": a.radius, "ball": total, "rows": rows}


def cmd_folner_an_census(a) -> dict:
    c = folner.an_census(a.n)
    return {"n": c.n, "count": str(c.count), "formula_count": str(c.formula_count),
            "all_distinct": c.all_distinct, "words_match": c.words_match,
            "word_length": c.word_length, "published_word_length": c.published_word_length,
            "length_discrepancy": c.length_discrepancy}


def cmd_folner_klawe(a) -> dict:
    w = folner.klawe_witness(a.j)
    return {"j": a.j, "f": w.f, "g": w.g, "s": w.s, "fs": w.fs, "gs": w.gs,
            "pointwise_equal": w.pointwise_equal, "holds": w.holds}


def cmd_toeplitz_certify(a) -> dict:
    cert = certify_norm()
    cov = ToeplitzCovariance(cert.scale)
    eigs = [min_eigenvalue(cov.truncation(1, s)) for s in range(1, a.max_size + 1)]
    return {"opnorm": cert.opnorm, "C": cert.scale, "min_symbol": cert.min_symbol,
            "argmax": cert.argmax, "argmin": cert.argmin, "error_bound": cert.error,
            "truncation_min_eigs": eigs}


def cmd_toeplitz_truncation(a) -> dict:
    cov = ToeplitzCovariance()
    M = cov.truncation(a.lo, a.hi)
    return {"lo": a.lo, "hi": a.hi, "size": M.shape[0], "min_eigenvalue": min_eigenvalue(M),
            "rows": [{"m": a.lo + i, **{f"n{a.lo + j}": complex(M[i, j]) for j in range(M.shape[0])}}
                     for i in range(M.shape[0])] if a.entries else []}


def _cov(a):
    return spread.vacuum if getattr(a, "vacuum", False) else ToeplitzCovariance()


def cmd_state_eval(a) -> dict:
    p = parse_monomial(a.monomial)
    out = {"monomial": a.monomial, "wick": format_polynomial(p)}
    val = eval_quasifree(p, _cov(a))
    if not getattr(a, "vacuum", False):
        try:
            out["exact"] = spread.exact_quadratic_eval(p)
        except ValidationError:
            pass
    out["numeric_re"], out["numeric_im"] = val.real, val.imag
    return out


def _pair_sites(p):
    if len(p.terms) != 1:
        return None
    (mono, c), = p.terms.items()
    if c != 1 and c != -1 or len(mono) != 2 or mono[0].dagger == mono[1].dagger:
        return None
    return mono, c


def cmd_state_average(a) -> dict:
    p = parse_monomial(a.monomial)
    val = spread.averaged_eval(p, a.n)
    profile, unit = None, None
    pair = _pair_sites(p)
    if pair is not None:
        mono, c = pair
        (cre,) = [op.site for op in mono if op.dagger]
        (ann,) = [op.site for op in mono if not op.dagger]
        if cre != ann:
            # <a+_m a_n> averaged: sign(m - n) * 3iC/pi^2 * E[1/g^2] = -sign(m - n) * E[1/g^2] * (-3iC/pi^2)
            lo, hi = sorted((cre, ann))
            prof = spread.pair_profile(lo, hi, a.n) * (-1 if cre > ann else 1) * int(c.real)
            profile, unit = prof, spread.PAIR_UNIT.label
    return {"n": a.n, "monomial": a.monomial, "rational_profile": profile, "unit": unit,
            "numeric_re": val.real, "numeric_im": val.imag}


def cmd_state_residual(a) -> dict:
    p = parse_monomial(a.monomial)
    k = _element(a.k)
    r = spread.spreadability_residual(p, a.n, k)
    return {"n": a.n, "monomial": a.monomial, "k": k, "residual": r}


def cmd_state_witnesses(a) -> dict:
    return spread.classification_witnesses(a.n)


def cmd_state_gap(a) -> dict:
    g = spread.gap_profile(a.n)
    rows = [{"gap": k, "probability": v} for k, v in sorted(g.probabilities.items())]
    tail = g.tail()
    return {"n": a.n, "tail_gap_gt_1": _fraction(tail),
            "published_tail_bound": _fraction(spread.published_tail_bound(a.n)),
            "rows": rows if a.full else []}


def cmd_oracle_check(a) -> dict:
    chk = jw.oracle_check(a.window, a.samples, a.seed)
    return {k: getattr(chk, k) for k in chk.__dataclass_fields__}


def cmd_oracle_norm(a) -> dict:
    v = jw.sum_position_norm(a.n)
    return {"n": a.n, "norm": v, "sqrt_n": math.sqrt(a.n), "error": abs(v - math.sqrt(a.n))}


def cmd_repro(a) -> dict:
    with contextlib.redirect_stdout(sys.stderr):
        results = acceptance.run_all(verbose=not a.quiet)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed, "seconds": r.seconds,
             "failed_checks": [c.name for c in r.checks if not c.passed]} for r in results]
    return {"passed": sum(r.passed for r in results), "total": len(results), "rows": rows}


# --- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jzlab", description="Følner, Toeplitz and CAR-state computations.")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", "-o", help="write data here instead of stdout")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for enumerations")
    parser.add_argument("--quiet", "-q", action="store_true", help="no progress on stderr")
    groups = parser.add_subparsers(dest="group", parser_class=_Parser)

    def sub(group, name, fn, **kw):
        sp = group.add_parser(name, **kw)
        sp.set_defaults(fn=fn)
        return sp

    jz = groups.add_parser("jz", help="monoid normal forms").add_subparsers(dest="cmd", parser_class=_Parser)
    sp = sub(jz, "compose", cmd_jz_compose)
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp = sub(jz, "apply", cmd_jz_apply)
    sp.add_argument("--f", required=True)
    sp.add_argument("--k", type=int, required=True)

    fo = groups.add_parser("folner", help="Følner families and growth").add_subparsers(dest="cmd", parser_class=_Parser)
    sp = sub(fo, "card", cmd_folner_card)
    sp.add_argument("--n", type=int, required=True)
    sp = sub(fo, "enumerate", cmd_folner_enumerate)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--left", action="store_true", help="enumerate G_n instead of F_n")
    sp.add_argument("--cap", type=int, default=folner.DEFAULT_ENUM_CAP)
    sp = sub(fo, "ratio", cmd_folner_ratio)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--left", action="store_true")
    sp.add_argument("--cap", type=int, default=folner.DEFAULT_ENUM_CAP)
    sp = sub(fo, "bound", cmd_folner_bound)
    sp.add_argument("--f", required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--n-max", type=int, default=40)
    sp = sub(fo, "growth", cmd_folner_growth)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--max-radius", type=int, default=folner.DEFAULT_GROWTH_CAP)
    sp = sub(fo, "an-census", cmd_folner_an_census)
    sp.add_argument("--n", type=int, required=True)
    sp = sub(fo, "klawe", cmd_folner_klawe)
    sp.add_argument("--j", type=int, required=True)

    tp = groups.add_parser("toeplitz", help="covariance certification").add_subparsers(dest="cmd", parser_class=_Parser)
    sp = sub(tp, "certify", cmd_toeplitz_certify)
    sp.add_argument("--max-size", type=int, default=64)
    sp = sub(tp, "truncation", cmd_toeplitz_truncation)
    sp.add_argument("--lo", type=int, required=True)
    sp.add_argument("--hi", type=int, required=True)
    sp.add_argument("--entries", action="store_true")

    st = groups.add_parser("state", help="quasi-free and averaged states").add_subparsers(dest="cmd", parser_class=_Parser)
    sp = sub(st, "eval", cmd_state_eval)
    sp.add_argument("--monomial", required=True)
    sp.add_argument("--vacuum", action="store_true")
    sp = sub(st, "average", cmd_state_average)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--monomial", required=True)
    sp = sub(st, "residual", cmd_state_residual)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--monomial", required=True)
    sp.add_argument("--k", required=True)
    sp = sub(st, "witnesses", cmd_state_witnesses)
    sp.add_argument("--n", type=int, default=40)
    sp = sub(st, "gap", cmd_state_gap)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--full", action="store_true", help="include the whole law")

    orc = groups.add_parser("oracle", help="Jordan-Wigner oracle").add_subparsers(dest="cmd", parser_class=_Parser)
    sp = sub(orc, "check", cmd_oracle_check)
    sp.add_argument("--window", type=int, default=6)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp = sub(orc, "norm", cmd_oracle_norm)
    sp.add_argument("--n", type=int, required=True)

    sp = groups.add_parser("repro", help="run every acceptance criterion")
    sp.set_defaults(fn=cmd_repro)
    return parser


def parse_config(argv) -> tuple[RunConfig, argparse.Namespace]:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "fn"):
        parser.print_usage(sys.stderr)
        sys.stderr.write("jzlab: error: missing or unknown subcommand\n")
        raise SystemExit(1)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    params = {k: v for k, v in vars(args).items() if k not in ("fn", "format", "output", "threads", "quiet", "group", "cmd")}
    name = " ".join(x for x in (args.group, getattr(args, "cmd", None)) if x)
    return RunConfig(name, params, args.output, args.format, args.threads), args


def main(argv=None) -> int:
    try:
        config, args = parse_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", force=True)
    try:
        if args.fn is cmd_folner_ratio:
            result = args.fn(args, config.threads)
        else:
            result = args.fn(args)
    except BudgetExceeded as exc:
        sys.stderr.write(f"jzlab: budget exceeded: {exc}\n")
        return 2
    except (ValidationError, JzlabError) as exc:
        sys.stderr.write(f"jzlab: error: {exc}\n")
        return 1
    text = render(result, config.format)
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config.command == "repro":
        return 0 if result["passed"] == result["total"] else 3
    return 0
