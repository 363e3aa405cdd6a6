"""Command-line entry point: ``largen4 <group> <command> [options]``.

Machine-readable documents go to stdout, a short human summary to stderr.
Exit status is 0 when every requested check passes, 1 on a check failure
and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import autgrp, axioms, loop, modes
from .conformal import GENS, ConfElem, gamma_param, structure_table
from .mat2 import parse_mat2
from .scalars import DEFAULT_N, parse_laurent


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# literals

def parse_gamma(text: str | None):
    if text is None:
        return None
    try:
        return gamma_param(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc


def parse_spec(text: str, N: int) -> autgrp.AutSpec:
    """``identity``, ``omega`` or ``A=[[..]];B=[[..]];f=..;eps=0|1`` (missing keys default to I, I, 0, 0)."""
    text = text.strip()
    if text in autgrp.SPEC_NAMES:
        return autgrp.named_spec(text, N)
    fields = {"A": "I", "B": "I", "f": "0", "eps": "0"}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in fields:
            raise UsageError(f"bad spec component {part!r}; expected A=, B=, f= or eps=")
        fields[key] = val.strip()
    return spec_from_fields(fields["A"], fields["B"], fields["f"], fields["eps"], N)


def spec_from_fields(A: str, B: str, f: str, eps: str | int, N: int) -> autgrp.AutSpec:
    try:
        e = int(eps)
        return autgrp.AutSpec(parse_mat2(A, N), parse_mat2(B, N), parse_laurent(f, N), e)
    except UsageError:
        raise
    except Exception as exc:  # malformed literals surface as usage errors
        raise UsageError(str(exc)) from exc


def _spec_arg(args, N: int) -> autgrp.AutSpec:
    if args.spec is not None:
        return parse_spec(args.spec, N)
    return spec_from_fields(args.A, args.B, args.f, args.eps, N)


def _elem_json(x: ConfElem) -> dict:
    return {"text": str(x), "terms": x.to_json()}


def _report_summary(name: str, rep: axioms.CheckReport) -> str:
    lines = [f"{name}: {rep.checked} checks, {len(rep.failures)} failures"
             + (f", {len(rep.suspected)} suspected misprints" if rep.suspected else "")]
    for f in rep.failures[:5]:
        lines.append(f"  FAIL {f.check} {tuple(f.witness)}: {f.left} != {f.right}")
    if len(rep.failures) > 5:
        lines.append(f"  ... {len(rep.failures) - 5} more")
    return "\n".join(lines)


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")


def _say(text: str) -> None:
    sys.stderr.write(text + "\n")


# ---------------------------------------------------------------------------
# verify

def cmd_verify_axioms(args) -> int:
    gamma = parse_gamma(args.gamma)
    table = structure_table(gamma, args.N)
    rep = axioms.check_axioms(table=table, jobs=args.jobs)
    _emit({"check": "axioms", "gamma": None if gamma is None else str(gamma), **rep.to_json()})
    _say(_report_summary("axioms", rep))
    return 0 if rep.passed else 1


def _homomorphism_images(args) -> tuple[str, dict]:
    N = args.N
    name = args.spec
    if name == "hat-tau":
        f = parse_laurent(args.f, N)
        if not f.is_constant():
            raise UsageError("hat-tau needs a constant --f")
        return f"hat-tau(f={f})", autgrp.hat_tau_images(f.constant_term(), N)
    if name == "hat-omega":
        return "hat-omega", autgrp.hat_omega_images(N)
    s = parse_spec(name, N) if name is not None else spec_from_fields(args.A, args.B, args.f, args.eps, N)
    return str(s), autgrp.images(s)


def cmd_verify_homomorphism(args) -> int:
    gamma = parse_gamma(args.gamma)
    try:
        label, imgs = _homomorphism_images(args)
    except UsageError:
        raise
    except Exception as exc:
        raise UsageError(str(exc)) from exc
    rep = axioms.check_homomorphism(imgs, table=structure_table(gamma, args.N), N=args.N)
    _emit({"check": "homomorphism", "map": label, "gamma": None if gamma is None else str(gamma),
           **rep.to_json()})
    _say(_report_summary(f"homomorphism {label}", rep))
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# aut

def cmd_aut_apply(args) -> int:
    s = _spec_arg(args, args.N)
    gens = args.gen or list(GENS)
    bad = [g for g in gens if g not in GENS]
    if bad:
        raise UsageError(f"unknown generators {bad}")
    out = {g: _elem_json(autgrp.apply_auto(s, ConfElem.gen(g, N=args.N))) for g in gens}
    _emit({"spec": s.to_json(), "images": out})
    _say(f"applied {s} to {len(gens)} generators")
    return 0


def cmd_aut_compose(args) -> int:
    outer, inner = parse_spec(args.outer, args.N), parse_spec(args.inner, args.N)
    s = autgrp.compose(outer, inner)
    _emit({"outer": outer.to_json(), "inner": inner.to_json(), "composite": s.to_json()})
    _say(f"{outer} o {inner} = {s}")
    return 0


def cmd_aut_order(args) -> int:
    s = _spec_arg(args, args.N)
    k = autgrp.order_of(s, args.max_order)
    _emit({"spec": s.to_json(), "order": k, "max_order": args.max_order})
    _say(f"order of {s}: {k if k is not None else f'> {args.max_order}'}")
    return 0


def cmd_aut_recognize(args) -> int:
    N = args.N
    if args.images is not None:
        try:
            raw = sys.stdin.read() if args.images == "-" else Path(args.images).read_text()
            imgs = {g: ConfElem.from_json(v, N) for g, v in json.loads(raw).items()}
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read images: {exc}") from exc
    else:
        imgs = autgrp.images(_spec_arg(args, N))
    try:
        s = autgrp.recognize(imgs, N)
    except autgrp.NotAnAutomorphism as exc:
        _emit({"recognized": None, "error": str(exc)})
        _say(f"not an automorphism: {exc}")
        return 1
    _emit({"recognized": s.to_json()})
    _say(f"recognized {s}")
    return 0


def cmd_aut_eigenspaces(args) -> int:
    s = _spec_arg(args, args.N)
    try:
        spaces = autgrp.eigenspaces(s, args.order)
    except (autgrp.OrderMismatch, ValueError) as exc:
        _emit({"spec": s.to_json(), "error": str(exc)})
        _say(str(exc))
        return 1
    doc = [{"grade": i, "dimension": len(b), "basis": [_elem_json(v) for v in b]} for i, b in enumerate(spaces)]
    _emit({"spec": s.to_json(), "order": args.order, "eigenspaces": doc})
    _say("dimensions: " + ", ".join(str(len(b)) for b in spaces))
    return 0


# ---------------------------------------------------------------------------
# loop

def cmd_loop_build(args) -> int:
    s = parse_spec(args.sigma, args.N)
    try:
        L = loop.build_loop(s, args.order)
    except (autgrp.OrderMismatch, ValueError) as exc:
        _emit({"sigma": s.to_json(), "error": str(exc)})
        _say(str(exc))
        return 1
    doc = {"sigma": s.to_json(), "order": args.order, "grades": L.graded_table()}
    if args.window is not None:
        doc["window"] = str(args.window)
        doc["basis"] = [{"element": str(x), "exponent": str(k)} for x, k in L.window(args.window)]
    _emit(doc)
    _say(f"loop of order {args.order}: grade dimensions "
         + ", ".join(str(len(b)) for b in L.eigenbases))
    return 0


# ---------------------------------------------------------------------------
# modes

def _which_gamma(args):
    gamma = parse_gamma(args.gamma)
    try:
        which = modes._canon(args.which)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if which == "untwisted-gamma" and gamma is None:
        raise UsageError("--which untwisted-gamma needs --gamma")
    return which, gamma


def cmd_modes_table(args) -> int:
    which, gamma = _which_gamma(args)
    rep = modes.verify_table(which, args.window, gamma, N=args.N)
    sys.stdout.write(modes.export_table(which, args.window, args.format, gamma, args.N))
    _say(_report_summary(f"table {which} window {args.window}", rep))
    for f in rep.suspected[:2]:
        _say(f"  suspected misprint {tuple(f.witness)}: engine {f.left}, printed {f.right}")
    return 0 if rep.passed else 1


def cmd_modes_jacobi(args) -> int:
    which, gamma = _which_gamma(args)
    rep = modes.super_jacobi_window(which, args.window, gamma, N=args.N)
    _emit({"check": "super-jacobi", "which": which, "window": str(args.window), **rep.to_json()})
    _say(_report_summary(f"super jacobi {which} window {args.window}", rep))
    return 0 if rep.passed else 1


def cmd_modes_export(args) -> int:
    which, gamma = _which_gamma(args)
    doc = modes.export_table(which, args.window, args.format, gamma, args.N)
    if args.output:
        Path(args.output).write_text(doc)
        _emit({"written": str(args.output), "format": args.format, "bytes": len(doc.encode())})
        _say(f"wrote {args.output}")
    else:
        sys.stdout.write(doc)
    return 0


def cmd_modes_derive_central(args) -> int:
    terms = modes.derive_central_terms(N=args.N)
    if args.output:
        modes.write_central_terms(args.output, terms)
    _emit({"terms": terms})
    _say(f"derived {len(terms)} central terms")
    return 0


# ---------------------------------------------------------------------------
# parser

def _window(text: str) -> Fraction:
    try:
        w = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from exc
    if w < 0:
        raise argparse.ArgumentTypeError("window must be >= 0")
    return w


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="identity, omega or 'A=..;B=..;f=..;eps=..'")
    p.add_argument("--A", default="I", help="matrix literal such as [[1,t],[0,1]]")
    p.add_argument("--B", default="I")
    p.add_argument("--f", default="0", help="Laurent literal such as t+t^-1")
    p.add_argument("--eps", default="0", choices=("0", "1"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=_positive, default=DEFAULT_N,
                        help="cyclotomic order of the scalar field (env LARGEN4_N)")
    common.add_argument("--jobs", type=_positive, default=axioms.default_jobs(),
                        help="worker processes for sweeps (env LARGEN4_JOBS)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized trials")

    parser = argparse.ArgumentParser(prog="largen4",
                                     description="Exact engine for the large N=4 conformal superalgebra.")
    groups = parser.add_subparsers(dest="group", required=True)

    verify = groups.add_parser("verify", help="axiom and homomorphism checks").add_subparsers(dest="cmd", required=True)
    p = verify.add_parser("axioms", parents=[common])
    p.add_argument("--gamma", help="rational gamma or 'centreless' (default)")
    p.set_defaults(fn=cmd_verify_axioms)
    p = verify.add_parser("homomorphism", parents=[common])
    p.add_argument("--gamma")
    p.add_argument("--spec", help="identity, omega, hat-omega, hat-tau or 'A=..;B=..;f=..;eps=..'")
    p.add_argument("--A", default="I")
    p.add_argument("--B", default="I")
    p.add_argument("--f", default="0")
    p.add_argument("--eps", default="0", choices=("0", "1"))
    p.set_defaults(fn=cmd_verify_homomorphism)

    aut = groups.add_parser("aut", help="automorphisms").add_subparsers(dest="cmd", required=True)
    p = aut.add_parser("apply", parents=[common])
    _spec_flags(p)
    p.add_argument("--gen", action="append", help="generator to map (repeatable; default all)")
    p.set_defaults(fn=cmd_aut_apply)
    p = aut.add_parser("compose", parents=[common])
    p.add_argument("--outer", required=True)
    p.add_argument("--inner", required=True)
    p.set_defaults(fn=cmd_aut_compose)
    p = aut.add_parser("order", parents=[common])
    _spec_flags(p)
    p.add_argument("--max-order", type=_positive, default=64)
    p.set_defaults(fn=cmd_aut_order)
    p = aut.add_parser("recognize", parents=[common])
    _spec_flags(p)
    p.add_argument("--images", help="JSON file of generator images ('-' for stdin)")
    p.set_defaults(fn=cmd_aut_recognize)
    p = aut.add_parser("eigenspaces", parents=[common])
    _spec_flags(p)
    p.add_argument("--order", type=_positive, required=True)
    p.set_defaults(fn=cmd_aut_eigenspaces)

    lp = groups.add_parser("loop", help="twisted loop algebras").add_subparsers(dest="cmd", required=True)
    p = lp.add_parser("build", parents=[common])
    p.add_argument("--sigma", required=True)
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--window", type=_window)
    p.set_defaults(fn=cmd_loop_build)

    md = groups.add_parser("modes", help="mode algebras").add_subparsers(dest="cmd", required=True)
    for name, fn in (("table", cmd_modes_table), ("jacobi", cmd_modes_jacobi), ("export", cmd_modes_export)):
        p = md.add_parser(name, parents=[common])
        p.add_argument("--which", required=True,
                       help="untwisted-centreless, untwisted-gamma or twisted-omega")
        p.add_argument("--window", type=_window, default=Fraction(1))
        p.add_argument("--gamma")
        if name != "jacobi":
            p.add_argument("--format", choices=modes.FORMATS, default="text")
        if name == "export":
            p.add_argument("--output", help="write the document to this path")
        p.set_defaults(fn=fn)
    p = md.add_parser("derive-central", parents=[common])
    p.add_argument("--output", help="write the central-term JSON to this path")
    p.set_defaults(fn=cmd_modes_derive_central)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    random.seed(args.seed)
    try:
        return args.fn(args)
    except UsageError as exc:
        _say(f"largen4: error: {exc}")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
