"""Command line interface: ``catcoh <command> ...``.

Exit codes: 0 success, 1 validation failure, 2 input error, 3 cell budget
exceeded, 4 internal invariant breach (δδ != 0).
"""

from __future__ import annotations

import argparse
import math
import random
import sys
from pathlib import Path

from .abgrp import format_factors
from .bwcoh import DEFAULT_BUDGET, BudgetExceeded, BWComplex, ConventionError
from .corpus import DATA_DIR, corpus_files
from .fileformat import ParseError, Workspace, load, parse_choices
from .fincat import validate
from .natsys import FunctorialityError, validate_functoriality
from .oracle import oracle_group_cohomology
from .trackcat import (TrackError, characteristic_cocycle, class_of, default_choices,
                       random_choices, validate_extension)
from .triang import (RangeError, check_triangulation_iso, flag_complex, subdivide_cube,
                     top_simplex_count)
from .wcube import CubicalComplex, matrices_correspond

EXIT_OK, EXIT_INVALID, EXIT_INPUT, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def resolve(path: str) -> Path:
    """A path on disk, or the name of a bundled example."""
    p = Path(path)
    if p.exists():
        return p
    for cand in (DATA_DIR / path, DATA_DIR / f"{path}.cat"):
        if cand.exists():
            return cand
    raise CliError(EXIT_INPUT, f"{path}: no such file or bundled example")


def _load(path: str) -> Workspace:
    try:
        return load(resolve(path))
    except ParseError as exc:
        raise CliError(EXIT_INPUT, f"parse error: {exc}") from None


def _lawful(ws: Workspace, out):
    """Category and coefficient checks every computing command runs first."""
    rep = validate(ws.category)
    if rep:
        for e in rep:
            print(f"category: {e}", file=out)
        raise CliError(EXIT_INVALID, "category is not lawful")
    if ws.coefficients is None:
        raise CliError(EXIT_INPUT, "file has no coefficients block")
    try:
        ns = ws.natural_system()
    except FunctorialityError as exc:
        raise CliError(EXIT_INVALID, f"coefficients: {exc}") from None
    rep = validate_functoriality(ns)
    if rep:
        for e in rep:
            print(f"coefficients: {e}", file=out)
        raise CliError(EXIT_INVALID, "coefficients are not a natural system")
    return ns


def _degrees(text: str) -> list[int]:
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise CliError(EXIT_INPUT, f"bad degree {text!r}") from None
    if lo < 0 or hi < lo:
        raise CliError(EXIT_INPUT, f"bad degree range {text!r}")
    return list(range(lo, hi + 1))


# ------------------------------------------------------------- commands

def cmd_validate(args, out) -> int:
    ws = _load(args.file)
    problems = [f"category: {e}" for e in validate(ws.category)]
    ns = None
    if not problems and ws.coefficients is not None:
        try:
            ns = ws.natural_system()
        except FunctorialityError as exc:
            problems.append(f"coefficients: {exc}")
        else:
            problems += [f"coefficients: {e}" for e in validate_functoriality(ns)]
    if not problems and ws.track is not None:
        problems += [f"track: {e}" for e in validate_extension(ws.extension())]
    for p in problems:
        print(p, file=out)
    parts = ["category"]
    if ws.coefficients is not None:
        parts.append(f"{ws.coefficients.kind} coefficients")
    if ws.track is not None:
        parts.append("track extension")
    verdict = "ok" if not problems else f"{len(problems)} violation(s)"
    print(f"{ws.name}: {', '.join(parts)}: {verdict}", file=out)
    return EXIT_OK if not problems else EXIT_INVALID


def _complex(ws, ns, kind, budget):
    if kind == "cubical":
        return CubicalComplex(ws.category, ns, budget=budget)
    return BWComplex(ws.category, ns, budget=budget)


def cmd_cohomology(args, out) -> int:
    ws = _load(args.file)
    ns = _lawful(ws, out)
    if args.unnormalized:
        if args.complex != "simplicial":
            raise CliError(EXIT_INPUT, "--unnormalized applies to the simplicial complex")
        cx = BWComplex(ws.category, ns, normalized=False, budget=args.budget)
    else:
        cx = _complex(ws, ns, args.complex, args.budget)
    for n in _degrees(args.degree):
        free, tors = cx.cohomology(n)
        if args.format == "records":
            print(f"{n} {free} [{','.join(map(str, tors))}]", file=out)
        else:
            print(f"H^{n} = {format_factors(free, tors)}", file=out)
    return EXIT_OK


def cmd_compare(args, out) -> int:
    ws = _load(args.file)
    ns = _lawful(ws, out)
    top = args.max_degree
    if top < 1:
        raise CliError(EXIT_INPUT, "--max-degree must be at least 1")
    bw = BWComplex(ws.category, ns, budget=args.budget)
    cube = CubicalComplex(ws.category, ns, budget=args.budget)
    rows = [("k", "cubical H^k", "simplicial H^(k+1)", "verdict")]
    ok = True
    for k in range(0, top):
        c = format_factors(*cube.cohomology(k))
        s = format_factors(*bw.cohomology(k + 1))
        if k == 0:
            verdict = "boundary (not asserted)"
        else:
            verdict = "MATCH" if c == s else "MISMATCH"
            ok &= c == s
        rows.append((str(k), c, s, verdict))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    for r in rows:
        print("  ".join(x.ljust(w) for x, w in zip(r, widths)) + "  " + r[3], file=out)
    mats = all(matrices_correspond(cube, bw, n) for n in range(1, top + 1))
    print(f"matrix correspondence, cubical degree n-1 vs simplicial delta^n, "
          f"n = 1..{top}: {'MATCH' if mats else 'MISMATCH'}", file=out)
    return EXIT_OK if ok and mats else EXIT_INVALID


def cmd_obstruction(args, out) -> int:
    ws = _load(args.file)
    if ws.track is None:
        raise CliError(EXIT_INPUT, "file has no track block")
    ns = _lawful(ws, out)
    ext = ws.extension()
    rep = validate_extension(ext)
    if rep:
        for e in rep:
            print(f"track: {e}", file=out)
        raise CliError(EXIT_INVALID, "track extension is not lawful")
    if args.choices is None:
        choices, how = default_choices(ext), "default"
    elif args.choices.lstrip("-").isdigit():
        choices = random_choices(ext, random.Random(int(args.choices)))
        how = f"seed {args.choices}"
    else:
        try:
            text = Path(args.choices).read_text(encoding="utf-8")
            choices = parse_choices(text, ext, args.choices)
        except OSError as exc:
            raise CliError(EXIT_INPUT, f"{args.choices}: {exc.strerror}") from None
        except ParseError as exc:
            raise CliError(EXIT_INPUT, f"parse error: {exc}") from None
        how = f"file {args.choices}"
    K, tc = ws.category, ext.track
    cx = BWComplex(K, ns, budget=args.budget)
    print(f"extension {ws.name}, choices: {how}", file=out)
    for phi in range(len(K)):
        print(f"  s({K.mname(phi)}) = {tc.name1(choices.section[phi])}", file=out)
    for (phi, psi), h in sorted(choices.tracks.items()):
        if K.is_identity(phi) or K.is_identity(psi):
            continue
        print(f"  H({K.mname(phi)}, {K.mname(psi)}) = {tc.name2(h)}", file=out)
    try:
        chi = characteristic_cocycle(ext, choices, cx)
    except TrackError as exc:
        raise CliError(EXIT_INVALID, str(exc)) from None
    print("cocycle on nondegenerate 3-simplices:", file=out)
    for sig, val in cx.evaluate(3, chi).items():
        names = ", ".join(K.mname(a) for a in sig)
        print(f"  ({names}) -> [{', '.join(str(int(x)) for x in val)}]", file=out)
    report = class_of(ext, choices, cx)
    print(f"H^3 = {format_factors(*cx.cohomology(3))}", file=out)
    print(f"coordinates: ({', '.join(map(str, report.coordinates))})", file=out)
    print(f"vanishing: {'yes' if report.vanishing else 'no'}", file=out)
    print(report.describe(), file=out)
    return EXIT_OK


def cmd_triangulate(args, out) -> int:
    n = args.n
    try:
        cx = subdivide_cube(n) if args.model == "cube" else flag_complex(n)
        if not args.no_dump:
            title = (f"triangulated {n}-cube" if args.model == "cube"
                     else f"flag complex for {n + 1} letters")
            print(cx.dump(title), file=out)
        if args.check:
            res = check_triangulation_iso(n)
            count = top_simplex_count(n)
            noun = "simplex" if count == 1 else "simplices"
            if res.iso:
                for a, b in res.certificate.items():
                    print(f"iso {a} -> {b}", file=out)
            else:
                print(f"no isomorphism: {res.reason}", file=out)
            print(f"{count} top {noun} ({n}! = {math.factorial(n)}), "
                  f"iso: {'true' if res.iso else 'false'}", file=out)
            if count != math.factorial(n) or not res.iso:
                return EXIT_INVALID
    except RangeError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    ws = _load(args.file)
    if not ws.category.is_one_object():
        raise CliError(EXIT_INPUT, f"oracle needs a one-object category, "
                                   f"{ws.name} has {len(ws.category.objects)} objects")
    _lawful(ws, out)
    gm = ws.group_module()
    if gm is None:
        raise CliError(EXIT_INPUT, "oracle needs constant or group-module coefficients")
    module, action = gm
    for n in _degrees(args.degree):
        free, tors = oracle_group_cohomology(ws.category, module, action, n)
        print(f"H^{n} = {format_factors(free, tors)}", file=out)
    return EXIT_OK


def cmd_corpus(args, out) -> int:
    for p in corpus_files():
        print(p.name, file=out)
    return EXIT_OK


# ------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="catcoh",
        description="Cohomology of finite categories with natural-system coefficients.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_file(p):
        p.add_argument("file", help="workspace file, or the name of a bundled example")

    def add_budget(p):
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="maximum number of cells per degree (default %(default)s)")

    p = sub.add_parser("validate", help="check category, coefficient and track laws")
    add_file(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", help="invariant factors of H^n")
    add_file(p)
    p.add_argument("--complex", choices=("simplicial", "cubical"), default="simplicial")
    p.add_argument("--degree", required=True, help="n or a range lo-hi")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.add_argument("--unnormalized", action="store_true",
                   help="use all simplices, degenerate ones included")
    add_budget(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("compare", help="cubical H^k against simplicial H^(k+1)")
    add_file(p)
    p.add_argument("--max-degree", type=int, default=4)
    add_budget(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("obstruction", help="characteristic cocycle and its class")
    add_file(p)
    p.add_argument("--choices", help="integer seed for random choices, or a choices file")
    add_budget(p)
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("triangulate", help="parenthesization triangulation of a cube")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", action="store_true",
                   help="compare with the flag complex and count top simplices")
    p.add_argument("--model", choices=("cube", "flag"), default="cube")
    p.add_argument("--no-dump", action="store_true", help="skip the face lists")
    p.set_defaults(func=cmd_triangulate)

    p = sub.add_parser("oracle", help="group cohomology from the bar resolution")
    add_file(p)
    p.add_argument("--degree", required=True, help="n or a range lo-hi")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("corpus", help="list the bundled examples")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConventionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
