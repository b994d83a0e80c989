"""Command-line front end: ``dmorse <command> --complex PATH ...``.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 input
error, 3 an enumeration guard was exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .complex import fmt_simplex, load_complex
from .errors import GuardExceeded, InvalidMatching, InvalidMorseFunction, ParseError
from .gradient import (
    DEFAULT_MAX_PATHS,
    GradientVectorField,
    dmf_to_gvf,
    is_acyclic,
    check_matching,
    parse_dmf,
    parse_gvf,
    validate_dmf,
)
from .morse_chain import format_matrices, morse_equality_report, simplicial_betti, simplicial_boundaries
from .morse_space import (
    DEFAULT_MAX_MATCHINGS,
    build_morse_function_complex,
    connectivity_report,
    random_matching,
    to_dot,
)
from .transitions import (
    MorseCache,
    birth_death_maps,
    chain_homotopy,
    connect,
    closed_form_check,
    boundary_relations_check,
    verify_chain_map,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None


def _complex(args):
    if not args.complex:
        raise InputError("--complex is required")
    try:
        return load_complex(args.complex)
    except OSError as exc:
        raise InputError(str(exc)) from None


def _gvf(K, path):
    V = parse_gvf(_read(path))
    for a, s in V.pairs:
        if a not in K or s not in K:
            raise InputError(f"{path}: pair ({fmt_simplex(a)} | {fmt_simplex(s)}) not in complex")
    return V


def _field(K, args, path=None):
    """GVF from --gvf (or the given path), else induced by --dmf, else empty."""
    if path is not None:
        return GradientVectorField.on(K, _gvf(K, path).pairs)
    if args.dmf:
        return dmf_to_gvf(K, parse_dmf(_read(args.dmf)))
    return GradientVectorField()


def _header(args, command):
    return {
        "command": command,
        "version": __version__,
        "seed": args.seed,
        "guards": {"max_paths": args.max_paths, "max_matchings": args.max_matchings},
    }


def cmd_validate(args):
    K = _complex(args)
    report = _header(args, "validate")
    if args.dmf:
        f = parse_dmf(_read(args.dmf))
        try:
            res = validate_dmf(K, f)
        except InvalidMorseFunction as exc:
            raise InputError(str(exc)) from None
        report["kind"] = "dmf"
        report["valid"] = res.ok
        report["violations"] = [
            {"simplex": list(v.simplex), "condition": v.condition, "witnesses": [list(w) for w in v.witnesses]}
            for v in res.violations
        ]
        if res.ok:
            report["pairs"] = [[list(a), list(s)] for a, s in dmf_to_gvf(K, f).sorted_pairs()]
        return report, EXIT_OK if res.ok else EXIT_FAIL
    if not args.gvf:
        raise InputError("validate needs --gvf or --dmf")
    V = _gvf(K, args.gvf[0])
    report["kind"] = "gvf"
    try:
        check_matching(K, V.pairs)
    except InvalidMatching as exc:
        report.update(valid=False, error=str(exc))
        return report, EXIT_FAIL
    ok, cycle = is_acyclic(K, V.pairs)
    report["valid"] = ok
    if not ok:
        report["cycle"] = [list(s) for s in cycle]
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_homology(args):
    K = _complex(args)
    V = _field(K, args, args.gvf[0] if args.gvf else None)
    ctx = MorseCache(K, args.max_paths)
    mc = ctx.morse(V)
    simp = list(simplicial_betti(K))
    morse = list(mc.betti())
    eq = morse_equality_report(K, V)
    report = _header(args, "homology")
    report.update(
        betti_simplicial=simp,
        betti_morse=morse,
        equal=simp == morse,
        critical_counts=list(mc.critical_counts),
        euler=eq["euler"],
        morse_equality=eq,
        pairs=[[list(a), list(s)] for a, s in V.sorted_pairs()],
    )
    report["pass"] = report["equal"] and eq["pass"]
    if args.format == "text":
        report["_text_extra"] = (
            "# simplicial boundary\n" + format_matrices(simplicial_boundaries(K), [K.simplices(q) for q in range(K.dim + 1)])
            + "# morse boundary\n" + format_matrices(mc.boundaries, mc.bases)
        )
    return report, EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_connect(args):
    K = _complex(args)
    paths = args.gvf or []
    if len(paths) != 2:
        raise InputError("connect needs --gvf twice (source and target)")
    V1 = _field(K, args, paths[0])
    V2 = _field(K, args, paths[1])
    seq = connect(K, V1, V2, args.policy, MorseCache(K, args.max_paths))
    report = _header(args, "connect")
    report.update(seq.report())
    ok = report["composite_iso"] and all(s["chain_map_ok"] for s in report["steps"])
    report["pass"] = ok
    return report, EXIT_OK if ok else EXIT_FAIL


def _sample_relations(K, args):
    if args.samples is None:
        mfc = build_morse_function_complex(K, True, args.max_matchings)
        return mfc.covering_relations(), "exhaustive"
    rng = random.Random(args.seed)
    try:
        rels = build_morse_function_complex(K, True, args.max_matchings).covering_relations()
        if args.samples < len(rels):
            idx = sorted(rng.sample(range(len(rels)), args.samples))
            rels = [rels[i] for i in idx]
        return rels, "sampled"
    except GuardExceeded:
        rels = []
        while len(rels) < args.samples:
            W = random_matching(K, rng)
            if W.pairs:
                p = rng.choice(W.sorted_pairs())
                rels.append((W - [p], W))
        return rels, "sampled-random"


def verify_relation(K, lo, hi, ctx, max_paths=DEFAULT_MAX_PATHS) -> dict:
    """Run every transition check on one covering relation lo < hi."""
    res = birth_death_maps(K, lo, hi, ctx)
    (pair,) = hi.pairs - lo.pairs
    rec = {"pair": [list(pair[0]), list(pair[1])]}
    if res is None:
        rec.update(transition=False, ok=False)
        return rec
    t, h, g = res
    forms = closed_form_check(K, t, h, g, max_paths)
    rels = boundary_relations_check(K, t, ctx, max_paths)
    s = chain_homotopy(t, h, g)
    rec.update(
        transition=True,
        k=t.k,
        dim=t.dim,
        birth_chain_map=verify_chain_map(h).ok,
        death_chain_map=verify_chain_map(g).ok,
        closed_forms=forms["ok"],
        boundary_relations=rels["ok"],
        boundary_variant=rels["variant_ok"],
        homotopy=s.ok,
        integral=s.integral,
    )
    rec["ok"] = all(rec[key] for key in ("birth_chain_map", "death_chain_map", "closed_forms", "boundary_relations", "homotopy"))
    return rec


def cmd_verify(args):
    K = _complex(args)
    rels, mode = _sample_relations(K, args)
    ctx = MorseCache(K, args.max_paths)
    records = [verify_relation(K, lo, hi, ctx, args.max_paths) for lo, hi in rels]
    report = _header(args, "verify")
    checks = ("birth_chain_map", "death_chain_map", "closed_forms", "boundary_relations", "homotopy")
    report.update(
        mode=mode,
        relations=len(records),
        passed={c: sum(bool(r.get(c)) for r in records) for c in checks},
        boundary_variant_passed=sum(bool(r.get("boundary_variant")) for r in records),
        failures=[r for r in records if not r["ok"]],
        records=records,
    )
    report["pass"] = not report["failures"]
    return report, EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_morse_space(args):
    K = _complex(args)
    mfc = build_morse_function_complex(K, args.augmented, args.max_matchings)
    report = _header(args, "morse-space")
    report.update(connectivity_report(mfc, with_betti=args.betti))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(mfc))
    return report, EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "connect": cmd_connect,
    "verify": cmd_verify,
    "morse-space": cmd_morse_space,
}


def _positive(text):
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--complex", metavar="PATH")
    common.add_argument("--gvf", metavar="PATH", action="append")
    common.add_argument("--dmf", metavar="PATH")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-paths", type=_positive, default=DEFAULT_MAX_PATHS)
    common.add_argument("--max-matchings", type=_positive, default=DEFAULT_MAX_MATCHINGS)
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="dmorse", description="Discrete Morse birth-death transitions")
    parser.add_argument("--version", action="version", version=f"dmorse {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a DMF or GVF file")
    sub.add_parser("homology", parents=[common], help="simplicial and Morse Betti numbers")
    p = sub.add_parser("connect", parents=[common], help="birth-death sequence between two GVFs")
    p.add_argument("--policy", choices=("full", "shortcut"), default="full")
    p = sub.add_parser("verify", parents=[common], help="check all transitions of M(K)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--samples", type=_positive)
    p = sub.add_parser("morse-space", parents=[common], help="enumerate the complex of Morse functions")
    p.add_argument("--augmented", action="store_true")
    p.add_argument("--betti", action="store_true", help="also compute Betti numbers of the complex")
    p.add_argument("--dot", metavar="PATH")
    return parser


def render(report: dict, fmt: str) -> str:
    extra = report.pop("_text_extra", "")
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = [f"{key}: {json.dumps(report[key], sort_keys=True)}" for key in sorted(report)]
    return "\n".join(lines) + "\n" + extra


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, code = COMMANDS[args.command](args)
    except (InputError, ParseError, InvalidMorseFunction) as exc:
        print(f"dmorse: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidMatching as exc:
        print(f"dmorse: invalid gradient vector field: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except GuardExceeded as exc:
        print(f"dmorse: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    sys.stdout.write(render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
