"""Batch command line front-end.

Subcommands: ``analyze`` (class profile of a finite monoid), ``dualize``
(dual groupoid, round trip, ideals, class dictionary), ``cuntz``
(prefix-exchange computations and certified witness constructions),
``verify`` (named invariant suites) and ``export-dot``.

Output is JSON with sorted keys, so identical inputs and seeds give
byte-identical reports; ``--human`` switches on indentation.  Exit codes:
0 ok, 1 verification or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import cuntz as cz
from .bim import CarrierError, kb_monoid
from .checkers import classify_monoid, monoid_from_group
from .duality import groupoid_of, ideal_correspondence, roundtrip, theorem_dictionary
from .groupoid import BisectionError, GroupoidError, build_groupoid, groupoid_properties
from .verify import run_suite


def _load_monoid(args):
    if getattr(args, "from_group", None):
        n = int(args.from_group[0])
        return monoid_from_group(n, list(args.from_group[1:]))
    spec = args.monoid
    if spec is None:
        raise GroupoidError("no model given; use --monoid or --from-group")
    if os.path.exists(spec) and spec.endswith(".json"):
        with open(spec) as fh:
            return kb_monoid(json.load(fh))
    return kb_monoid(spec)


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _dumps(args, payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2 if args.human else None)


def cmd_analyze(args) -> int:
    S = _load_monoid(args)
    profile = classify_monoid(S)
    payload = {
        "monoid": S.name,
        "size": len(S),
        "units": len(S.units),
        "idempotents": len(S.idempotents),
        "atoms": len(S.atoms),
        "profile": profile.to_json(),
    }
    _emit(args, _dumps(args, payload))
    return 0


def cmd_dualize(args) -> int:
    S = _load_monoid(args)
    dual = groupoid_of(S)
    payload = {
        "monoid": S.name,
        "groupoid": {
            "objects": list(dual.gpd.objects),
            "n_arrows": dual.gpd.n_arrows,
            "properties": groupoid_properties(dual.gpd).to_json(),
        },
        "roundtrip": roundtrip(S).to_json(),
        "ideal_correspondence": ideal_correspondence(S).to_json(),
        "dictionary": theorem_dictionary(S).to_json(),
    }
    _emit(args, _dumps(args, payload))
    return 0 if payload["roundtrip"]["ok"] else 1


_PURE_OPS = {
    "compose": 2, "inverse": 1, "meet": 2, "join": 2, "phi": 1, "sigma": 1,
    "d": 1, "r": 1, "canonical": 1, "classify": 1, "evaluate": 2,
    "basic-decompose": 1, "moved-points": 1,
    "clopen-meet": 2, "clopen-join": 2, "clopen-complement": 1, "clopen-leq": 2,
}


def cmd_cuntz(args) -> int:
    n, op, argv = args.n, args.op, args.args
    cap = args.depth_cap
    if op in cz.WITNESS_OPS:
        cert = cz.certify(op, n, *argv)
        _emit(args, cz.certificate_json(cert, human=args.human))
        return 0 if cert["verified"] else 1
    if op not in _PURE_OPS:
        raise cz.CuntzError(
            f"unknown op {op!r}; pure ops: {', '.join(sorted(_PURE_OPS))}; "
            f"witness ops: {', '.join(sorted(cz.WITNESS_OPS))}")
    if len(argv) != _PURE_OPS[op]:
        raise cz.CuntzError(f"op {op} expects {_PURE_OPS[op]} argument(s)")

    def elem(text):
        return cz.parse_cuntz_element(text, n)

    def clop(text):
        return cz.parse_clopen(text, n)

    if op == "compose":
        out = str(cz.compose(elem(argv[0]), elem(argv[1]), cap))
    elif op == "inverse":
        out = str(elem(argv[0]).inv())
    elif op == "meet":
        out = str(cz.meet(elem(argv[0]), elem(argv[1])))
    elif op == "join":
        out = str(cz.join(elem(argv[0]), elem(argv[1]), cap))
    elif op == "phi":
        out = str(elem(argv[0]).fixpoint_set())
    elif op == "sigma":
        out = str(elem(argv[0]).support_set())
    elif op == "d":
        out = str(elem(argv[0]).d_set())
    elif op == "r":
        out = str(elem(argv[0]).r_set())
    elif op == "canonical":
        out = str(elem(argv[0]))
    elif op == "classify":
        c = cz.classify(elem(argv[0]))
        out = _dumps(args, {"is_idempotent": c.is_idempotent,
                            "is_infinitesimal": c.is_infinitesimal,
                            "is_unit": c.is_unit, "is_atom": c.is_atom})
    elif op == "evaluate":
        res = elem(argv[0]).evaluate(cz.parse_word(argv[1], n))
        out = res.kind if res.word is None else cz.format_word(res.word)
    elif op == "basic-decompose":
        rec = cz.basic_decompose(elem(argv[0]))
        payload = {"ok": rec.ok}
        if rec.ok:
            payload["idempotent"] = str(rec.idempotent)
            payload["infinitesimals"] = [str(x) for x in rec.infinitesimals]
        else:
            u, v = rec.witness_rule
            payload["witness_rule"] = f"{cz.format_word(u)}->{cz.format_word(v)}"
        out = _dumps(args, payload)
    elif op == "moved-points":
        rep = cz.moved_point_check(elem(argv[0]), depth=args.depth)
        out = _dumps(args, rep.to_json())
    elif op == "clopen-meet":
        out = str(clop(argv[0]) & clop(argv[1]))
    elif op == "clopen-join":
        out = str(clop(argv[0]) | clop(argv[1]))
    elif op == "clopen-complement":
        out = str(clop(argv[0]).complement())
    else:  # clopen-leq
        out = json.dumps(clop(argv[0]).leq(clop(argv[1])))
    _emit(args, out)
    return 0


def cmd_verify(args) -> int:
    try:
        report = run_suite(args.suite, seed=args.seed)
    except KeyError as k:
        print(f"error: {k.args[0]}", file=sys.stderr)
        return 2
    _emit(args, _dumps(args, report))
    return 0 if report["ok"] else 1


def cmd_export_dot(args) -> int:
    if os.path.exists(args.monoid) and args.monoid.endswith(".json"):
        with open(args.monoid) as fh:
            g = build_groupoid(json.load(fh))
    else:
        g = build_groupoid(args.monoid)
    if args.dual:
        g = groupoid_of(kb_monoid(g)).gpd
    _emit(args, g.to_dot())
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bimdual",
        description="Finite Boolean inverse meet-monoids, their dual groupoids, "
                    "and prefix-exchange maps on Cantor space.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write the report to a file instead of stdout")
        p.add_argument("--human", action="store_true", help="indent JSON output")

    p = sub.add_parser("analyze", help="class profile of a finite monoid")
    p.add_argument("--monoid", help="model spec: pair:n, group:Zn, "
                                    "disjoint_union(...), or a JSON file")
    p.add_argument("--from-group", nargs="+", metavar="ARG",
                   help="point count followed by generator permutations")
    add_common(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("dualize", help="dual groupoid, round trip, ideals, dictionary")
    p.add_argument("--monoid", required=True)
    add_common(p)
    p.set_defaults(fn=cmd_dualize)

    p = sub.add_parser("cuntz", help="prefix-exchange computations and witnesses")
    p.add_argument("--n", type=int, default=2, help="alphabet size (default 2)")
    p.add_argument("--op", required=True)
    p.add_argument("--depth-cap", type=int, default=cz.DEFAULT_DEPTH_CAP)
    p.add_argument("--depth", type=int, default=4, help="sampling depth for moved-points")
    p.add_argument("args", nargs="*", help="element ('0->10, 11->0') or clopen ('{0, 11}') arguments")
    add_common(p)
    p.set_defaults(fn=cmd_cuntz)

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("--suite", required=True,
                   help="order-calculus | duality | classes | armature | cuntz | all")
    p.add_argument("--seed", type=int, default=42)
    add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("export-dot", help="DOT graph of a groupoid")
    p.add_argument("--monoid", required=True, help="groupoid spec or JSON file")
    p.add_argument("--dual", action="store_true",
                   help="export the atom groupoid of the monoid over the spec")
    add_common(p)
    p.set_defaults(fn=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GroupoidError, BisectionError, CarrierError, cz.CuntzError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
