"""Command-line interface.

Subcommands: close, height, tents, witness, verify, random, dot.  Family
input is read from ``--input`` (default stdin).  ``--format structured``
prints one JSON document per invocation.

Exit statuses: 0 success, 1 census found violations, 2 usage error,
3 malformed input, 4 input not union-closed, 5 internal invariant
violated, 6 conjecture violated.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    ConjectureViolation,
    FamilyError,
    InvariantViolation,
    NotUnionClosedError,
)
from .family import SetFamily, format_family, parse_family, union_closure
from .height import (
    height_decomposition,
    height_number_of_set,
    verify_height_properties,
)
from .oracle import random_family, verify_all
from .tent import intersection_number, tent_of
from .witness import find_witness

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_PARSE = 3
EXIT_NOT_CLOSED = 4
EXIT_INVARIANT = 5
EXIT_CONJECTURE = 6


def _fmt_set(labels) -> str:
    return "{" + ",".join(map(str, labels)) + "}"


def family_doc(f: SetFamily) -> dict:
    return {"n": f.n, "m": f.m, "members": f.label_sets()}


def _read_family(args) -> SetFamily:
    if args.input in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    family, _ = parse_family(text)
    return family


def _emit(args, doc: dict, human: str) -> None:
    if args.format == "structured":
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write(human)


def cmd_close(args) -> int:
    f = _read_family(args)
    closed = union_closure(f.members, f.n, f.labels)
    _emit(args, {"command": "close", "family": family_doc(closed)}, format_family(closed))
    return EXIT_OK


def cmd_height(args) -> int:
    f = _read_family(args)
    d = height_decomposition(f)
    props = verify_height_properties(f, d)
    layers = []
    lines = [f"n={f.n} m={f.m} H={d.H}\n"]
    for peel, layer in enumerate(d.layers, 1):
        sets = [f.label_list(f.members[i]) for i in layer]
        k = height_number_of_set(d, layer[0])
        layers.append({"peel_index": peel, "height_number": k, "members": sets})
        lines.append(f"pi_{peel} (height {k}): " + " ".join(_fmt_set(s) for s in sets) + "\n")
    failed = props.failures()
    lines.append("properties: " + ("all pass" if not failed else "FAILED " + ",".join(failed)) + "\n")
    doc = {
        "command": "height",
        "family": family_doc(f),
        "H": d.H,
        "layers": layers,
        "properties": props.to_dict(),
    }
    _emit(args, doc, "".join(lines))
    return EXIT_OK


def cmd_tents(args) -> int:
    f = _read_family(args)
    d = height_decomposition(f)
    apexes = []
    pairs = []
    lines = [f"n={f.n} m={f.m} H={d.H}\n"]
    for peel in range(2, d.H + 1):
        layer = d.layer(peel)
        lines.append(f"layer {peel}:\n")
        for i in layer:
            t = tent_of(f, d, i)
            apex = f.label_list(f.members[i])
            base = [f.label_list(f.members[j]) for j in t.base]
            apexes.append({"peel_index": peel, "apex": apex, "size": t.size, "base": base})
            lines.append(f"  T({_fmt_set(apex)}) |T|={t.size} base: "
                         + " ".join(_fmt_set(b) for b in base) + "\n")
        for x, a in enumerate(layer):
            for b in layer[x + 1:]:
                k = intersection_number(f, d, a, b)
                sa, sb = f.label_list(f.members[a]), f.label_list(f.members[b])
                pairs.append({"peel_index": peel, "a": sa, "b": sb, "intersection": k})
                lines.append(f"  Int({_fmt_set(sa)}, {_fmt_set(sb)}) = {k}\n")
    doc = {
        "command": "tents",
        "family": family_doc(f),
        "H": d.H,
        "tents": apexes,
        "intersections": pairs,
    }
    _emit(args, doc, "".join(lines))
    return EXIT_OK


def cmd_witness(args) -> int:
    f = _read_family(args)
    d = height_decomposition(f)
    try:
        report = find_witness(f, d)
    except ConjectureViolation as exc:
        doc = {"command": "witness", "family": family_doc(f), "H": d.H,
               "error": "conjecture-violation", "message": str(exc)}
        if exc.report is not None:
            doc["witness"] = exc.report.to_dict()
        _emit(args, doc, f"CONJECTURE VIOLATION: {exc}\n")
        return EXIT_CONJECTURE
    status = "guaranteed" if report.guaranteed else "not guaranteed"
    human = (f"element {report.element}, {report.frequency}/{report.m}, "
             f"{report.branch.value}, {status}\n")
    for key, value in report.trace.items():
        human += f"  {key}: {json.dumps(value)}\n"
    doc = {"command": "witness", "family": family_doc(f), "H": d.H,
           "witness": report.to_dict()}
    _emit(args, doc, human)
    return EXIT_OK


def cmd_verify(args) -> int:
    census = verify_all(args.n, workers=args.workers)
    lines = [
        f"n={census.n}: {census.candidates} candidates, {census.families} union-closed families\n",
        "branches: " + ", ".join(f"{b}={c}" for b, c in sorted(census.branches.items())) + "\n",
        f"violations: {len(census.violations)}\n",
    ]
    for v in census.violations[:10]:
        lines.append("  " + "; ".join(v["problems"]) + "\n")
    _emit(args, {"command": "verify", "census": census.to_dict()}, "".join(lines))
    return EXIT_OK if census.ok else EXIT_VIOLATIONS


def cmd_random(args) -> int:
    f = random_family(args.n, args.gens, args.seed)
    doc = {"command": "random", "seed": args.seed, "gens": args.gens, "family": family_doc(f)}
    _emit(args, doc, format_family(f))
    return EXIT_OK


def dot_document(f: SetFamily) -> str:
    """Hasse diagram of the family with one rank group per peel layer."""
    d = height_decomposition(f)
    members = f.members
    out = ["digraph family {", "  rankdir=BT;", "  node [shape=box];"]
    for i, mask in enumerate(members):
        out.append(f'  s{i} [label="{_fmt_set(f.label_list(mask))}"];')
    for peel, layer in enumerate(d.layers, 1):
        nodes = " ".join(f"s{i};" for i in layer)
        out.append(f"  subgraph layer{peel} {{ rank=same; {nodes} }}")
    for i, a in enumerate(members):
        below = [j for j in range(i) if members[j] & ~a == 0]
        for j in below:
            b = members[j]
            between = any(
                members[k] & ~a == 0 and b & ~members[k] == 0
                for k in below if k != j
            )
            if not between:
                out.append(f"  s{j} -> s{i};")
    out.append("}")
    return "\n".join(out) + "\n"


def cmd_dot(args) -> int:
    f = _read_family(args)
    sys.stdout.write(dot_document(f))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ucfamily",
        description="Analyze union-closed set families.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"), default="human")
    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--input", "-i", help="family file (default: stdin)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("close", parents=[with_input], help="union closure of the input sets")
    sub.add_parser("height", parents=[with_input], help="height decomposition")
    sub.add_parser("tents", parents=[with_input], help="tents and intersection numbers")
    sub.add_parser("witness", parents=[with_input], help="find an abundant element")
    sub.add_parser("dot", parents=[with_input], help="Hasse diagram in DOT")
    p = sub.add_parser("verify", parents=[common], help="exhaustive census for n <= 4")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p = sub.add_parser("random", parents=[common], help="seeded random union-closed family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gens", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    return parser


COMMANDS = {
    "close": cmd_close,
    "height": cmd_height,
    "tents": cmd_tents,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "random": cmd_random,
    "dot": cmd_dot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except NotUnionClosedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CLOSED
    except (FamilyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ConjectureViolation as exc:
        print(f"conjecture violated: {exc}", file=sys.stderr)
        return EXIT_CONJECTURE


if __name__ == "__main__":
    sys.exit(main())
