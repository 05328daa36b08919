"""Command-line entry point: ``prelie <subcommand> ...``.

Exit codes: 0 on success, 1 when a verified law fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .canon import class_key, pairing
from .enumeration import MAX_POSET_N, enumerate_posets, enumerate_topologies, primitive_classes, write_table
from .io import InputError, class_name, format_sum, load_structure, structure_to_json, sum_to_json, to_dot
from .operations import (
    ck_coproduct,
    nap_coproduct,
    nap_coproduct_down,
    nap_product,
    nap_product_up,
    prelie,
    prelie_up,
    searrow_coproduct,
)
from .structures import OrderError
from .topological import top_nap_coproduct
from .trees import freeness_check
from .verification import LAWS, run_sweep

PRODUCTS = {"prelie": prelie, "nap": nap_product, "prelie-up": prelie_up, "nap-up": nap_product_up}


def _coproduct(law: str, topologies: bool, admissibility: str):
    if law == "nap":
        return top_nap_coproduct if topologies else nap_coproduct
    if law == "nap-down":
        return nap_coproduct_down
    if law == "ck":
        return ck_coproduct
    return lambda t: searrow_coproduct(t, admissibility)


def _emit(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_enumerate(args) -> int:
    table = enumerate_topologies(args.n) if args.topologies else enumerate_posets(args.n)
    rows = [r for r in table.rows if r.connected or not args.connected]
    if args.out:
        write_table(table, Path(args.out) / f"{table.kind}-n{table.n}.json")
    data = {"kind": table.kind, "n": table.n, **table.counts()}
    lines = [f"{table.kind} classes on {table.n} points: {data['classes']} "
             f"(connected {data['connected']}, labelled {data['labeled']})"]
    if args.classes:
        data["rows"] = [{"key": r.key.hex(), "sigma": r.sigma, "connected": r.connected,
                         "structure": structure_to_json(r.structure)} for r in rows]
        lines += [f"  {r.key.hex()}  sigma={r.sigma}  {class_name(r.key)}" for r in rows]
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_product(args) -> int:
    a = load_structure(args.left, args.topologies)
    b = load_structure(args.right, args.topologies)
    result = PRODUCTS[args.law](a, b)
    _emit(args, sum_to_json(result), format_sum(result))
    return 0


def cmd_coproduct(args) -> int:
    t = load_structure(args.input, args.topologies)
    result = _coproduct(args.law, args.topologies, args.admissibility)(t)
    _emit(args, sum_to_json(result), format_sum(result))
    return 0


def cmd_pair(args) -> int:
    a = load_structure(args.left, args.topologies)
    b = load_structure(args.right, args.topologies)
    value = pairing(a, b)
    _emit(args, {"pairing": value}, str(value))
    return 0


def cmd_verify(args) -> int:
    report = run_sweep(args.law, args.max_total, "topology" if args.topologies else "poset", args.parallel)
    text = (f"{report.law} [{report.kind}, total <= {args.max_total}]: {report.instances} instances "
            f"(predicted {report.predicted}), {len(report.failures)} failures, {report.wall_time}s")
    for f in report.failures[:20]:
        text += f"\n  FAIL {f['inputs']}: {f['residual']}"
    _emit(args, report.to_json(), text)
    return 0 if report.passed else 1


def cmd_primitives(args) -> int:
    if not 1 <= args.n <= MAX_POSET_N:
        raise ValueError(f"primitives supports 1 <= n <= {MAX_POSET_N}")
    basis = primitive_classes(args.n)
    data = {"n": args.n, "dimension": len(basis), "basis": [sum_to_json(v) for v in basis]}
    lines = [f"primitive space on {args.n} points: dimension {len(basis)}"]
    for i, v in enumerate(basis, 1):
        lines.append(f"#{i}: {format_sum(v)}")
        if len(v) == 1:
            (k,) = v
            lines.append(to_dot(k.structure(), f"prim{i}").rstrip())
    _emit(args, data, "\n".join(lines))
    return 0


def cmd_freeness(args) -> int:
    if not 1 <= args.max_n <= MAX_POSET_N:
        raise ValueError(f"freeness-check supports 1 <= max-n <= {MAX_POSET_N}")
    rows = freeness_check(args.max_n)
    data = [{**r._asdict(), "solved_generator": str(r.solved_generator)} for r in rows]
    lines = ["n  connected  primitives  decorated  residual  solved-g"]
    lines += [f"{r.n:<3}{r.connected:<11}{r.primitives:<12}{r.decorated_trees:<11}{r.residual:<10}{r.solved_generator}"
              for r in rows]
    _emit(args, data, "\n".join(lines))
    ok = all(r.residual == 0 and r.solved_generator == r.primitives for r in rows)
    return 0 if ok else 1


def cmd_export(args) -> int:
    t = load_structure(args.input, args.topologies)
    if args.format == "dot":
        print(to_dot(t), end="")
    else:
        print(json.dumps({"key": class_key(t).hex(), "structure": structure_to_json(t)}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prelie", description="Pre-Lie and NAP structures on finite posets and topologies.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--topologies", action="store_true", help="treat inputs as quasi-orders")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="isomorphism classes on n points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--classes", action="store_true", help="list the classes")
    p.add_argument("--out", help="directory for the class table JSON")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("product", parents=[common], help="product of two structures")
    p.add_argument("--law", choices=sorted(PRODUCTS), default="prelie")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("coproduct", parents=[common], help="coproduct of a structure")
    p.add_argument("--law", choices=["nap", "nap-down", "ck", "searrow"], default="nap")
    p.add_argument("--admissibility", choices=["graft", "literal"], default="graft")
    p.add_argument("input")
    p.set_defaults(func=cmd_coproduct)

    p = sub.add_parser("pair", parents=[common], help="canonical pairing of two structures")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("verify", parents=[common], help="exhaustive law sweep")
    p.add_argument("--law", choices=sorted(LAWS), required=True)
    p.add_argument("--max-total", type=int, required=True)
    p.add_argument("--parallel", type=int, default=1, metavar="K")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("primitives", parents=[common], help="kernel of the NAP coproduct")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_primitives)

    p = sub.add_parser("freeness-check", parents=[common], help="dimension check against decorated trees")
    p.add_argument("--max-n", type=int, default=5)
    p.set_defaults(func=cmd_freeness)

    p = sub.add_parser("export", parents=[common], help="DOT or canonical JSON of a structure")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("input")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, OrderError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
