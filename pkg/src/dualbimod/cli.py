"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 closure or residual anomaly.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import actmat
from .bimodule import Bimodule, BimoduleError, construct, direct_sum, hom_space, tensor
from .cells import (
    MAX_LEVEL,
    CatalogClosureError,
    build_catalog,
    cells_to_json,
    compute_cells,
    format_cells,
    format_grid,
    mult_table,
    order_to_dot,
    reduce_mod_higher,
    table_to_json,
)
from .decomposition import decompose, random_basis_change
from .labels import LabelError, format_multiset, parse_label
from .linalg import format_scalar
from .suite import CHECK_IDS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESIDUAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _level(args) -> int:
    if not 1 <= args.level <= MAX_LEVEL:
        raise UsageError(f"unsupported level {args.level}; choose 1..{MAX_LEVEL}")
    return args.level


def _module_arg(text: str) -> Bimodule:
    """A JSON file path, or labels joined by '+' (taken as a direct sum)."""
    if os.path.exists(text):
        with open(text) as fh:
            return Bimodule.from_json(fh.read())
    return direct_sum(*(construct(parse_label(part)) for part in text.split("+")))


def _matrix(T) -> list:
    return [[format_scalar(v) for v in row] for row in T.to_rows()]


def cmd_construct(args) -> int:
    label = parse_label(args.label)
    data = construct(label).to_json()
    data["label"] = str(label)
    _emit(data)
    return EXIT_OK


def _report_decomposition(res, args, reduce=None) -> int:
    labels = res.labels
    if reduce is not None:
        labels = reduce(labels)
    if args.json:
        out = {"summands": [str(x) for x in labels]}
        if res.residual is not None:
            out["residual_dim"] = res.residual.dim
        _emit(out)
    else:
        text = format_multiset(labels)
        if res.residual is not None:
            text += f" + residual(dim {res.residual.dim})"
        print(text)
    return EXIT_RESIDUAL if res.residual is not None else EXIT_OK


def cmd_tensor(args) -> int:
    T = tensor(_module_arg(args.lhs), _module_arg(args.rhs))
    if not args.decompose:
        if args.mod_cell:
            raise UsageError("--mod-cell needs --decompose")
        _emit(T.to_json()) if args.json else print(f"dim {T.dim}")
        return EXIT_OK
    reduce = None
    if args.mod_cell:
        catalog = build_catalog(_level(args))
        cells = compute_cells(catalog, mult_table(catalog))
        if args.mod_cell not in cells.two_sided_cells:
            raise UsageError(f"unknown cell {args.mod_cell}; have {', '.join(cells.two_sided_cells)}")
        reduce = lambda labels: reduce_mod_higher(labels, args.mod_cell, cells)  # noqa: E731
    return _report_decomposition(decompose(T), args, reduce)


def cmd_hom(args) -> int:
    A, B = _module_arg(args.src), _module_arg(args.dst)
    basis = hom_space(A, B)
    if args.json:
        _emit({"dim": len(basis), "basis": [_matrix(f.matrix) for f in basis]})
    else:
        print(f"dim Hom = {len(basis)}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    X = _module_arg(args.module)
    if args.shuffle is not None:
        X, _ = random_basis_change(X, random.Random(args.shuffle))
    return _report_decomposition(decompose(X), args)


def cmd_cells(args) -> int:
    catalog = build_catalog(_level(args))
    table = mult_table(catalog)
    cells = compute_cells(catalog, table)
    if args.dot:
        print(order_to_dot(cells))
    elif args.json:
        _emit({"table": table_to_json(catalog, table), "cells": cells_to_json(cells, table)})
    else:
        if args.table:
            print(format_grid(catalog, table))
        print(format_cells(cells, table))
    return EXIT_OK


def cmd_verify(args) -> int:
    level = _level(args)
    only = None
    if args.only:
        only = [c for part in args.only for c in part.split(",") if c]
        unknown = sorted(set(only) - set(CHECK_IDS))
        if unknown:
            raise UsageError(f"unknown check ids {', '.join(unknown)}; have {', '.join(CHECK_IDS)}")
    results = run_suite(level, only)
    failed = [r.check_id for r in results if r.status != "pass"]
    if args.json:
        _emit({"level": level, "status": "fail" if failed else "pass", "failed": failed,
               "checks": [r.to_json(args.timings) for r in results]})
    else:
        for r in results:
            line = f"{r.status.upper():4}  {r.check_id:15} {r.anchor}"
            if args.timings:
                line += f"  ({r.elapsed:.2f}s)"
            print(line)
            if r.status != "pass":
                print(f"      {json.dumps(r.witness, sort_keys=True)}")
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_actmat(args) -> int:
    if args.n is not None:
        if not 1 <= args.n <= actmat.MAX_N:
            raise UsageError(f"n must be between 1 and {actmat.MAX_N}")
        roots = actmat.enumerate_root_matrices(args.n)
        out = [{"F": [list(r) for r in F],
                "solutions": [dict(zip(actmat.NAMES, ([list(r) for r in X] for X in q)))
                              for q in actmat.quadruple_search(F)]} for F in roots]
        if args.json:
            _emit(out)
        else:
            for entry in out:
                print(f"F = {entry['F']}: {len(entry['solutions'])} solution class(es)")
                for sol in entry["solutions"]:
                    print("    " + ", ".join(f"{k}={v}" for k, v in sol.items()))
        return EXIT_OK
    report = actmat.verify_proposition()
    if args.json:
        _emit(report)
    else:
        for entry in report["per_matrix"]:
            print(f"n={entry['n']} F={entry['F']}: {entry['table_candidates']} table candidates, "
                  f"{len(entry['solutions'])} survivor(s)")
        print(f"proposition: {report['status']}")
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--level", type=int, default=3, help=f"catalog level m (1..{MAX_LEVEL})")

    p = argparse.ArgumentParser(prog="dualbimod", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="print a catalogued bimodule as JSON")
    c.add_argument("label", help="D | DxD | W:k | S:k | N:k | M:k | B:k:p/q")
    c.set_defaults(func=cmd_construct)

    t = sub.add_parser("tensor", parents=[common], help="tensor product over D")
    t.add_argument("lhs")
    t.add_argument("rhs")
    t.add_argument("--decompose", action="store_true")
    t.add_argument("--mod-cell", metavar="J", help="drop summands in cells strictly above J")
    t.set_defaults(func=cmd_tensor)

    h = sub.add_parser("hom", parents=[common], help="bimodule homomorphisms")
    h.add_argument("src")
    h.add_argument("dst")
    h.set_defaults(func=cmd_hom)

    d = sub.add_parser("decompose", parents=[common], help="Krull-Schmidt decomposition")
    d.add_argument("module", help="JSON file, or labels joined by '+'")
    d.add_argument("--shuffle", type=int, metavar="SEED", help="apply a random basis change first")
    d.set_defaults(func=cmd_decompose)

    ce = sub.add_parser("cells", parents=[common], help="multiplication table and cells")
    ce.add_argument("--table", action="store_true", help="also print the multiplication table")
    ce.add_argument("--dot", action="store_true", help="print the two-sided order in DOT")
    ce.set_defaults(func=cmd_cells)

    v = sub.add_parser("verify", parents=[common], help="run the verification suite")
    v.add_argument("--only", action="append", metavar="ID", help=f"restrict to ids: {', '.join(CHECK_IDS)}")
    v.add_argument("--timings", action="store_true", help="report elapsed time per check")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("actmat", parents=[common], help="action matrix search")
    a.add_argument("--n", type=int, help="list root matrices of size n and their solutions")
    a.set_defaults(func=cmd_actmat)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, LabelError, BimoduleError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatalogClosureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESIDUAL


if __name__ == "__main__":
    sys.exit(main())
