"""Multiplication tables and cell combinatorics of the finitary subcategories D^(m).

Composition H o F of 1-morphisms is the tensor product H (x)_D F, so the left
preorder puts G above F when G is a summand of some H (x) F, and the right
preorder when G is a summand of some F (x) H.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field

import networkx as nx

from .bimodule import construct, tensor
from .decomposition import decompose
from .labels import (
    Label,
    ProjInj,
    Regular,
    StringLabel,
    format_multiset,
    label_key,
)

MAX_LEVEL = 4


class CatalogClosureError(RuntimeError):
    pass


@dataclass(frozen=True)
class Catalog:
    level: int
    labels: tuple

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)


def build_catalog(m: int) -> Catalog:
    """Regular, the k-split cell, M_0, then W_j, S_j, N_j, M_j for 1 <= j <= m."""
    if m < 1:
        raise ValueError("catalog level must be at least 1")
    labels = [Regular, ProjInj] + [StringLabel(s, 0) for s in "WSNM"]
    for j in range(1, m + 1):
        labels.extend(StringLabel(s, j) for s in "WSNM")
    for lab in labels:
        construct(lab).check()
    return Catalog(m, tuple(labels))


@functools.lru_cache(maxsize=None)
def product(a: Label, b: Label) -> tuple:
    """Sorted labels of the indecomposable summands of a (x)_D b."""
    res = decompose(tensor(construct(a), construct(b)))
    if res.residual is not None:
        raise CatalogClosureError(
            f"catalog closure violated: {a} (x) {b} leaves a residual of dimension {res.residual.dim}"
        )
    return tuple(res.labels)


def mult_table(catalog: Catalog) -> dict[tuple, tuple]:
    """{(a, b): labels of a (x) b} over all ordered pairs of the catalog."""
    table = {}
    for a in catalog:
        for b in catalog:
            value = product(a, b)
            stray = [x for x in value if x not in catalog]
            if stray:
                raise CatalogClosureError(
                    f"catalog closure violated: {a} (x) {b} contains {format_multiset(stray)}"
                )
            table[(a, b)] = value
    return table


def _cell_name(members) -> str:
    if ProjInj in members:
        return "Jsplit"
    if Regular in members:
        return "JD"
    ks = {lab.k for lab in members if isinstance(lab, StringLabel)}
    if members == frozenset({StringLabel("M", 0)}):
        return "JM0"
    if len(ks) == 1:
        return f"J{ks.pop()}"
    return "J[" + ",".join(str(x) for x in sorted(members, key=label_key)) + "]"


@dataclass
class CellStructure:
    catalog: Catalog
    left_cells: list[frozenset]
    right_cells: list[frozenset]
    two_sided_cells: dict[str, frozenset]  # name -> members
    order: nx.DiGraph  # edge A -> B when A <_J B (transitively closed)
    cell_of: dict = field(default_factory=dict)

    def greater(self, a: str, b: str) -> bool:
        """Is cell a strictly above cell b?"""
        return self.order.has_edge(b, a)

    def chain(self) -> list[str] | None:
        """Two-sided cells from the top down when the order is linear, else None."""
        names = list(self.two_sided_cells)
        ranked = sorted(names, key=lambda c: -self.order.in_degree(c))
        for i, a in enumerate(ranked):
            for b in ranked[i + 1:]:
                if not self.greater(a, b):
                    return None
        return ranked

    def egg_box(self, name: str) -> tuple[list[frozenset], list[frozenset], list[list[list]]]:
        """(right cells as rows, left cells as columns, grid of members)."""
        members = self.two_sided_cells[name]
        rows = [c for c in self.right_cells if c <= members]
        cols = [c for c in self.left_cells if c <= members]
        key = lambda c: min(label_key(x) for x in c)  # noqa: E731
        rows.sort(key=key)
        cols.sort(key=key)
        grid = [[sorted(r & c, key=label_key) for c in cols] for r in rows]
        return rows, cols, grid


def _summand_graph(catalog: Catalog, table: dict, side: str) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(catalog)
    for F in catalog:
        for H in catalog:
            if side in ("left", "two"):
                for G in table[(H, F)]:
                    g.add_edge(F, G)
            if side in ("right", "two"):
                for G in table[(F, H)]:
                    g.add_edge(F, G)
    return g


def _sccs(g: nx.DiGraph) -> list[frozenset]:
    comps = [frozenset(c) for c in nx.strongly_connected_components(g)]
    comps.sort(key=lambda c: min(label_key(x) for x in c))
    return comps


def compute_cells(catalog: Catalog, table: dict) -> CellStructure:
    left = _sccs(_summand_graph(catalog, table, "left"))
    right = _sccs(_summand_graph(catalog, table, "right"))
    g2 = _summand_graph(catalog, table, "two")
    two = _sccs(g2)
    named = {}
    cell_of = {}
    for comp in two:
        name = _cell_name(comp)
        named[name] = comp
        for lab in comp:
            cell_of[lab] = name
    order = nx.DiGraph()
    order.add_nodes_from(named)
    closure = nx.transitive_closure(g2, reflexive=False)
    for a, b in closure.edges:
        ca, cb = cell_of[a], cell_of[b]
        if ca != cb:
            order.add_edge(ca, cb)
    return CellStructure(catalog, left, right, named, order, cell_of)


def reduce_mod_higher(labels, cell: str, cells: CellStructure) -> list[Label]:
    """Drop every label whose two-sided cell lies strictly above ``cell``."""
    if cell not in cells.two_sided_cells:
        raise KeyError(f"unknown cell {cell!r}")
    return sorted(
        (x for x in labels if not cells.greater(cells.cell_of.get(x, ""), cell)),
        key=label_key,
    )


def idempotent_cells(cells: CellStructure, table: dict) -> set[str]:
    """Cells containing F, G, H with H a summand of F o G."""
    out = set()
    for name, members in cells.two_sided_cells.items():
        if any(h in members for f in members for g in members for h in table[(f, g)]):
            out.add(name)
    return out


# ---------------------------------------------------------------------------
# output


def table_to_json(catalog: Catalog, table: dict) -> dict:
    return {
        "level": catalog.level,
        "labels": [str(x) for x in catalog],
        "products": [
            {"left": str(a), "right": str(b), "summands": [str(x) for x in table[(a, b)]]}
            for a in catalog
            for b in catalog
        ],
    }


def cells_to_json(cells: CellStructure, table: dict) -> dict:
    idem = idempotent_cells(cells, table)
    chain = cells.chain()
    out = {
        "two_sided_cells": {
            name: sorted((str(x) for x in members)) for name, members in cells.two_sided_cells.items()
        },
        "left_cells": [sorted(str(x) for x in c) for c in cells.left_cells],
        "right_cells": [sorted(str(x) for x in c) for c in cells.right_cells],
        "order": sorted([a, b] for a, b in cells.order.edges),
        "chain": chain,
        "idempotent": sorted(idem),
        "egg_boxes": {},
    }
    for name in cells.two_sided_cells:
        rows, cols, grid = cells.egg_box(name)
        out["egg_boxes"][name] = [[[str(x) for x in entry] for entry in row] for row in grid]
    if chain is not None and chain[-1] == "JD":
        out["note"] = "the identity D forms its own cell at the bottom of this finitary subcategory"
    return out


def format_grid(catalog: Catalog, table: dict) -> str:
    """Human-readable multiplication table, row (x) column."""
    names = [str(x) for x in catalog]
    cells = [[format_multiset(table[(a, b)]) for b in catalog] for a in catalog]
    width = max(max(len(c) for row in cells for c in row), max(len(n) for n in names))
    lines = [" " * 8 + " | ".join(n.ljust(width) for n in names)]
    for n, row in zip(names, cells):
        lines.append(n.ljust(8) + " | ".join(c.ljust(width) for c in row))
    return "\n".join(lines)


def format_cells(cells: CellStructure, table: dict) -> str:
    idem = idempotent_cells(cells, table)
    chain = cells.chain()
    lines = []
    if chain:
        lines.append("two-sided order: " + " > ".join(chain))
    for name, members in cells.two_sided_cells.items():
        flag = "idempotent" if name in idem else "not idempotent"
        lines.append(f"{name}: {{{', '.join(str(x) for x in sorted(members, key=label_key))}}} ({flag})")
        rows, cols, grid = cells.egg_box(name)
        if len(rows) > 1 or len(cols) > 1:
            for row in grid:
                lines.append("    " + " | ".join(",".join(str(x) for x in e) or "-" for e in row))
    return "\n".join(lines)


def order_to_dot(cells: CellStructure) -> str:
    """Hasse diagram of the two-sided order in DOT, larger cells on top."""
    red = nx.transitive_reduction(cells.order)
    lines = ["digraph cells {", "  rankdir=BT;"]
    for name, members in cells.two_sided_cells.items():
        lab = ", ".join(str(x) for x in sorted(members, key=label_key))
        lines.append(f'  "{name}" [label="{name}\\n{lab}"];')
    for a, b in sorted(red.edges):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


__all__ = [
    "MAX_LEVEL",
    "Catalog",
    "CatalogClosureError",
    "CellStructure",
    "build_catalog",
    "cells_to_json",
    "compute_cells",
    "dumps",
    "format_cells",
    "format_grid",
    "idempotent_cells",
    "mult_table",
    "order_to_dot",
    "product",
    "reduce_mod_higher",
    "table_to_json",
]
