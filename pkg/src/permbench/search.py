"""Execution of evaluation orders and policy trees; steps-to-target matrices.

The steps count of a run is the 1-based index of the first evaluation that
observes the target value. When the target never occurs the search exhausts
the domain and the steps count equals the domain size (the convention used
throughout the benchmark tables; the trace itself records that no hit
happened).

Target policies:

* a literal integer - search for that value;
* ``"zero"`` - the baseline convention for binary tables (known minimum 0);
* ``"min"`` - the composite convention, target = min of the value table;
* ``"auto"`` - ``"zero"`` for binary tables, ``"min"`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import EvalOrder, FunctionFamily, PolicyTree, ValueTable
from .errors import DomainMismatch, MalformedTree, ParseError, ValidationError

TargetPolicy = Union[int, str]


def resolve_target(policy: TargetPolicy, f: ValueTable) -> int:
    if isinstance(policy, int):
        return policy
    if policy == "zero":
        return 0
    if policy == "min":
        return f.min_value()
    if policy == "auto":
        return 0 if f.is_binary else f.min_value()
    raise ValidationError(f"unknown target policy {policy!r}")


@dataclass(frozen=True)
class SearchTrace:
    """Sampled (point, value) pairs of one run; hit_step is None on a miss."""

    sampled: tuple[tuple[int, int], ...]
    hit_step: int | None
    target: int

    def __post_init__(self):
        points = [p for p, _ in self.sampled]
        if len(set(points)) != len(points):
            raise ValidationError("trace samples a point twice")

    @property
    def steps(self) -> int:
        """Steps-to-target; equals the number of samples on exhaustion."""
        return self.hit_step if self.hit_step is not None else len(self.sampled)

    @property
    def hit(self) -> bool:
        return self.hit_step is not None


def run_order(order: EvalOrder, f: ValueTable, target: TargetPolicy = "auto") -> SearchTrace:
    """Evaluate points in the fixed order until the target value appears."""
    if order.size != f.domain.size:
        raise DomainMismatch(f"order size {order.size} != domain size {f.domain.size}")
    goal = resolve_target(target, f)
    sampled = []
    for step, point in enumerate(order.sequence, 1):
        value = f.value_at(point)
        sampled.append((point, value))
        if value == goal:
            return SearchTrace(tuple(sampled), step, goal)
    return SearchTrace(tuple(sampled), None, goal)


def run_policy_tree(tree: PolicyTree, f: ValueTable, target: TargetPolicy = "auto") -> SearchTrace:
    """Walk the tree, choosing children by observed values; same hit semantics."""
    if tree.domain.size != f.domain.size:
        raise DomainMismatch("tree and function domains differ")
    goal = resolve_target(target, f)
    sampled = []
    seen = set()
    node = tree.root
    while node is not None:
        if node.point in seen:
            raise MalformedTree(f"tree revisits point {node.point}")
        seen.add(node.point)
        value = f.value_at(node.point)
        sampled.append((node.point, value))
        if value == goal:
            return SearchTrace(tuple(sampled), len(sampled), goal)
        node = node.child_for(value)
    return SearchTrace(tuple(sampled), None, goal)


@dataclass(frozen=True)
class PerfMatrix:
    """Functions x orders performance matrix.

    ``kind`` is one of ``steps`` (integer cells in 1..n), ``efficiency``
    (exact rationals in [0, 1]), ``delta`` (rationals in [-1, 1]) or
    ``centered`` (row-mean-centered rationals).
    """

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: tuple[tuple[object, ...], ...]
    kind: str
    target_policy: str = "zero"

    def __post_init__(self):
        if self.kind not in ("steps", "efficiency", "delta", "centered"):
            raise ValidationError(f"unknown matrix kind {self.kind!r}")
        if len(self.cells) != len(self.row_labels):
            raise ValidationError("row count does not match row labels")
        for row in self.cells:
            if len(row) != len(self.col_labels):
                raise ValidationError("column count does not match column labels")
        if self.kind == "efficiency":
            for row in self.cells:
                for c in row:
                    if not 0 <= c <= 1:
                        raise ValidationError(f"efficiency cell {c} outside [0, 1]")
        if self.kind == "delta":
            for row in self.cells:
                for c in row:
                    if not -1 <= c <= 1:
                        raise ValidationError(f"delta cell {c} outside [-1, 1]")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_labels), len(self.col_labels))

    def row(self, label: str) -> tuple:
        return self.cells[self.row_labels.index(label)]

    def cell(self, row_label: str, col_label: str):
        return self.cells[self.row_labels.index(row_label)][self.col_labels.index(col_label)]

    def column_totals(self) -> tuple:
        return tuple(sum(col) for col in zip(*self.cells))

    def column_means(self) -> tuple[Fraction, ...]:
        rows = len(self.cells)
        return tuple(Fraction(sum(col)) / rows for col in zip(*self.cells))

    def as_floats(self) -> list[list[float]]:
        return [[float(c) for c in row] for row in self.cells]

    def to_csv(self, decimals: int = 4) -> str:
        """Table layout: header, one row per function, then Total/Mean row."""
        lines = ["function," + ",".join(self.col_labels)]
        for lab, row in zip(self.row_labels, self.cells):
            lines.append(lab + "," + ",".join(_fmt_cell(c, self.kind, decimals) for c in row))
        if self.kind == "steps":
            lines.append("Total," + ",".join(str(t) for t in self.column_totals()))
        elif self.kind == "efficiency":
            lines.append(
                "Mean," + ",".join(_fmt_cell(m, self.kind, decimals) for m in self.column_means())
            )
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "target_policy": self.target_policy,
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "cells": [[_exact_str(c) for c in row] for row in self.cells],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PerfMatrix":
        kind = obj["kind"]
        parse = (lambda s: int(s)) if kind == "steps" else (lambda s: Fraction(s))
        return cls(
            row_labels=tuple(obj["row_labels"]),
            col_labels=tuple(obj["col_labels"]),
            cells=tuple(tuple(parse(c) for c in row) for row in obj["cells"]),
            kind=kind,
            target_policy=obj.get("target_policy", "zero"),
        )


def _fmt_cell(c, kind: str, decimals: int) -> str:
    if kind == "steps":
        return str(c)
    if kind in ("delta", "centered"):  # signed values: significant digits
        return f"{float(c):.{decimals}g}"
    return f"{float(c):.{decimals}f}"


def _exact_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)
    return str(c)


def parse_matrix_csv(text: str, kind: str = "efficiency") -> PerfMatrix:
    """Parse the CSV layout written by :meth:`PerfMatrix.to_csv`.

    Decimal cells are read exactly (each decimal literal is a rational);
    ``p/q`` cells are accepted too. The trailing Total/Mean row is ignored.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty matrix CSV", 1)
    header = lines[0].split(",")
    if len(header) < 2:
        raise ParseError("matrix CSV header needs at least one data column", 1, 1)
    col_labels = tuple(header[1:])
    row_labels, cells = [], []
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split(",")
        if parts[0] in ("Total", "Mean"):
            continue
        if len(parts) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, found {len(parts)}", lineno, len(parts)
            )
        row_labels.append(parts[0])
        row = []
        for colno, cellstr in enumerate(parts[1:], 2):
            try:
                row.append(int(cellstr) if kind == "steps" else Fraction(cellstr))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad cell {cellstr!r}", lineno, colno)
        cells.append(tuple(row))
    return PerfMatrix(tuple(row_labels), col_labels, tuple(cells), kind)


def build_perf_matrix(
    family: FunctionFamily | Sequence[ValueTable],
    orders: Sequence[EvalOrder],
    target: TargetPolicy = "auto",
    row_labels: Sequence[str] | None = None,
) -> PerfMatrix:
    """Steps matrix for every (function, order) pair, deterministic ordering.

    Rows follow the family's canonical member order (or the given sequence),
    columns follow the given order list.
    """
    tables = list(family)
    if not tables:
        raise ValidationError("empty family")
    for t in tables:
        for o in orders:
            if o.size != t.domain.size:
                raise DomainMismatch("function and order domains differ")
    if row_labels is None:
        row_labels = [t.label for t in tables]
    cells = tuple(
        tuple(run_order(o, t, target).steps for o in orders) for t in tables
    )
    policy = target if isinstance(target, str) else f"fixed:{target}"
    return PerfMatrix(
        row_labels=tuple(row_labels),
        col_labels=tuple(o.label for o in orders),
        cells=cells,
        kind="steps",
        target_policy=str(policy),
    )
