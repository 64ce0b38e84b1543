"""Pointwise function algebra and the recombined benchmark datasets.

Data1 holds the efficiency profiles of the fourteen non-constant baseline
functions f2..f15 against all 24 evaluation orders. Data2 (sum-dominant) and
Data3 (difference-dominant) replace each of those functions with a pointwise
sum or difference of baseline functions, following fixed recipes, and are
evaluated with the composite target policy (target = table minimum, since a
difference can shift the attainable minimum).

Note that under these documented pointwise semantics every Data2/Data3
recipe reproduces a baseline table, so the recombined datasets coincide with
Data1 cell-for-cell; ``recipe_reduces_to_baseline`` makes that visible and
the reproduction report flags it rather than hiding it.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .core import Domain, FunctionFamily, ValueTable, enumerate_orders, function_from_index
from .errors import DomainMismatch, ParseError, RangeViolation, ShapeMismatch, ValidationError
from .measures import efficiency
from .search import PerfMatrix, run_order

DATASET_FUNCTIONS = tuple(f"f{i}" for i in range(2, 16))

DATA2_RECIPE_TEXT = """
f2 = f4 - f3
f3 = f8 - f6
f4 = f12 - f9
f5 = f14 - f10
f6 = f2 + f5
f7 = f3 + f5
f8 = f3 + f6
f9 = f13 - f5
f10 = f2 + f9
f11 = f3 + f9
f12 = f3 + f10
f13 = f5 + f9
f14 = f2 + f13
f15 = f7 + f9
"""

DATA3_RECIPE_TEXT = """
f2 = f6 - f5
f3 = f4 - f2
f4 = f8 - f5
f5 = f7 - f3
f6 = f8 - f3
f7 = f15 - f9
f8 = f4 + f5
f9 = f15 - f7
f10 = f14 - f5
f11 = f15 - f5
f12 = f11 + f2
f13 = f15 - f3
f14 = f9 + f6
f15 = f13 + f3
"""


def pointwise_sum(fi: ValueTable, fj: ValueTable, strict_binary: bool = False) -> ValueTable:
    """Elementwise integer sum; with strict_binary, reject sums outside {0, 1}."""
    if fi.domain != fj.domain:
        raise DomainMismatch("pointwise sum needs a shared domain")
    values = tuple(a + b for a, b in zip(fi.values, fj.values))
    if strict_binary and any(v not in (0, 1) for v in values):
        raise RangeViolation("pointwise sum left the binary codomain")
    return ValueTable(fi.domain, values)


def pointwise_diff(fi: ValueTable, fj: ValueTable) -> ValueTable:
    """Elementwise integer difference; values may be negative."""
    if fi.domain != fj.domain:
        raise DomainMismatch("pointwise difference needs a shared domain")
    return ValueTable(fi.domain, tuple(a - b for a, b in zip(fi.values, fj.values)))


@dataclass(frozen=True)
class RecipeEntry:
    label: str
    operation: str  # "identity" | "sum" | "difference"
    operands: tuple[str, ...]


@dataclass(frozen=True)
class BenchmarkRecipe:
    """Ordered composite-function recipes; one output per dataset function."""

    entries: tuple[RecipeEntry, ...]

    def __post_init__(self):
        labels = [e.label for e in self.entries]
        if sorted(labels) != sorted(DATASET_FUNCTIONS):
            raise ValidationError(
                "recipe must define each of f2..f15 exactly once, got " + ",".join(labels)
            )
        for e in self.entries:
            if e.operation not in ("identity", "sum", "difference"):
                raise ValidationError(f"unknown operation {e.operation!r}")
            for op in e.operands:
                if op not in DATASET_FUNCTIONS:
                    raise ValidationError(f"operand {op} is not one of f2..f15")

    def entry(self, label: str) -> RecipeEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def to_json(self) -> str:
        obj = {
            e.label: {"operation": e.operation, "operands": list(e.operands)}
            for e in self.entries
        }
        return json.dumps(obj, sort_keys=True)


_RECIPE_LINE = re.compile(
    r"^\s*(f\d+)\s*=\s*(f\d+)\s*(?:([+\-−])\s*(f\d+)\s*)?$"
)


def parse_recipe(text: str) -> BenchmarkRecipe:
    """Parse ``label = operand (+|-) operand`` lines (or ``label = operand``)."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _RECIPE_LINE.match(line)
        if not m:
            raise ParseError(f"bad recipe line {raw!r}", lineno)
        label, left, op, right = m.groups()
        if op is None:
            entries.append(RecipeEntry(label, "identity", (left,)))
        else:
            kind = "sum" if op == "+" else "difference"
            entries.append(RecipeEntry(label, kind, (left, right)))
    return BenchmarkRecipe(tuple(entries))


def identity_recipe() -> BenchmarkRecipe:
    return BenchmarkRecipe(
        tuple(RecipeEntry(lab, "identity", (lab,)) for lab in DATASET_FUNCTIONS)
    )


def data2_recipe() -> BenchmarkRecipe:
    return parse_recipe(DATA2_RECIPE_TEXT)


def data3_recipe() -> BenchmarkRecipe:
    return parse_recipe(DATA3_RECIPE_TEXT)


def baseline_tables(n: int = 4) -> dict[str, ValueTable]:
    """The 2^n baseline tables keyed by label f1..f{2^n}."""
    return {f"f{i}": function_from_index(i, n) for i in range(1, 2**n + 1)}


def apply_recipe(recipe: BenchmarkRecipe, n: int = 4, strict_binary: bool = False) -> dict[str, ValueTable]:
    """Composite table per dataset label, built from the baseline tables."""
    base = baseline_tables(n)
    out = {}
    for e in recipe.entries:
        if e.operation == "identity":
            out[e.label] = base[e.operands[0]]
        elif e.operation == "sum":
            out[e.label] = pointwise_sum(base[e.operands[0]], base[e.operands[1]], strict_binary)
        else:
            out[e.label] = pointwise_diff(base[e.operands[0]], base[e.operands[1]])
    return out


def recipe_family(recipe: BenchmarkRecipe, n: int = 4) -> FunctionFamily:
    """The composite tables of a recipe as a family (duplicates collapse)."""
    tables = apply_recipe(recipe, n)
    unique = {t.values: t for t in tables.values()}
    return FunctionFamily(Domain(n), tuple(unique.values()))


def recipe_reduces_to_baseline(recipe: BenchmarkRecipe, n: int = 4) -> dict[str, bool]:
    """Per label: does the composite equal the baseline table of the same label?"""
    base = baseline_tables(n)
    comp = apply_recipe(recipe, n)
    return {lab: comp[lab].values == base[lab].values for lab in DATASET_FUNCTIONS}


@dataclass(frozen=True)
class Dataset:
    """A named 14 x 24 efficiency matrix with its construction recipe."""

    name: str
    eff: PerfMatrix
    provenance: BenchmarkRecipe

    def __post_init__(self):
        if self.eff.kind != "efficiency":
            raise ValidationError("dataset matrix must hold efficiencies")

    @property
    def shape(self) -> tuple[int, int]:
        return self.eff.shape

    def to_csv(self, decimals: int = 6) -> str:
        lines = ["function," + ",".join(self.eff.col_labels)]
        for lab, row in zip(self.eff.row_labels, self.eff.cells):
            lines.append(lab + "," + ",".join(f"{float(c):.{decimals}g}" for c in row))
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "matrix": self.eff.to_json_obj(),
            "provenance": json.loads(self.provenance.to_json()),
        }


def build_dataset(name: str, n: int = 4) -> Dataset:
    """Data1 (baseline), Data2 (sum-dominant) or Data3 (difference-dominant).

    Composite rows use target = minimum of the composite table. Every recipe
    output is checked to lie in {0,1}^n; a recipe escaping the binary family
    fails loudly instead of producing a silently out-of-range dataset.
    """
    if name == "Data1":
        recipe = identity_recipe()
        target = "zero"
    elif name == "Data2":
        recipe = data2_recipe()
        target = "min"
    elif name == "Data3":
        recipe = data3_recipe()
        target = "min"
    else:
        raise ValidationError(f"unknown dataset {name!r}; expected Data1, Data2 or Data3")

    tables = apply_recipe(recipe, n)
    for lab, t in tables.items():
        if not t.is_binary:
            raise RangeViolation(f"recipe output {lab} = {t.values} left the binary family")
    orders = enumerate_orders(n)
    cells = []
    for lab in DATASET_FUNCTIONS:
        t = tables[lab]
        row = tuple(
            efficiency(n, run_order(o, t, target=target).steps).value for o in orders
        )
        cells.append(row)
    eff = PerfMatrix(
        row_labels=DATASET_FUNCTIONS,
        col_labels=tuple(o.label for o in orders),
        cells=tuple(cells),
        kind="efficiency",
        target_policy=target,
    )
    return Dataset(name, eff, recipe)


def custom_dataset(
    recipe: BenchmarkRecipe, name: str = "custom", n: int = 4, strict_binary: bool = False
) -> Dataset:
    """Dataset for a user recipe; composite targets, binary outputs enforced."""
    tables = apply_recipe(recipe, n, strict_binary)
    for lab, t in tables.items():
        if not t.is_binary:
            raise RangeViolation(f"recipe output {lab} = {t.values} left the binary family")
    orders = enumerate_orders(n)
    cells = tuple(
        tuple(efficiency(n, run_order(o, tables[lab], target="min").steps).value for o in orders)
        for lab in DATASET_FUNCTIONS
    )
    eff = PerfMatrix(DATASET_FUNCTIONS, tuple(o.label for o in orders), cells, "efficiency", "min")
    return Dataset(name, eff, recipe)


def delta_matrix(a: Dataset | PerfMatrix, b: Dataset | PerfMatrix) -> PerfMatrix:
    """Elementwise a - b over identically labelled efficiency matrices."""
    ma = a.eff if isinstance(a, Dataset) else a
    mb = b.eff if isinstance(b, Dataset) else b
    if ma.row_labels != mb.row_labels or ma.col_labels != mb.col_labels:
        raise ShapeMismatch("delta requires identical row and column labels")
    cells = tuple(
        tuple(Fraction(x) - Fraction(y) for x, y in zip(ra, rb))
        for ra, rb in zip(ma.cells, mb.cells)
    )
    return PerfMatrix(ma.row_labels, ma.col_labels, cells, kind="delta")
