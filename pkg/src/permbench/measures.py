"""Efficiency index, implementation-independent measure, additivity audit, Shapley values.

The efficiency of a run that needed ``s`` of ``n`` possible evaluations is
``(n - s) / (n - 1)``, kept as an exact rational so benchmark tables
reproduce bit-for-bit (2/3, not 0.6667).

The measure ``M`` counts objective evaluations until the global minimum is
reached; it is exactly the steps count of the fixed-order search. Additivity
of ``M`` over pointwise sums of functions is a hypothesis to audit, not a
law: the audit enumerates the violations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .core import EvalOrder, FunctionFamily, ValueTable
from .errors import (
    CapacityExceeded,
    DegenerateDomain,
    PlayerOutOfRange,
    StepsOutOfRange,
    ValidationError,
)
from .search import PerfMatrix, TargetPolicy, run_order

#: Largest player count for exact Shapley summation (2^N coalitions).
DEFAULT_SHAPLEY_CAP = 20


@dataclass(frozen=True)
class EfficiencyValue:
    value: Fraction
    steps: int
    domain_size: int


def efficiency(domain_size: int, steps: int) -> EfficiencyValue:
    """Normalized efficiency (n - s) / (n - 1) as an exact rational."""
    if domain_size < 2:
        raise DegenerateDomain(
            f"efficiency needs a domain of at least 2 points, got {domain_size}"
        )
    if not 1 <= steps <= domain_size:
        raise StepsOutOfRange(f"steps {steps} outside 1..{domain_size}")
    return EfficiencyValue(Fraction(domain_size - steps, domain_size - 1), steps, domain_size)


def efficiency_matrix(steps_matrix: PerfMatrix, domain_size: int) -> PerfMatrix:
    """Elementwise efficiency of a steps matrix over an n-point domain."""
    if steps_matrix.kind != "steps":
        raise ValidationError("efficiency_matrix expects a steps matrix")
    cells = tuple(
        tuple(efficiency(domain_size, s).value for s in row) for row in steps_matrix.cells
    )
    return PerfMatrix(
        steps_matrix.row_labels,
        steps_matrix.col_labels,
        cells,
        kind="efficiency",
        target_policy=steps_matrix.target_policy,
    )


def measure_M(order: EvalOrder, f: ValueTable, target: TargetPolicy = "auto") -> int:
    """Evaluations needed to reach the target; equals the steps count."""
    return run_order(order, f, target).steps


@dataclass(frozen=True)
class AdditivityViolation:
    order: str
    fi: str
    fj: str
    lhs: int  # M(order, fi + fj)
    rhs: int  # M(order, fi) + M(order, fj)


@dataclass(frozen=True)
class AdditivityAudit:
    """Census of additivity and monotonicity over all binary-sum pairs."""

    pairs_tested: int
    violations: tuple[AdditivityViolation, ...]
    property_c_satisfied: int
    property_c_violated: int

    def violations_for(self, order_label: str) -> list[AdditivityViolation]:
        return [v for v in self.violations if v.order == order_label]

    def find(self, order: str, fi: str, fj: str) -> AdditivityViolation | None:
        for v in self.violations:
            if (v.order, v.fi, v.fj) == (order, fi, fj):
                return v
        return None

    def to_json(self) -> str:
        obj = {
            "pairs_tested": self.pairs_tested,
            "violations": [
                {"order": v.order, "fi": v.fi, "fj": v.fj, "lhs": v.lhs, "rhs": v.rhs}
                for v in self.violations
            ],
            "property_c_satisfied": self.property_c_satisfied,
            "property_c_violated": self.property_c_violated,
        }
        return json.dumps(obj, sort_keys=True)


def additivity_audit(family: FunctionFamily, orders: Sequence[EvalOrder]) -> AdditivityAudit:
    """Compare M(a, fi + fj) with M(a, fi) + M(a, fj) wherever the sum stays binary.

    Pairs (fi, fj) with fi(x) + fj(x) in {0, 1} everywhere are enumerated
    with i <= j; each admissible pair is checked against every order. The
    monotonicity hypothesis M(a, fi+fj) >= max(M(a, fi), M(a, fj)) is
    tallied alongside. Violations are sorted by (order, fi, fj).
    """
    for t in family:
        if not t.is_binary:
            raise ValidationError("additivity audit requires a binary family")
    tables = list(family)
    measures: dict[tuple[str, str], int] = {}
    for t in tables:
        for o in orders:
            measures[(o.label, t.label)] = measure_M(o, t, target=0)

    pairs_tested = 0
    violations = []
    c_ok = 0
    c_bad = 0
    for i, fi in enumerate(tables):
        for fj in tables[i:]:
            summed = tuple(a + b for a, b in zip(fi.values, fj.values))
            if any(v not in (0, 1) for v in summed):
                continue
            pairs_tested += 1
            fk = ValueTable(family.domain, summed)
            for o in orders:
                lhs = measure_M(o, fk, target=0)
                mi = measures[(o.label, fi.label)]
                mj = measures[(o.label, fj.label)]
                if lhs != mi + mj:
                    violations.append(
                        AdditivityViolation(o.label, fi.label, fj.label, lhs, mi + mj)
                    )
                if lhs >= max(mi, mj):
                    c_ok += 1
                else:
                    c_bad += 1
    violations.sort(key=lambda v: (_order_rank(v.order), _f_rank(v.fi), _f_rank(v.fj)))
    return AdditivityAudit(pairs_tested, tuple(violations), c_ok, c_bad)


def _order_rank(label: str) -> int:
    return int(label.lstrip("a"))


def _f_rank(label: str) -> int:
    return int(label.lstrip("f"))


class CharacteristicFunction:
    """A cooperative game: a value for every coalition of players 1..N."""

    def __init__(self, player_count: int, values: Mapping[frozenset, float]):
        self.player_count = player_count
        self._by_mask = [0.0] * (1 << player_count)
        filled = [False] * (1 << player_count)
        for coalition, v in values.items():
            mask = 0
            for p in coalition:
                if not 1 <= p <= player_count:
                    raise PlayerOutOfRange(f"player {p} outside 1..{player_count}")
                mask |= 1 << (p - 1)
            self._by_mask[mask] = float(v)
            filled[mask] = True
        if not all(filled):
            raise ValidationError(
                f"characteristic function must define all {1 << player_count} coalitions"
            )

    @classmethod
    def from_callable(cls, player_count: int, fn: Callable[[frozenset], float]) -> "CharacteristicFunction":
        values = {}
        for mask in range(1 << player_count):
            coalition = frozenset(p + 1 for p in range(player_count) if mask >> p & 1)
            values[coalition] = fn(coalition)
        return cls(player_count, values)

    def of_mask(self, mask: int) -> float:
        return self._by_mask[mask]

    def __call__(self, coalition: frozenset) -> float:
        mask = 0
        for p in coalition:
            mask |= 1 << (p - 1)
        return self._by_mask[mask]


def shapley_value(v: CharacteristicFunction, i: int, cap: int = DEFAULT_SHAPLEY_CAP) -> float:
    """Exact Shapley value of player i by summation over all coalitions.

    Weights |S|! (N - |S| - 1)! / N! are computed as exact rationals and the
    weighted marginal contributions are accumulated with exactly rounded
    summation.
    """
    n = v.player_count
    if not 1 <= i <= n:
        raise PlayerOutOfRange(f"player {i} outside 1..{n}")
    if n > cap:
        raise CapacityExceeded(f"exact Shapley summation capped at N = {cap}")
    fact = math.factorial
    weight_by_size = [
        float(Fraction(fact(s) * fact(n - s - 1), fact(n))) for s in range(n)
    ]
    bit = 1 << (i - 1)
    terms = []
    for mask in range(1 << n):
        if mask & bit:
            continue
        w = weight_by_size[mask.bit_count()]
        terms.append(w * (v.of_mask(mask | bit) - v.of_mask(mask)))
    return math.fsum(terms)


def shapley_values(v: CharacteristicFunction, cap: int = DEFAULT_SHAPLEY_CAP) -> list[float]:
    return [shapley_value(v, i, cap) for i in range(1, v.player_count + 1)]


def shapley_csv(values: Sequence[float]) -> str:
    lines = ["player,phi"]
    lines += [f"{i},{phi!r}" for i, phi in enumerate(values, 1)]
    return "\n".join(lines) + "\n"
