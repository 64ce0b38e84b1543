"""Function permutation, closure-under-permutation tests and closure computation.

A family F is closed under permutation (c.u.p.) when every domain relabelling
of every member stays inside F. For binary tables the orbit of a table under
the symmetric group is exactly the set of tables with the same number of
ones, so closures are unions of weight orbits.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

from .core import Domain, EvalOrder, FunctionFamily, ValueTable
from .errors import DomainMismatch, ValidationError

#: Largest n for which c.u.p. testing tries all n! permutations.
DEFAULT_EXHAUSTIVE_CAP = 8


@dataclass(frozen=True)
class PermutationMap:
    """A bijection on point labels; ``mapping[x - 1]`` is the image of x."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(1, n + 1)):
            raise ValidationError(f"{self.mapping} is not a bijection on 1..{n}")

    @property
    def size(self) -> int:
        return len(self.mapping)

    def apply(self, point: int) -> int:
        return self.mapping[point - 1]

    @classmethod
    def identity(cls, n: int) -> "PermutationMap":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "PermutationMap":
        m = list(range(1, n + 1))
        m[a - 1], m[b - 1] = m[b - 1], m[a - 1]
        return cls(tuple(m))

    @classmethod
    def from_order(cls, order: EvalOrder) -> "PermutationMap":
        return cls(order.sequence)


@dataclass(frozen=True)
class CupReport:
    """Outcome of a closure test, with a counterexample when one exists."""

    is_cup: bool
    witness_function: ValueTable | None = None
    witness_permutation: PermutationMap | None = None

    def to_json(self) -> str:
        obj = {
            "is_cup": self.is_cup,
            "witness_function": list(self.witness_function.values) if self.witness_function else None,
            "witness_permutation": list(self.witness_permutation.mapping)
            if self.witness_permutation
            else None,
        }
        return json.dumps(obj, sort_keys=True)


def permute_function(f: ValueTable, phi: PermutationMap) -> ValueTable:
    """The relabelled table g with g(x) = f(phi(x))."""
    if phi.size != f.domain.size:
        raise DomainMismatch(
            f"permutation size {phi.size} != domain size {f.domain.size}"
        )
    return ValueTable(f.domain, tuple(f.values[phi.apply(x) - 1] for x in f.domain.points))


def _test_permutations(n: int, exhaustive_cap: int):
    """Permutations whose closure implies closure under the full group.

    Up to the cap all n! permutations are used. Beyond it the n - 1 adjacent
    transpositions suffice: they generate the symmetric group, so a family
    closed under them is closed under every permutation.
    """
    if n <= exhaustive_cap:
        return [PermutationMap(p) for p in itertools.permutations(range(1, n + 1))]
    return [PermutationMap.transposition(n, i, i + 1) for i in range(1, n)]


def cup_report(family: FunctionFamily, exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP) -> CupReport:
    """Closure test returning a (member, permutation) witness when not closed."""
    if len(family) == 0:
        raise ValidationError("c.u.p. test requires a non-empty family")
    values = family.value_set()
    for phi in _test_permutations(family.domain.size, exhaustive_cap):
        for f in family:
            if permute_function(f, phi).values not in values:
                return CupReport(False, f, phi)
    return CupReport(True)


def is_cup(family: FunctionFamily, exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP) -> bool:
    return cup_report(family, exhaustive_cap).is_cup


def permutation_closure(family: FunctionFamily) -> FunctionFamily:
    """Smallest c.u.p. superset: the union of the members' orbits.

    Orbits are grown with adjacent transpositions (they generate the
    symmetric group), so the cost is polynomial in the orbit size rather
    than n!.
    """
    if len(family) == 0:
        raise ValidationError("closure requires a non-empty family")
    n = family.domain.size
    generators = [PermutationMap.transposition(n, i, i + 1) for i in range(1, n)] or [
        PermutationMap.identity(n)
    ]
    seen: dict[tuple[int, ...], ValueTable] = {t.values: t for t in family}
    frontier = list(family.members)
    while frontier:
        f = frontier.pop()
        for phi in generators:
            g = permute_function(f, phi)
            if g.values not in seen:
                seen[g.values] = g
                frontier.append(g)
    return FunctionFamily(family.domain, tuple(seen.values()))


@dataclass(frozen=True)
class Observation1Report:
    """Closure status of a recipe-transformed family, value-table reading.

    The alternative reading, where the transformed object is the performance
    dataset rather than the set of composite value tables, is recorded as
    unevaluated.
    """

    base_is_cup: bool
    transformed: FunctionFamily
    transformed_is_cup: bool
    witness_function: ValueTable | None
    witness_permutation: PermutationMap | None
    unevaluated_readings: tuple[str, ...] = ("performance-dataset",)

    def to_json(self) -> str:
        obj = {
            "base_is_cup": self.base_is_cup,
            "transformed_size": len(self.transformed),
            "is_cup": self.transformed_is_cup,
            "witness_function": list(self.witness_function.values) if self.witness_function else None,
            "witness_permutation": list(self.witness_permutation.mapping)
            if self.witness_permutation
            else None,
            "unevaluated_readings": list(self.unevaluated_readings),
        }
        return json.dumps(obj, sort_keys=True)


def check_observation1(base: FunctionFamily, transform) -> Observation1Report:
    """Apply a benchmark recipe to a c.u.p. base and test closure of the result.

    ``transform`` maps a FunctionFamily to a FunctionFamily (e.g. the
    composite-table builder of a benchmark recipe, or the identity).
    """
    base_report = cup_report(base)
    if not base_report.is_cup:
        raise ValidationError("observation check requires a c.u.p. base family")
    transformed = transform(base)
    report = cup_report(transformed)
    return Observation1Report(
        base_is_cup=True,
        transformed=transformed,
        transformed_is_cup=report.is_cup,
        witness_function=report.witness_function,
        witness_permutation=report.witness_permutation,
    )


def weight_orbit(domain: Domain, weight: int) -> FunctionFamily:
    """All binary tables with the given number of ones (one S_n orbit)."""
    n = domain.size
    if not 0 <= weight <= n:
        raise ValidationError(f"weight {weight} outside 0..{n}")
    members = []
    for ones in itertools.combinations(range(n), weight):
        values = tuple(1 if i in ones else 0 for i in range(n))
        members.append(ValueTable(domain, values))
    return FunctionFamily(domain, tuple(members))


def orbit_size(n: int, weight: int) -> int:
    return math.comb(n, weight)
