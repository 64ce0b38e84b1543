"""Finite domains, objective-function tables, evaluation orders and policy trees.

Points of an ``n``-point domain are labelled ``1..n``. A binary objective
function is stored extensionally as its value vector; the function with
label ``f<i>`` has the binary expansion of ``i - 1`` (least significant bit
first) as its vector, so ``f1`` is the all-zero table. Evaluation orders are
permutations of the point labels and are numbered ``a<r>`` by lexicographic
rank of their sequence.

All types are immutable and all operations are pure.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    CapacityExceeded,
    DomainMismatch,
    IndexOutOfRange,
    MalformedTree,
    ParseError,
    ValidationError,
)

#: Largest family size ``m ** n`` that enumerate_functions will materialize.
DEFAULT_FUNCTION_CAP = 2**24

#: Largest ``n`` for which all n! evaluation orders are enumerated.
DEFAULT_ORDER_CAP = 8

#: Sentinel for an unsampled point in a PartialData.
UNKNOWN = object()


@dataclass(frozen=True)
class Domain:
    """A finite set of points labelled ``1..size``.

    In ``bitstring`` mode the size must be a power of two and point ``p``
    stands for the ``k``-bit word with value ``p - 1``, which gives every
    point a Hamming weight.
    """

    size: int
    point_kind: str = "indexed"  # "indexed" | "bitstring"

    def __post_init__(self):
        if self.size < 1:
            raise ValidationError(f"domain size must be >= 1, got {self.size}")
        if self.point_kind not in ("indexed", "bitstring"):
            raise ValidationError(f"unknown point_kind {self.point_kind!r}")
        if self.point_kind == "bitstring" and self.size & (self.size - 1):
            raise ValidationError("bitstring domains need a power-of-two size")

    @property
    def points(self) -> range:
        return range(1, self.size + 1)

    @property
    def bit_length(self) -> int:
        if self.point_kind != "bitstring":
            raise ValidationError("bit_length is only defined for bitstring domains")
        return self.size.bit_length() - 1

    def hamming_weight(self, point: int) -> int:
        """Number of one bits in the word a bitstring-domain point stands for."""
        if self.point_kind != "bitstring":
            raise ValidationError("hamming weight requires a bitstring domain")
        return (point - 1).bit_count()


@dataclass(frozen=True)
class ValueTable:
    """An objective function given by its vector of integer values."""

    domain: Domain
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.domain.size:
            raise ValidationError(
                f"value vector length {len(self.values)} != domain size {self.domain.size}"
            )

    @property
    def is_binary(self) -> bool:
        return all(v in (0, 1) for v in self.values)

    @property
    def index(self) -> int:
        """1-based function index; inverse of :func:`function_from_index`."""
        if not self.is_binary:
            raise ValidationError("function index is defined for binary tables only")
        return 1 + sum(v << b for b, v in enumerate(self.values))

    @property
    def label(self) -> str:
        return f"f{self.index}"

    @property
    def weight(self) -> int:
        """Number of ones in the value vector (orbit invariant for binary tables)."""
        return sum(1 for v in self.values if v == 1)

    def value_at(self, point: int) -> int:
        return self.values[point - 1]

    def min_value(self) -> int:
        return min(self.values)

    def to_csv_row(self, label: str | None = None) -> str:
        lab = label if label is not None else self.label
        return ",".join([lab] + [str(v) for v in self.values])


@dataclass(frozen=True)
class EvalOrder:
    """A fixed, non-adaptive evaluation sequence: a permutation of the points."""

    sequence: tuple[int, ...]

    def __post_init__(self):
        n = len(self.sequence)
        if sorted(self.sequence) != list(range(1, n + 1)):
            raise ValidationError(f"sequence {self.sequence} is not a permutation of 1..{n}")

    @property
    def size(self) -> int:
        return len(self.sequence)

    @property
    def rank(self) -> int:
        """1-based lexicographic rank of the sequence among all permutations."""
        n = self.size
        remaining = list(range(1, n + 1))
        r = 0
        for i, p in enumerate(self.sequence):
            pos = remaining.index(p)
            r += pos * math.factorial(n - 1 - i)
            remaining.pop(pos)
        return r + 1

    @property
    def label(self) -> str:
        return f"a{self.rank}"

    def to_csv_row(self) -> str:
        return ",".join([self.label] + [str(p) for p in self.sequence])


class PartialData:
    """Partial knowledge of a function: point -> value, with UNKNOWN gaps."""

    def __init__(self, domain: Domain, known: Mapping[int, int] | None = None):
        self.domain = domain
        self._known: dict[int, int] = dict(known or {})
        for p in self._known:
            if p not in domain.points:
                raise ValidationError(f"point {p} outside domain 1..{domain.size}")

    def get(self, point: int):
        return self._known.get(point, UNKNOWN)

    def is_known(self, point: int) -> bool:
        return point in self._known

    def with_observation(self, point: int, value: int) -> "PartialData":
        new = dict(self._known)
        new[point] = value
        return PartialData(self.domain, new)

    def __len__(self) -> int:
        return len(self._known)


@dataclass(frozen=True)
class PolicyNode:
    """Internal node of a policy tree: sample ``point``, branch on the value."""

    point: int
    children: tuple[tuple[int, "PolicyNode | None"], ...]  # (observed value, child) pairs

    def child_for(self, value: int) -> "PolicyNode | None":
        for v, c in self.children:
            if v == value:
                return c
        raise MalformedTree(f"node for point {self.point} has no child for observed value {value}")

    def child_values(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.children)


@dataclass(frozen=True)
class PolicyTree:
    """An adaptive, non-repeating sampling policy as a decision tree.

    Every internal node picks the next point to sample and has one child per
    possible observed value; a ``None`` child marks termination. No point may
    repeat along a root-to-leaf path.
    """

    root: PolicyNode | None
    domain: Domain

    def __post_init__(self):
        self._check(self.root, frozenset())

    def _check(self, node: PolicyNode | None, seen: frozenset[int]) -> None:
        if node is None:
            return
        if node.point not in self.domain.points:
            raise MalformedTree(f"point {node.point} outside domain 1..{self.domain.size}")
        if node.point in seen:
            raise MalformedTree(f"point {node.point} repeats along a path")
        for _, child in node.children:
            self._check(child, seen | {node.point})

    def to_json(self) -> str:
        def encode(node: PolicyNode | None):
            if node is None:
                return None
            return {
                "point": node.point,
                "children": {str(v): encode(c) for v, c in node.children},
            }

        return json.dumps({"domain_size": self.domain.size, "root": encode(self.root)})

    @classmethod
    def from_json(cls, text: str) -> "PolicyTree":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid policy tree JSON: {exc.msg}", exc.lineno, exc.colno)

        def decode(node) -> PolicyNode | None:
            if node is None:
                return None
            children = tuple(
                (int(v), decode(c)) for v, c in sorted(node["children"].items(), key=lambda kv: int(kv[0]))
            )
            return PolicyNode(point=int(node["point"]), children=children)

        return cls(root=decode(obj["root"]), domain=Domain(int(obj["domain_size"])))


@dataclass(frozen=True)
class FunctionFamily:
    """A duplicate-free set of value tables over one shared domain.

    Members are kept in canonical order: ascending by value vector read
    least-significant-point first, which for binary tables is ascending
    function index.
    """

    domain: Domain
    members: tuple[ValueTable, ...] = field(default=())

    def __post_init__(self):
        seen = set()
        for t in self.members:
            if t.domain != self.domain:
                raise DomainMismatch("family members must share the family domain")
            if t.values in seen:
                raise ValidationError(f"duplicate member {t.values}")
            seen.add(t.values)
        object.__setattr__(self, "members", tuple(sorted(self.members, key=_member_key)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[ValueTable]:
        return iter(self.members)

    def __contains__(self, table: ValueTable) -> bool:
        return table.values in {t.values for t in self.members}

    def value_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(t.values for t in self.members)

    def union(self, other: "FunctionFamily") -> "FunctionFamily":
        if other.domain != self.domain:
            raise DomainMismatch("cannot union families over different domains")
        merged = {t.values: t for t in itertools.chain(self.members, other.members)}
        return FunctionFamily(self.domain, tuple(merged.values()))

    def to_csv(self) -> str:
        return "\n".join(t.to_csv_row() for t in self.members) + "\n"

    @classmethod
    def from_csv(cls, text: str, domain: Domain | None = None) -> "FunctionFamily":
        tables = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split(",")
            try:
                values = tuple(int(v) for v in parts[1:])
            except ValueError as exc:
                raise ParseError(f"bad value in family CSV: {exc}", lineno)
            dom = domain or Domain(len(values))
            tables.append(ValueTable(dom, values))
        if not tables:
            raise ParseError("family CSV contains no rows", 1)
        return cls(tables[0].domain, tuple(tables))


def _member_key(table: ValueTable) -> tuple[int, ...]:
    return tuple(reversed(table.values))


def function_from_index(i: int, n: int) -> ValueTable:
    """Table whose values are the binary expansion of ``i - 1``, LSB first."""
    if i < 1 or i > 2**n:
        raise IndexOutOfRange(f"function index {i} outside 1..{2 ** n}")
    values = tuple((i - 1) >> b & 1 for b in range(n))
    return ValueTable(Domain(n), values)


def enumerate_functions(n: int, m: int, cap: int = DEFAULT_FUNCTION_CAP) -> FunctionFamily:
    """All ``m ** n`` tables over the n-point domain with values in 0..m-1.

    Tables are ordered with the value at point 1 as the fastest-changing
    digit, which for m = 2 is the ``function_from_index`` order.
    """
    if n < 1 or m < 1:
        raise ValidationError("n and m must be positive")
    total = m**n
    if total > cap:
        raise CapacityExceeded(f"{m}^{n} = {total} exceeds the cap of {cap} tables")
    domain = Domain(n)
    members = []
    for code in range(total):
        values, rest = [], code
        for _ in range(n):
            rest, digit = rest // m, rest % m
            values.append(digit)
        members.append(ValueTable(domain, tuple(values)))
    return FunctionFamily(domain, tuple(members))


def enumerate_orders(n: int, cap: int = DEFAULT_ORDER_CAP) -> list[EvalOrder]:
    """All n! evaluation orders in lexicographic order of their sequences."""
    if n < 1:
        raise ValidationError("n must be positive")
    if n > cap:
        raise CapacityExceeded(f"n = {n} exceeds the exhaustive order cap of {cap}")
    return [EvalOrder(seq) for seq in itertools.permutations(range(1, n + 1))]


def fixed_order_as_tree(order: EvalOrder, value_alphabet: Iterable[int] = (0, 1)) -> PolicyTree:
    """Degenerate policy tree that samples ``order`` regardless of observations."""
    alphabet = tuple(value_alphabet)
    if not alphabet:
        raise ValidationError("value alphabet must be non-empty")

    def build(depth: int) -> PolicyNode | None:
        if depth == order.size:
            return None
        child = build(depth + 1)
        return PolicyNode(
            point=order.sequence[depth],
            children=tuple((v, child) for v in alphabet),
        )

    return PolicyTree(root=build(0), domain=Domain(order.size))
