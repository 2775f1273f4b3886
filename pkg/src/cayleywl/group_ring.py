"""Exact integer group-ring arithmetic and partition refinement operators.

Coefficients are Python integers, so every convolution of indicator
vectors is exact; the products driving the refinement loop only ever
produce coefficients in ``[0, |G|]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from typing import Iterable

from .groups import GroupSpec, unit_multipliers
from .partition import OrderedPartition, RefinementTrace, refine_to_stable


@dataclass(frozen=True)
class GroupRingElement:
    """Dense integer coefficient vector indexed by group element."""

    spec: GroupSpec
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.spec.order:
            raise ValueError(
                f"expected {self.spec.order} coefficients, got {len(self.coeffs)}"
            )

    def __mul__(self, other: GroupRingElement) -> GroupRingElement:
        return multiply(self, other)

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        if self.spec != other.spec:
            raise ValueError("group ring elements over different groups")
        return GroupRingElement(
            self.spec, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def support(self) -> tuple[int, ...]:
        return tuple(g for g, c in enumerate(self.coeffs) if c != 0)


def simple_quantity(spec: GroupSpec, elements: Iterable[int]) -> GroupRingElement:
    """Indicator vector of an element-index set (the empty set gives zero)."""
    coeffs = [0] * spec.order
    for g in elements:
        if not 0 <= g < spec.order:
            raise ValueError(f"element index {g} out of range for {spec}")
        coeffs[g] = 1
    return GroupRingElement(spec, tuple(coeffs))


def multiply(u: GroupRingElement, v: GroupRingElement) -> GroupRingElement:
    """Exact convolution over the group; commutative since the group is abelian."""
    if u.spec != v.spec:
        raise ValueError("group ring elements over different groups")
    spec = u.spec
    out = [0] * spec.order
    if spec.order <= 4096:
        table = spec.addition_table
        for a, ca in enumerate(u.coeffs):
            if ca == 0:
                continue
            row = table[a]
            for b, cb in enumerate(v.coeffs):
                if cb:
                    out[row[b]] += ca * cb
    else:
        for a, ca in enumerate(u.coeffs):
            if ca == 0:
                continue
            for b, cb in enumerate(v.coeffs):
                if cb:
                    out[spec.add(a, b)] += ca * cb
    return GroupRingElement(spec, tuple(out))


def power_map(v: GroupRingElement, m: int) -> GroupRingElement:
    """Push coefficients forward along ``g -> m*g``.

    For ``gcd(m, |G|) != 1`` the map is not injective and coefficients
    landing on the same element accumulate.
    """
    spec = v.spec
    out = [0] * spec.order
    for g, c in enumerate(v.coeffs):
        if c:
            out[spec.scale(g, m)] += c
    return GroupRingElement(spec, tuple(out))


def induced_partition(v: GroupRingElement) -> OrderedPartition:
    """Group elements by equal coefficient."""
    keys: dict[int, int] = {}
    labels = [keys.setdefault(c, len(keys)) for c in v.coeffs]
    return OrderedPartition.from_labels(v.spec, labels)


def extract_by_coefficient(v: GroupRingElement, value: int) -> frozenset[int]:
    """All elements carrying the given coefficient."""
    return frozenset(g for g, c in enumerate(v.coeffs) if c == value)


def _convolve_indicator_sets(spec: GroupSpec, left: tuple[int, ...], right: tuple[int, ...]) -> list[int]:
    out = [0] * spec.order
    if spec.order <= 4096:
        table = spec.addition_table
        for a in left:
            row = table[a]
            for b in right:
                out[row[b]] += 1
    else:
        for a in left:
            for b in right:
                out[spec.add(a, b)] += 1
    return out


def _meet_labels(labels: list[int], values: list[int]) -> list[int]:
    keys: dict[tuple[int, int], int] = {}
    return [keys.setdefault((lab, val), len(keys)) for lab, val in zip(labels, values)]


def refine(partition: OrderedPartition) -> OrderedPartition:
    """One refinement round: meet with the coefficient partitions of all
    pairwise products of class indicators.

    The group is abelian, so only unordered class pairs are convolved; the
    result equals the meet over all ordered pairs.
    """
    spec = partition.spec
    n = spec.order
    labels = list(partition.membership)
    classes = partition.classes
    r = len(classes)
    distinct = len(set(labels))
    for i in range(r):
        if distinct == n:
            break
        for j in range(i, r):
            conv = _convolve_indicator_sets(spec, classes[i], classes[j])
            labels = _meet_labels(labels, conv)
            distinct = len(set(labels))
            if distinct == n:
                break
    return OrderedPartition.from_labels(spec, labels)


def refine_con(partition: OrderedPartition, con: Iterable[int]) -> OrderedPartition:
    """One in-neighbor counting round: meet with the coefficient partitions
    of the connection-set indicator times each class indicator."""
    spec = partition.spec
    con_set = tuple(sorted(set(con)))
    if not con_set:
        return partition
    labels = list(partition.membership)
    for cls in partition.classes:
        conv = _convolve_indicator_sets(spec, con_set, cls)
        labels = _meet_labels(labels, conv)
    return OrderedPartition.from_labels(spec, labels)


def stabilize_refine(partition: OrderedPartition) -> RefinementTrace:
    """Iterate :func:`refine` to its fixed point."""
    return refine_to_stable(partition, refine)


def stabilize_refine_con(partition: OrderedPartition, con: Iterable[int]) -> RefinementTrace:
    """Iterate :func:`refine_con` with a fixed connection set to its fixed point."""
    con_set = tuple(sorted(set(con)))
    return refine_to_stable(partition, partial(refine_con, con=con_set))


def exponentiation_closure(partition: OrderedPartition) -> OrderedPartition:
    """Meet of all unit-multiplier images of the partition.

    The result is exponentiation-stable and refines the input.
    """
    spec = partition.spec
    labels = list(partition.membership)
    for m in unit_multipliers(spec):
        if m == 1:
            continue
        image = [0] * spec.order
        for ci, cls in enumerate(partition.classes):
            for g in cls:
                image[spec.scale(g, m)] = ci
        labels = _meet_labels(labels, image)
    return OrderedPartition.from_labels(spec, labels)


def is_exponentiation_stable(partition: OrderedPartition) -> bool:
    """True when every unit-multiplier image of every class is a union of classes."""
    spec = partition.spec
    for m in unit_multipliers(spec):
        if m == 1:
            continue
        for cls in partition.classes:
            if not partition.spans(spec.scale(g, m) for g in cls):
                return False
    return True
