"""Finite abelian groups as products of cyclic factors, with 0-based element indices.

Elements are residue tuples; every element also has a fixed integer index
under mixed-radix encoding with the most significant factor first.  All
partitions, colorings, and output formats in this package use these indices.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

GroupElement = tuple[int, ...]
"""Residue tuple, component ``i`` in ``[0, moduli[i])``."""

_SPEC_RE = re.compile(r"z(\d+)((?:xz\d+)*)", re.IGNORECASE)


@dataclass(frozen=True)
class GroupSpec:
    """Direct product of cyclic groups ``Z_{n_1} x ... x Z_{n_k}``, written additively."""

    moduli: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.moduli:
            raise ValueError("group needs at least one cyclic factor")
        if any(n < 1 for n in self.moduli):
            raise ValueError(f"cyclic factor orders must be >= 1, got {self.moduli}")

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        # stride of factor i = product of the orders of all less significant factors
        strides = []
        acc = 1
        for n in reversed(self.moduli):
            strides.append(acc)
            acc *= n
        return tuple(reversed(strides))

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    def element(self, index: int) -> GroupElement:
        """Residue tuple for an element index (inverse of :meth:`index`)."""
        if not 0 <= index < self.order:
            raise ValueError(f"element index {index} out of range for order {self.order}")
        residues = []
        for stride, n in zip(self._strides, self.moduli):
            residues.append((index // stride) % n)
        return tuple(residues)

    def index(self, residues: Sequence[int]) -> int:
        """Element index of a residue tuple; residues are reduced componentwise."""
        if len(residues) != len(self.moduli):
            raise ValueError(
                f"expected {len(self.moduli)} residues, got {len(residues)}"
            )
        return sum((r % n) * s for r, n, s in zip(residues, self.moduli, self._strides))

    def add(self, i: int, j: int) -> int:
        """Index of the sum of elements ``i`` and ``j``."""
        if len(self.moduli) == 1:
            return (i + j) % self.moduli[0]
        a, b = self.element(i), self.element(j)
        return self.index(tuple(x + y for x, y in zip(a, b)))

    def neg(self, i: int) -> int:
        """Index of the inverse of element ``i``."""
        if len(self.moduli) == 1:
            return (-i) % self.moduli[0]
        return self.index(tuple(-r for r in self.element(i)))

    def scale(self, i: int, m: int) -> int:
        """Index of the ``m``-fold multiple of element ``i``."""
        if len(self.moduli) == 1:
            return (i * m) % self.moduli[0]
        return self.index(tuple(r * m for r in self.element(i)))

    @cached_property
    def addition_table(self) -> tuple[tuple[int, ...], ...]:
        """Dense |G| x |G| table of :meth:`add`; only for small groups."""
        if self.order > 4096:
            raise ValueError("addition table only materialized for order <= 4096")
        n = self.order
        if len(self.moduli) == 1:
            return tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return tuple(tuple(self.add(i, j) for j in range(n)) for i in range(n))

    def __str__(self) -> str:
        return "x".join(f"Z{n}" for n in self.moduli)


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``"Z9"`` or ``"Z4xZ4"`` (case-insensitive) into a :class:`GroupSpec`."""
    m = _SPEC_RE.fullmatch(text.strip())
    if m is None:
        raise ValueError(f"malformed group spec {text!r}; expected e.g. 'Z9' or 'Z4xZ4'")
    moduli = tuple(int(part) for part in re.findall(r"\d+", text))
    return GroupSpec(moduli)


def element_power(spec: GroupSpec, g: GroupElement, m: int) -> GroupElement:
    """The ``m``-fold multiple of ``g``, componentwise mod the factor orders.

    Bijective on the group exactly when ``gcd(m, |G|) = 1``.
    """
    if len(g) != len(spec.moduli):
        raise ValueError(f"element {g} does not match group {spec}")
    return tuple((r * m) % n for r, n in zip(g, spec.moduli))


def divisor_count(n: int) -> int:
    """Number of positive divisors of ``n``."""
    if n < 1:
        raise ValueError(f"divisor_count requires n >= 1, got {n}")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def unit_multipliers(spec: GroupSpec) -> list[int]:
    """Ascending multipliers ``m`` in ``[1, |G|)`` with ``gcd(m, |G|) = 1``."""
    order = spec.order
    return [m for m in range(1, order) if math.gcd(m, order) == 1]


def power_equivalence_classes(spec: GroupSpec):
    """Partition of the group into power-equivalence classes.

    Two elements are equivalent when one is a unit multiple of the other.
    The class count is the divisor count of ``n`` for cyclic ``Z_n``.
    """
    from .partition import OrderedPartition

    n = spec.order
    units = unit_multipliers(spec) or [0]
    labels = [-1] * n
    next_label = 0
    for g in range(n):
        if labels[g] != -1:
            continue
        for m in units:
            labels[spec.scale(g, m)] = next_label
        labels[g] = next_label
        next_label += 1
    return OrderedPartition.from_labels(spec, labels)


def power_class_count(spec: GroupSpec) -> int:
    """Number of power-equivalence classes (equals divisor_count(n) for Z_n)."""
    return len(power_equivalence_classes(spec).classes)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True

