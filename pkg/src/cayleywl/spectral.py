"""Prime-order circulant machinery: connection-set stabilizer, eigenvalue
classes of the adjacency operator, and predicted stable partitions.

Eigenvalue equality is decided exactly through the multiplier-coset
criterion; the floating-point spectrum exists only for display and
sanity cross-checks.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence

from .groups import GroupSpec, is_prime
from .partition import OrderedPartition


@dataclass(frozen=True)
class StabilizerData:
    """Multiplicative stabilizer of a connection set in the units mod p."""

    p: int
    con: tuple[int, ...]
    h_elements: tuple[int, ...]
    d_con: int

    @property
    def spec(self) -> GroupSpec:
        return GroupSpec((self.p,))


def stabilizer_subgroup(p: int, con: Iterable[int]) -> StabilizerData:
    """Compute the multipliers h with ``h * con == con`` (a subgroup of the
    units mod p) together with its index."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    con_set = frozenset(con)
    if not con_set:
        raise ValueError("connection set must be nonempty")
    if any(not 1 <= c <= p - 1 for c in con_set):
        raise ValueError("connection elements must lie in 1..p-1")
    h_elements = tuple(
        h for h in range(1, p) if {(h * c) % p for c in con_set} == con_set
    )
    d_con = (p - 1) // len(h_elements)
    data = StabilizerData(p, tuple(sorted(con_set)), h_elements, d_con)
    assert 1 in data.h_elements
    assert data.d_con * len(data.h_elements) == p - 1
    return data


def eigenvalue_classes(sd: StabilizerData) -> OrderedPartition:
    """Partition of 0..p-1 into {0} plus the stabilizer cosets; character
    indices in the same class have equal adjacency eigenvalues."""
    p = sd.p
    labels = [-1] * p
    labels[0] = 0
    next_label = 1
    for a in range(1, p):
        if labels[a] != -1:
            continue
        for h in sd.h_elements:
            labels[(a * h) % p] = next_label
        next_label += 1
    return OrderedPartition.from_labels(sd.spec, labels)


def numeric_spectrum(sd: StabilizerData, tolerance: float = 1e-9) -> list[complex]:
    """Floating eigenvalues of the adjacency operator, one per character index.

    The k-th value is the sum of the primitive p-th roots of unity raised to
    c*k over the connection elements c; index 0 always gives exactly |con|.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    p = sd.p
    values = []
    for k in range(p):
        if k == 0:
            values.append(complex(len(sd.con)))
        else:
            values.append(sum(cmath.exp(2j * cmath.pi * c * k / p) for c in sd.con))
    return values


def group_spectrum(sd: StabilizerData, values: Sequence[complex], tolerance: float = 1e-9) -> OrderedPartition:
    """Group character indices whose eigenvalues agree within tolerance
    (transitively); at sane tolerances this reproduces eigenvalue_classes."""
    p = sd.p
    parent = list(range(p))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(p):
        for j in range(i + 1, p):
            if abs(values[i] - values[j]) <= tolerance:
                parent[find(i)] = find(j)
    return OrderedPartition.from_labels(sd.spec, [find(k) for k in range(p)])


def predicted_individualized_partition(sd: StabilizerData, g0: int) -> OrderedPartition:
    """Stable coloring predicted after individualizing one vertex: the
    singleton g0 plus the translated stabilizer cosets g0 + a*H."""
    p = sd.p
    if not 0 <= g0 < p:
        raise ValueError(f"vertex {g0} out of range for Z_{p}")
    labels = [-1] * p
    labels[g0] = 0
    next_label = 1
    for a in range(1, p):
        v = (g0 + a) % p
        if labels[v] != -1:
            continue
        for h in sd.h_elements:
            labels[(g0 + a * h) % p] = next_label
        next_label += 1
    return OrderedPartition.from_labels(sd.spec, labels)
