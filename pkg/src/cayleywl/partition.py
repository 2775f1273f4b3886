"""Ordered partitions of a finite abelian group and refinement traces.

A partition doubles as the basis description of the linear span of its
class indicator vectors inside the group ring, so the refinement
operators in :mod:`cayleywl.group_ring` act directly on this type.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

from .groups import GroupSpec


@dataclass(frozen=True)
class OrderedPartition:
    """Disjoint nonempty element-index classes covering the group.

    Canonical form: each class sorted ascending, classes ordered by their
    minimum element.  Construct via :meth:`from_classes` / :meth:`from_labels`
    so the canonical form and the partition invariants always hold.
    """

    spec: GroupSpec
    classes: tuple[tuple[int, ...], ...]

    @classmethod
    def from_classes(cls, spec: GroupSpec, classes: Iterable[Iterable[int]]) -> OrderedPartition:
        normalized = sorted(tuple(sorted(set(c))) for c in classes if tuple(c))
        seen: set[int] = set()
        total = 0
        for c in normalized:
            if not c:
                raise ValueError("empty class in partition")
            total += len(c)
            seen.update(c)
        if seen != set(range(spec.order)) or total != spec.order:
            raise ValueError(f"classes do not partition the {spec.order} group elements")
        return cls(spec, tuple(normalized))

    @classmethod
    def from_labels(cls, spec: GroupSpec, labels: Sequence[int]) -> OrderedPartition:
        if len(labels) != spec.order:
            raise ValueError(f"expected {spec.order} labels, got {len(labels)}")
        buckets: dict[int, list[int]] = {}
        for g, lab in enumerate(labels):
            buckets.setdefault(lab, []).append(g)
        return cls(spec, tuple(sorted(tuple(c) for c in buckets.values())))

    @classmethod
    def single(cls, spec: GroupSpec) -> OrderedPartition:
        """The one-class partition."""
        return cls(spec, (tuple(range(spec.order)),))

    @classmethod
    def discrete(cls, spec: GroupSpec) -> OrderedPartition:
        """All-singletons partition."""
        return cls(spec, tuple((g,) for g in range(spec.order)))

    @cached_property
    def membership(self) -> tuple[int, ...]:
        """Class index (position in ``classes``) per element."""
        labels = [0] * self.spec.order
        for ci, c in enumerate(self.classes):
            for g in c:
                labels[g] = ci
        return tuple(labels)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def is_discrete(self) -> bool:
        return len(self.classes) == self.spec.order

    def class_of(self, g: int) -> tuple[int, ...]:
        return self.classes[self.membership[g]]

    def refines(self, other: OrderedPartition) -> bool:
        """True when every class of self lies inside a class of other."""
        if self.spec != other.spec:
            raise ValueError("partitions over different groups")
        theirs = other.membership
        return all(len({theirs[g] for g in c}) == 1 for c in self.classes)

    def meet(self, other: OrderedPartition) -> OrderedPartition:
        """Coarsest common refinement: all nonempty pairwise intersections."""
        if self.spec != other.spec:
            raise ValueError("partitions over different groups")
        mine, theirs = self.membership, other.membership
        keys: dict[tuple[int, int], int] = {}
        labels = []
        for g in range(self.spec.order):
            key = (mine[g], theirs[g])
            labels.append(keys.setdefault(key, len(keys)))
        return OrderedPartition.from_labels(self.spec, labels)

    def spans(self, elements: Iterable[int]) -> bool:
        """True when the element set is exactly a union of classes."""
        target = set(elements)
        if not target:
            return True
        touched = {self.membership[g] for g in target}
        return sum(len(self.classes[ci]) for ci in touched) == len(target)

    def to_text(self) -> str:
        """Canonical text form, e.g. ``"0|1,8|2,7|3,6|4,5"``."""
        return "|".join(",".join(str(g) for g in c) for c in self.classes)

    @classmethod
    def from_text(cls, spec: GroupSpec, text: str) -> OrderedPartition:
        classes = [
            [int(tok) for tok in chunk.split(",") if tok != ""]
            for chunk in text.split("|")
        ]
        return cls.from_classes(spec, classes)


def meet(p: OrderedPartition, q: OrderedPartition) -> OrderedPartition:
    return p.meet(q)


@dataclass(frozen=True)
class RefinementTrace:
    """Record of one run of a refinement loop.

    ``rounds`` counts strictly refining applications only; the terminal
    application that confirms the fixed point is not counted.
    ``class_counts`` holds the class count before any refinement followed by
    the count after each refining round (``rounds + 1`` entries, strictly
    increasing).
    """

    rounds: int
    class_counts: tuple[int, ...]
    final: Any


def refine_to_stable(
    start: OrderedPartition,
    step: Callable[[OrderedPartition], OrderedPartition],
) -> RefinementTrace:
    """Apply a refining operator until the partition stops changing."""
    current = start
    counts = [current.class_count]
    rounds = 0
    while True:
        refined = step(current)
        if refined.classes == current.classes:
            break
        current = refined
        counts.append(current.class_count)
        rounds += 1
    return RefinementTrace(rounds=rounds, class_counts=tuple(counts), final=current)
