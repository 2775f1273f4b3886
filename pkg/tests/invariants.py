"""Shared oracles and invariant suites.

The oracle functions recompute expected values from first principles
(residue-tuple arithmetic, brute-force closures, in-neighbor counting) so
they stay independent of the library code paths they validate.  The
check_* functions run at configurable ranges: unit tests call them on small
slices, the acceptance suite at the full stated ranges.
"""

from __future__ import annotations

import math
import random
from collections import Counter

from cayleywl import (
    CayleyGraph,
    GroupSpec,
    OrderedPartition,
    build_cayley,
    cr_step,
    divisor_count,
    eigenvalue_classes,
    exponentiation_closure,
    induced_partition,
    induced_smodule,
    is_exponentiation_stable,
    multiply,
    numeric_spectrum,
    power_map,
    refine,
    refine_con,
    simple_quantity,
    stabilizer_subgroup,
    unit_multipliers,
    wl2_step,
)
from cayleywl.group_ring import GroupRingElement
from cayleywl.spectral import group_spectrum
from cayleywl.tinhofer import graph_automorphisms
from cayleywl.wl import (
    coloring_from_partition,
    initial_cayley_smodule,
    initial_pair_coloring,
    partition_from_coloring,
)


# ---------------------------------------------------------------------------
# oracles (independent recomputations)
# ---------------------------------------------------------------------------

def conv_oracle(spec: GroupSpec, u: GroupRingElement, v: GroupRingElement) -> tuple[int, ...]:
    """Convolution recomputed on residue tuples with a dict accumulator."""
    acc: dict[tuple[int, ...], int] = {}
    for a, ca in enumerate(u.coeffs):
        if not ca:
            continue
        ra = spec.element(a)
        for b, cb in enumerate(v.coeffs):
            if not cb:
                continue
            rb = spec.element(b)
            key = tuple((x + y) % m for x, y, m in zip(ra, rb, spec.moduli))
            acc[key] = acc.get(key, 0) + ca * cb
    out = [0] * spec.order
    for residues, coeff in acc.items():
        out[spec.index(residues)] = coeff
    return tuple(out)


def pushforward_oracle(spec: GroupSpec, v: GroupRingElement, m: int) -> tuple[int, ...]:
    out = [0] * spec.order
    for g, c in enumerate(v.coeffs):
        residues = tuple((r * m) % mod for r, mod in zip(spec.element(g), spec.moduli))
        out[spec.index(residues)] += c
    return tuple(out)


def power_classes_oracle(spec: GroupSpec) -> set[frozenset[int]]:
    """Brute-force closure of g ~ m*g over all multipliers coprime to |G|."""
    units = unit_multipliers(spec) or [0]
    classes = set()
    for g in range(spec.order):
        classes.add(frozenset(spec.scale(g, m) for m in units) | {g})
    return classes


def in_neighbor_split_oracle(
    spec: GroupSpec, con: tuple[int, ...], partition: OrderedPartition
) -> OrderedPartition:
    """One color-refinement round by direct in-neighbor counting on the graph."""
    member = partition.membership
    labels = []
    for v in range(spec.order):
        counts = Counter(member[spec.add(v, spec.neg(s))] for s in con)
        labels.append((member[v], tuple(sorted(counts.items()))))
    canon = {lab: i for i, lab in enumerate(sorted(set(labels)))}
    return OrderedPartition.from_labels(spec, [canon[l] for l in labels])


def exponentiation_closure_oracle(partition: OrderedPartition) -> set[frozenset[int]]:
    """Meet over multiplier images computed with frozensets."""
    spec = partition.spec
    keys: dict[int, list] = {g: [] for g in range(spec.order)}
    for m in unit_multipliers(spec):
        image_member = {}
        for ci, cls in enumerate(partition.classes):
            for g in cls:
                image_member[spec.scale(g, m)] = ci
        for g in range(spec.order):
            keys[g].append(image_member[g])
    groups: dict[tuple, set[int]] = {}
    for g, key in keys.items():
        groups.setdefault(tuple(key), set()).add(g)
    return {frozenset(s) for s in groups.values()}


# ---------------------------------------------------------------------------
# deterministic partition generators
# ---------------------------------------------------------------------------

def random_partition(spec: GroupSpec, rng: random.Random, max_classes: int = 0) -> OrderedPartition:
    k = rng.randint(1, max_classes or spec.order)
    labels = [rng.randrange(k) for _ in range(spec.order)]
    return OrderedPartition.from_labels(spec, labels)


def coarsen(partition: OrderedPartition, rng: random.Random) -> OrderedPartition:
    """Random partition that the input refines."""
    r = len(partition.classes)
    k = rng.randint(1, r)
    merge = [rng.randrange(k) for _ in range(r)]
    labels = [merge[partition.membership[g]] for g in range(partition.spec.order)]
    return OrderedPartition.from_labels(partition.spec, labels)


def small_group_specs(max_order: int) -> list[GroupSpec]:
    specs = [GroupSpec((n,)) for n in range(2, max_order + 1)]
    for moduli in ((2, 2), (2, 4), (3, 3), (2, 2, 3), (2, 6), (4, 4)):
        if math.prod(moduli) <= max_order:
            specs.append(GroupSpec(moduli))
    return specs


def all_connection_sets(n: int):
    for mask in range(1 << (n - 1)):
        yield tuple(j for j in range(1, n) if mask >> (j - 1) & 1)


# ---------------------------------------------------------------------------
# invariant suites
# ---------------------------------------------------------------------------

def check_classwise_extraction(max_order: int, samples_per_spec: int, seed: int) -> int:
    """Coefficient-wise images of module elements stay constant on classes:
    the induced partition of any class-combination is coarsened by the
    partition itself."""
    rng = random.Random(seed)
    checked = 0
    for spec in small_group_specs(max_order):
        for _ in range(samples_per_spec):
            part = random_partition(spec, rng)
            weights = [rng.randint(-3, 3) for _ in part.classes]
            coeffs = [0] * spec.order
            for w, cls in zip(weights, part.classes):
                for g in cls:
                    coeffs[g] = w
            v = GroupRingElement(spec, tuple(coeffs))
            assert part.refines(induced_partition(v)), (spec, part.to_text(), weights)
            checked += 1
    return checked


def check_spans_closure(max_order: int, samples_per_spec: int, seed: int) -> int:
    """Unions of classes are closed under intersection and union."""
    rng = random.Random(seed)
    checked = 0
    for spec in small_group_specs(max_order):
        for _ in range(samples_per_spec):
            part = random_partition(spec, rng)
            r = len(part.classes)
            pick1 = [i for i in range(r) if rng.random() < 0.5]
            pick2 = [i for i in range(r) if rng.random() < 0.5]
            t1 = {g for i in pick1 for g in part.classes[i]}
            t2 = {g for i in pick2 for g in part.classes[i]}
            assert part.spans(t1) and part.spans(t2)
            assert part.spans(t1 & t2), (spec, part.to_text())
            assert part.spans(t1 | t2), (spec, part.to_text())
            checked += 1
    return checked


def check_product_membership(max_order: int, samples_per_spec: int, seed: int) -> int:
    """Products of module elements have constant coefficients on the classes
    of the refined partition."""
    rng = random.Random(seed)
    checked = 0
    for spec in small_group_specs(max_order):
        for _ in range(samples_per_spec):
            part = random_partition(spec, rng)
            refined = refine(part)

            def combo() -> GroupRingElement:
                coeffs = [0] * spec.order
                for cls in part.classes:
                    w = rng.randint(0, 3)
                    for g in cls:
                        coeffs[g] = w
                return GroupRingElement(spec, tuple(coeffs))

            product = multiply(combo(), combo())
            assert refined.refines(induced_partition(product)), (spec, part.to_text())
            checked += 1
    return checked


def check_refine_monotone(max_order: int, samples_per_spec: int, seed: int) -> int:
    """Refining a finer partition keeps it finer, for both operators."""
    rng = random.Random(seed)
    checked = 0
    for spec in small_group_specs(max_order):
        for _ in range(samples_per_spec):
            fine = random_partition(spec, rng)
            coarse = coarsen(fine, rng)
            assert refine(fine).refines(refine(coarse)), (spec, fine.to_text())
            con = tuple(
                s for s in range(1, spec.order) if rng.random() < 0.4
            )
            assert refine_con(fine, con).refines(refine_con(coarse, con))
            checked += 1
    return checked


def _ceil_log2(m: int) -> int:
    return (m - 1).bit_length()


def check_power_membership(max_order: int, samples_per_spec: int, seed: int) -> int:
    """Multiplier images of classes appear within 2*ceil(log2 m) refinement
    rounds."""
    rng = random.Random(seed)
    checked = 0
    for spec in small_group_specs(max_order):
        parts = [random_partition(spec, rng) for _ in range(samples_per_spec)]
        if len(spec.moduli) == 1:
            parts += [
                initial_cayley_smodule(spec, con)
                for con in all_connection_sets(spec.order)
                if rng.random() < 0.2
            ]
        for part in parts:
            chain = [part]
            for m in unit_multipliers(spec):
                if m == 1:
                    continue
                depth = 2 * _ceil_log2(m)
                while len(chain) <= depth:
                    chain.append(refine(chain[-1]))
                target = chain[depth]
                for cls in part.classes:
                    image = {spec.scale(g, m) for g in cls}
                    assert target.spans(image), (spec, part.to_text(), m, cls)
            checked += 1
    return checked


def check_stability_preserved(max_order: int, samples_per_spec: int, seed: int) -> int:
    """Refinement keeps exponentiation-stability."""
    rng = random.Random(seed)
    checked = 0
    for spec in small_group_specs(max_order):
        for _ in range(samples_per_spec):
            stable = exponentiation_closure(random_partition(spec, rng))
            assert is_exponentiation_stable(stable)
            assert is_exponentiation_stable(refine(stable)), (spec, stable.to_text())
            checked += 1
    return checked


def check_wl_module_equivalence(n: int, sample_masks=None) -> int:
    """One pair-coloring round equals one module refinement round, and the
    stabilized results agree, for Cay(Z_n, S)."""
    spec = GroupSpec((n,))
    checked = 0
    sets = (
        all_connection_sets(n)
        if sample_masks is None
        else (tuple(j for j in range(1, n) if mask >> j & 1) for mask in sample_masks)
    )
    for con in sets:
        g = build_cayley(spec, con)
        coloring = initial_pair_coloring(g)
        module = induced_smodule(coloring, spec)
        assert module.classes == initial_cayley_smodule(spec, con).classes
        for _ in range(2):
            stepped = wl2_step(coloring)
            refined = refine(module)
            assert induced_smodule(stepped, spec).classes == refined.classes, (n, con)
            coloring, module = stepped, refined
        checked += 1
    return checked


def check_cr_con_equivalence(max_order: int, samples_per_spec: int, seed: int) -> int:
    """One color-refinement round on a Cayley graph equals one connection-set
    refinement round on the vertex partition."""
    rng = random.Random(seed)
    checked = 0
    for spec in small_group_specs(max_order):
        dgs = {}
        for _ in range(samples_per_spec):
            con = tuple(s for s in range(1, spec.order) if rng.random() < 0.4)
            if con not in dgs:
                dgs[con] = build_cayley(spec, con)
            part = random_partition(spec, rng)
            stepped = cr_step(dgs[con], coloring_from_partition(part))
            expected = refine_con(part, con)
            assert partition_from_coloring(stepped, spec).classes == expected.classes
            oracle = in_neighbor_split_oracle(spec, con, part)
            assert oracle.classes == expected.classes, (spec, con, part.to_text())
            checked += 1
    return checked


def check_cr_respects_automorphisms(primes: tuple[int, ...], seed: int) -> int:
    """A refinement round applied to a coloring invariant under one of the
    linear automorphisms x -> h*x + b stays invariant under it."""
    rng = random.Random(seed)
    checked = 0
    for p in primes:
        spec = GroupSpec((p,))
        for con in all_connection_sets(p):
            if not con:
                continue
            sd = stabilizer_subgroup(p, con)
            dg = build_cayley(spec, con)
            for h in sd.h_elements:
                b = rng.randrange(p)
                phi = [(h * x + b) % p for x in range(p)]
                # random coloring constant on the cycles of phi
                cycle = [-1] * p
                cycles = 0
                for x in range(p):
                    if cycle[x] == -1:
                        y = x
                        while cycle[y] == -1:
                            cycle[y] = cycles
                            y = phi[y]
                        cycles += 1
                merge = [rng.randrange(cycles) for _ in range(cycles)]
                labels = [merge[cycle[x]] for x in range(p)]
                base = coloring_from_partition(OrderedPartition.from_labels(spec, labels))
                assert all(base.colors[phi[x]] == base.colors[x] for x in range(p))
                after = cr_step(dg, base)
                assert all(
                    after.colors[phi[x]] == after.colors[x] for x in range(p)
                ), (p, con, h, b)
                checked += 1
    return checked


def check_automorphism_family(primes: tuple[int, ...]) -> int:
    """Every map x -> h*x + b with h in the stabilizer is an automorphism,
    and for nontrivial connection sets these are all of them."""
    checked = 0
    for p in primes:
        spec = GroupSpec((p,))
        for con in all_connection_sets(p):
            if not con:
                continue
            sd = stabilizer_subgroup(p, con)
            dg = build_cayley(spec, con)
            out_sets = [set(s) for s in dg.out_neighbors]
            for h in sd.h_elements:
                for b in range(p):
                    phi = [(h * x + b) % p for x in range(p)]
                    for u in range(p):
                        assert {phi[v] for v in out_sets[u]} == out_sets[phi[u]], (p, con, h, b)
            if len(con) < p - 1:
                count = sum(1 for _ in graph_automorphisms(CayleyGraph(spec, con)))
                assert count == p * len(sd.h_elements), (p, con, count)
            checked += 1
    return checked


def check_spectrum_grouping(primes: tuple[int, ...], tolerance: float = 1e-9) -> int:
    """Tolerance grouping of the floating spectrum reproduces the exact coset
    classes."""
    checked = 0
    for p in primes:
        for con in all_connection_sets(p):
            if not con:
                continue
            sd = stabilizer_subgroup(p, con)
            values = numeric_spectrum(sd, tolerance)
            assert values[0] == complex(len(con))
            grouped = group_spectrum(sd, values, tolerance)
            assert grouped.classes == eigenvalue_classes(sd).classes, (p, con)
            checked += 1
    return checked


def check_power_bijectivity(max_order: int) -> int:
    """x -> m*x permutes the group exactly when gcd(m, |G|) = 1."""
    checked = 0
    for spec in small_group_specs(max_order):
        n = spec.order
        for m in range(n):
            image = {spec.scale(g, m) for g in range(n)}
            assert (len(image) == n) == (math.gcd(m, n) == 1), (spec, m)
            checked += 1
    return checked
