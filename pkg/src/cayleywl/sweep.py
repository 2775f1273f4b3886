"""Experiment sweeps over circulant connection sets and the 16-vertex
Tinhofer counterexample reproduction.

Sampled sweeps draw connection-set bitmasks from a 64-bit multiplicative
congruential generator so alternate implementations can reproduce them:
state0 = (seed XOR n*0x9e3779b97f4a7c15) | 1, state = state * 0xd1342543de82ef95
mod 2^64, mask = state >> (64 - (n-1)), drawn until the requested number of
distinct masks is collected.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from typing import Iterator, Optional

from .groups import GroupSpec, divisor_count, parse_group_spec
from .group_ring import stabilize_refine
from .tinhofer import TinhoferReport, has_tinhofer_property, individualize
from .wl import (
    CayleyGraph,
    build_cayley,
    cr_step,
    induced_smodule,
    initial_cayley_smodule,
    partition_from_coloring,
    uniform_coloring,
    wl2_stabilize,
)

MCG_MULTIPLIER = 0xD1342543DE82EF95
_SEED_MIX = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1

EXHAUSTIVE_LIMIT = 20


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("ceil_log2 requires n >= 1")
    return (n - 1).bit_length()


def round_bound(n: int) -> int:
    """Upper bound on refinement rounds for order-n circulants."""
    return (2 + divisor_count(n)) * ceil_log2(n)


def mcg_stream(seed: int) -> Iterator[int]:
    state = (seed | 1) & _MASK64
    while True:
        state = (state * MCG_MULTIPLIER) & _MASK64
        yield state


def sample_connection_masks(n: int, count: int, seed: int) -> list[int]:
    """Distinct connection-set bitmasks for Z_n in draw order (see module doc)."""
    space = 1 << (n - 1)
    if count >= space:
        return [m << 1 for m in range(space)]
    stream = mcg_stream(seed ^ ((n * _SEED_MIX) & _MASK64))
    drawn: list[int] = []
    seen: set[int] = set()
    while len(drawn) < count:
        mask = (next(stream) >> (64 - (n - 1))) << 1
        if mask not in seen:
            seen.add(mask)
            drawn.append(mask)
    return drawn


def mask_to_con(mask: int, n: int) -> tuple[int, ...]:
    return tuple(j for j in range(1, n) if (mask >> j) & 1)


def con_to_mask(con: tuple[int, ...]) -> int:
    mask = 0
    for j in con:
        mask |= 1 << j
    return mask


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: orders to cover, enumeration mode, and cross-check flag.

    Exhaustive mode enumerates all 2^(n-1) connection sets per order (empty
    set included) and is limited to n <= 20; sampled mode requires an
    explicit seed.
    """

    n_values: tuple[int, ...]
    mode: str = "exhaustive"  # "exhaustive" | "sampled"
    sample_count: int = 0
    seed: Optional[int] = None
    cross_check: bool = False
    jobs: int = 1

    def __post_init__(self) -> None:
        if any(n < 2 for n in self.n_values):
            raise ValueError("sweep orders must be >= 2")
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        if self.mode == "exhaustive" and any(n > EXHAUSTIVE_LIMIT for n in self.n_values):
            raise ValueError(f"exhaustive mode limited to n <= {EXHAUSTIVE_LIMIT}")
        if self.mode == "sampled":
            if self.seed is None:
                raise ValueError("sampled mode requires an explicit seed")
            if self.sample_count < 1:
                raise ValueError("sampled mode requires a positive sample count")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass(frozen=True)
class SweepRecord:
    """One instance result; set_mask is hex with bit j set for element j."""

    n: int
    set_mask: str
    rounds: int
    rounds_wl2: Optional[int]
    bound: int
    d: int


class BoundViolation(RuntimeError):
    def __init__(self, record: SweepRecord) -> None:
        super().__init__(
            f"round bound violated: n={record.n} set={record.set_mask} "
            f"rounds={record.rounds} > bound={record.bound}"
        )
        self.record = record


class EngineMismatch(RuntimeError):
    def __init__(self, n: int, mask: int, detail: str) -> None:
        super().__init__(f"engine disagreement at n={n} set=0x{mask:x}: {detail}")
        self.n = n
        self.mask = mask


def sweep_instance(n: int, mask: int, cross_check: bool = False) -> SweepRecord:
    """Stabilize one circulant instance on the algebraic path, optionally
    cross-checking round count and final partition against the pair-coloring
    engine."""
    spec = GroupSpec((n,))
    con = mask_to_con(mask, n)
    trace = stabilize_refine(initial_cayley_smodule(spec, con))
    rounds_wl2: Optional[int] = None
    if cross_check:
        wl_trace = wl2_stabilize(build_cayley(spec, con))
        wl_module = induced_smodule(wl_trace.final, spec)
        if wl_trace.rounds != trace.rounds:
            raise EngineMismatch(
                n, mask, f"rounds {wl_trace.rounds} (pair) vs {trace.rounds} (module)"
            )
        if wl_module.classes != trace.final.classes:
            raise EngineMismatch(
                n, mask, f"final {wl_module.to_text()} (pair) vs {trace.final.to_text()} (module)"
            )
        rounds_wl2 = wl_trace.rounds
    record = SweepRecord(
        n=n,
        set_mask=f"0x{mask:x}",
        rounds=trace.rounds,
        rounds_wl2=rounds_wl2,
        bound=round_bound(n),
        d=divisor_count(n),
    )
    if record.rounds > record.bound:
        raise BoundViolation(record)
    return record


def _worker(args: tuple[int, int, bool]) -> SweepRecord:
    return sweep_instance(*args)


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    """All instance records, ordered by (n, connection-set bitmask).

    Raises BoundViolation on the first bound breach and EngineMismatch when a
    cross-check disagrees; output is identical regardless of parallelism.
    """
    instances: list[tuple[int, int, bool]] = []
    for n in sorted(cfg.n_values):
        if cfg.mode == "exhaustive":
            masks = [m << 1 for m in range(1 << (n - 1))]
        else:
            masks = sorted(sample_connection_masks(n, cfg.sample_count, cfg.seed or 0))
        instances.extend((n, mask, cfg.cross_check) for mask in masks)
    if cfg.jobs > 1:
        with multiprocessing.Pool(cfg.jobs) as pool:
            records = pool.map(_worker, instances, chunksize=256)
    else:
        records = [_worker(args) for args in instances]
    return records


# ---------------------------------------------------------------------------
# counterexample reproduction
# ---------------------------------------------------------------------------

COUNTEREXAMPLE_GROUP = "Z4xZ4"
COUNTEREXAMPLE_CON_RESIDUES: tuple[tuple[int, int], ...] = (
    (1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3),
)

# Reference round-by-round class lists the reproduction validates against,
# as canonical index partitions (index = 4a + b for element (a, b)).
EXPECTED_COUNTEREXAMPLE_ROUNDS: tuple[str, ...] = (
    "0|1,2,3,4,5,6,7,8,9,10,11,12,13,14,15",
    "0|1,3,4,5,12,15|2,6,7,8,9,10,11,13,14",
    "0|1,3,4,5,12,15|2,7,8,10,13|6,9,11,14",
    "0|1,3,4,12|2,7,8,13|5,15|6,9,11,14|10",
)


@dataclass(frozen=True)
class CounterexampleReport:
    computed_rounds: tuple[str, ...]
    expected_rounds: tuple[str, ...]
    tinhofer: TinhoferReport


class CounterexampleMismatch(AssertionError):
    def __init__(self, computed: tuple[str, ...], expected: tuple[str, ...], detail: str) -> None:
        lines = [detail]
        for i in range(max(len(computed), len(expected))):
            got = computed[i] if i < len(computed) else "<absent>"
            want = expected[i] if i < len(expected) else "<absent>"
            marker = "  " if got == want else "! "
            lines.append(f"{marker}round {i}: computed {got}")
            lines.append(f"{marker}round {i}: expected {want}")
        super().__init__("\n".join(lines))
        self.computed = computed
        self.expected = expected


def counterexample_graph() -> CayleyGraph:
    spec = parse_group_spec(COUNTEREXAMPLE_GROUP)
    return CayleyGraph(spec, tuple(spec.index(r) for r in COUNTEREXAMPLE_CON_RESIDUES))


def compute_counterexample_rounds() -> tuple[str, ...]:
    """Color refinement of the counterexample graph after individualizing
    element (0,0), one canonical partition text per round (round 0 is the
    individualized start)."""
    cg = counterexample_graph()
    spec = cg.spec
    dg = cg.digraph()
    coloring = individualize(uniform_coloring(spec.order), spec.identity)
    rounds = [partition_from_coloring(coloring, spec).to_text()]
    while True:
        refined = cr_step(dg, coloring)
        if refined.class_count == coloring.class_count:
            break
        coloring = refined
        rounds.append(partition_from_coloring(coloring, spec).to_text())
    return tuple(rounds)


def reproduce_counterexample(budget: int = 1_000_000) -> CounterexampleReport:
    """Recompute the counterexample record: the four round class lists must
    match the reference byte-exactly and the Tinhofer property check must
    come back false.

    Aborts with a diff on any round-list mismatch.
    """
    computed = compute_counterexample_rounds()
    if computed != EXPECTED_COUNTEREXAMPLE_ROUNDS:
        raise CounterexampleMismatch(
            computed,
            EXPECTED_COUNTEREXAMPLE_ROUNDS,
            "counterexample round class-lists diverge from the reference",
        )
    report = has_tinhofer_property(counterexample_graph(), budget=budget)
    if report.status != "false":
        raise CounterexampleMismatch(
            computed,
            EXPECTED_COUNTEREXAMPLE_ROUNDS,
            f"expected the Tinhofer property to fail, got status {report.status!r}",
        )
    return CounterexampleReport(
        computed_rounds=computed,
        expected_rounds=EXPECTED_COUNTEREXAMPLE_ROUNDS,
        tinhofer=report,
    )
