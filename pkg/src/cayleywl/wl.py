"""Reference 2-WL and color-refinement engines plus the Cayley-graph bridge.

The pair-coloring engine is the generic oracle; for Cayley graphs the
partition-of-the-group view (see :mod:`cayleywl.group_ring`) computes the
same refinement much faster, and the two are cross-validated in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .groups import GroupSpec, parse_group_spec
from .partition import OrderedPartition, RefinementTrace


class GraphFormatError(ValueError):
    """Malformed graph description; ``position`` is the offset in the input."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class DiGraph:
    """Directed graph without loops; vertices are ``0..n-1``."""

    n: int
    out_neighbors: tuple[tuple[int, ...], ...]
    in_neighbors: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> DiGraph:
        outs: list[set[int]] = [set() for _ in range(n)]
        ins: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise ValueError(f"loop at vertex {u} not allowed")
            outs[u].add(v)
            ins[v].add(u)
        return cls(
            n,
            tuple(tuple(sorted(s)) for s in outs),
            tuple(tuple(sorted(s)) for s in ins),
        )

    @cached_property
    def _out_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(s) for s in self.out_neighbors)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._out_sets[u]

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.out_neighbors)


@dataclass(frozen=True)
class CayleyGraph:
    """Cayley graph descriptor: edges ``h -> s + h`` for connection elements s."""

    spec: GroupSpec
    con: tuple[int, ...]

    def __post_init__(self) -> None:
        con = tuple(sorted(set(self.con)))
        object.__setattr__(self, "con", con)
        for s in con:
            if not 0 <= s < self.spec.order:
                raise ValueError(f"connection element {s} out of range for {self.spec}")
        if self.spec.identity in con:
            raise ValueError("identity element not allowed in a connection set")

    @property
    def n(self) -> int:
        return self.spec.order

    def is_undirected(self) -> bool:
        con = set(self.con)
        return all(self.spec.neg(s) in con for s in con)

    def digraph(self) -> DiGraph:
        return build_cayley(self.spec, self.con)


Graph = Union[DiGraph, CayleyGraph]


def build_cayley(spec: GroupSpec, con: Iterable[int]) -> DiGraph:
    """Materialize the Cayley graph as a plain digraph."""
    con_set = tuple(sorted(set(con)))
    if spec.identity in con_set:
        raise ValueError("identity element not allowed in a connection set")
    edges = []
    for s in con_set:
        for h in range(spec.order):
            edges.append((h, spec.add(s, h)))
    return DiGraph.from_edges(spec.order, edges)


def as_digraph(g: Graph) -> DiGraph:
    return g.digraph() if isinstance(g, CayleyGraph) else g


# ---------------------------------------------------------------------------
# pair colorings and 2-WL
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairColoring:
    """Color matrix on vertex pairs, stored row-major with ids ``0..k-1``."""

    n: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.colors) != self.n * self.n:
            raise ValueError("pair coloring needs n*n entries")
        used = set(self.colors)
        if used != set(range(len(used))):
            raise ValueError("pair color ids must be 0..k-1 with every id used")

    def color(self, i: int, j: int) -> int:
        return self.colors[i * self.n + j]

    @property
    def class_count(self) -> int:
        return max(self.colors) + 1


def initial_pair_coloring(g: Graph) -> PairColoring:
    """Structural coloring of all pairs: diagonal, non-edge, forward-only,
    backward-only, bidirectional; only realized categories receive ids."""
    dg = as_digraph(g)
    n = dg.n
    raw = []
    for i in range(n):
        for j in range(n):
            if i == j:
                raw.append(0)
            else:
                fwd = dg.has_edge(i, j)
                bwd = dg.has_edge(j, i)
                raw.append(4 if fwd and bwd else 2 if fwd else 3 if bwd else 1)
    realized = {cat: idx for idx, cat in enumerate(sorted(set(raw)))}
    return PairColoring(n, tuple(realized[c] for c in raw))


def wl2_step(c: PairColoring) -> PairColoring:
    """One 2-WL round: recolor each pair by its old color together with the
    multiset over all third vertices v of the color pair (left leg, right leg).

    Fresh ids are assigned by first occurrence in row-major order.
    """
    n = c.n
    cols = c.colors
    sigs = []
    for i in range(n):
        row_base = i * n
        for j in range(n):
            legs = sorted((cols[row_base + v], cols[v * n + j]) for v in range(n))
            sigs.append((cols[row_base + j], tuple(legs)))
    ids: dict[object, int] = {}
    return PairColoring(n, tuple(ids.setdefault(s, len(ids)) for s in sigs))


def wl2_stabilize(g: Graph) -> RefinementTrace:
    """Iterate :func:`wl2_step` from the structural coloring to its fixed point."""
    current = initial_pair_coloring(g)
    counts = [current.class_count]
    rounds = 0
    while True:
        refined = wl2_step(current)
        if refined.class_count == current.class_count:
            break
        current = refined
        counts.append(current.class_count)
        rounds += 1
    return RefinementTrace(rounds=rounds, class_counts=tuple(counts), final=current)


def is_cayley_partition(c: PairColoring, spec: GroupSpec) -> bool:
    """Check translation invariance, the diagonal forming a class, and
    closure of the class set under transposition."""
    n = spec.order
    if c.n != n:
        raise ValueError(f"pair coloring on {c.n} vertices does not fit {spec}")
    cols = c.colors
    diag = cols[0]
    for g in range(n):
        if cols[g * n + g] != diag:
            return False
    for i in range(n):
        for j in range(n):
            if i != j and cols[i * n + j] == diag:
                return False
    # translations are generated by the per-factor unit shifts
    generators = []
    for k, modulus in enumerate(spec.moduli):
        if modulus > 1:
            residues = [0] * len(spec.moduli)
            residues[k] = 1
            generators.append(spec.index(residues))
    for t in generators:
        for g1 in range(n):
            tg1 = spec.add(g1, t)
            for g2 in range(n):
                if cols[g1 * n + g2] != cols[tg1 * n + spec.add(g2, t)]:
                    return False
    transpose_of: dict[int, int] = {}
    for i in range(n):
        for j in range(n):
            color = cols[i * n + j]
            flipped = cols[j * n + i]
            if transpose_of.setdefault(color, flipped) != flipped:
                return False
    return True


def induced_smodule(c: PairColoring, spec: GroupSpec) -> OrderedPartition:
    """Partition of the group read off the identity row of a Cayley pair coloring."""
    if not is_cayley_partition(c, spec):
        raise ValueError("pair coloring is not a Cayley partition")
    n = spec.order
    return OrderedPartition.from_labels(spec, c.colors[0:n])


def pair_coloring_from_smodule(partition: OrderedPartition) -> PairColoring:
    """Rebuild the pair coloring whose identity row realizes the partition:
    the color of (g1, g2) is the class of g2 - g1."""
    spec = partition.spec
    n = spec.order
    member = partition.membership
    cols = []
    for g1 in range(n):
        neg_g1 = spec.neg(g1)
        for g2 in range(n):
            cols.append(member[spec.add(g2, neg_g1)])
    return PairColoring(n, tuple(cols))


def initial_cayley_smodule(spec: GroupSpec, con: Iterable[int]) -> OrderedPartition:
    """Group partition matching the structural pair coloring of Cay(G, con):
    identity, bidirectional, forward-only, backward-only, and non-neighbor
    classes, with unrealized classes dropped."""
    con_set = set(con)
    if spec.identity in con_set:
        raise ValueError("identity element not allowed in a connection set")
    neg = {spec.neg(s) for s in con_set}
    labels = []
    for g in range(spec.order):
        if g == spec.identity:
            labels.append(0)
        elif g in con_set and g in neg:
            labels.append(4)
        elif g in con_set:
            labels.append(2)
        elif g in neg:
            labels.append(3)
        else:
            labels.append(1)
    return OrderedPartition.from_labels(spec, labels)


# ---------------------------------------------------------------------------
# vertex colorings and color refinement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexColoring:
    """Vertex color vector with canonical ids ``0..k-1``, every id used."""

    n: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.colors) != self.n:
            raise ValueError("vertex coloring needs one color per vertex")
        used = set(self.colors)
        if used != set(range(len(used))):
            raise ValueError("vertex color ids must be 0..k-1 with every id used")

    @property
    def class_count(self) -> int:
        return max(self.colors) + 1

    def is_discrete(self) -> bool:
        return self.class_count == self.n

    def classes(self) -> tuple[tuple[int, ...], ...]:
        """Vertex classes in canonical order (by minimum vertex)."""
        buckets: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            buckets.setdefault(c, []).append(v)
        return tuple(sorted(tuple(c) for c in buckets.values()))


def uniform_coloring(n: int) -> VertexColoring:
    return VertexColoring(n, (0,) * n)


def coloring_from_partition(partition: OrderedPartition) -> VertexColoring:
    return VertexColoring(partition.spec.order, partition.membership)


def partition_from_coloring(c: VertexColoring, spec: GroupSpec) -> OrderedPartition:
    if c.n != spec.order:
        raise ValueError(f"coloring on {c.n} vertices does not fit {spec}")
    return OrderedPartition.from_labels(spec, c.colors)


def _cr_round_lists(in_neighbors: Sequence[Sequence[int]], colors: Sequence[int]) -> list[int]:
    """One naive refinement round; new ids by sorted-signature rank.

    Sorted-rank assignment keeps the ids independent of the vertex labeling,
    which the canonical-labeling pipeline relies on.
    """
    sigs = [
        (colors[v], tuple(sorted(colors[u] for u in in_neighbors[v])))
        for v in range(len(colors))
    ]
    ids = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return [ids[s] for s in sigs]


def cr_step(g: Graph, c: VertexColoring) -> VertexColoring:
    """One color-refinement round: each vertex is recolored by its old color
    plus the multiset of in-neighbor colors."""
    dg = as_digraph(g)
    if dg.n != c.n:
        raise ValueError("coloring does not match graph size")
    return VertexColoring(c.n, tuple(_cr_round_lists(dg.in_neighbors, c.colors)))


def _cr_stabilize_digraph(dg: DiGraph, c: VertexColoring) -> RefinementTrace:
    colors = list(c.colors)
    count = len(set(colors))
    counts = [count]
    rounds = 0
    in_neighbors = dg.in_neighbors
    while True:
        new = _cr_round_lists(in_neighbors, colors)
        new_count = max(new) + 1
        if new_count == count:
            break
        colors = new
        count = new_count
        counts.append(count)
        rounds += 1
    return RefinementTrace(
        rounds=rounds,
        class_counts=tuple(counts),
        final=VertexColoring(dg.n, tuple(colors)),
    )


def _cr_stabilize_cayley(cg: CayleyGraph, c: VertexColoring) -> RefinementTrace:
    """Vectorized stabilization: the in-neighbor color rows of a Cayley graph
    are cyclic rolls of the color grid, one per connection element."""
    spec = cg.spec
    if c.n != spec.order:
        raise ValueError("coloring does not match graph size")
    if not cg.con:
        return RefinementTrace(rounds=0, class_counts=(c.class_count,), final=c)
    shape = spec.moduli
    axes = tuple(range(len(shape)))
    shifts = [spec.element(s) for s in cg.con]
    colors = np.asarray(c.colors, dtype=np.int64)
    count = int(colors.max()) + 1
    counts = [count]
    rounds = 0
    while True:
        grid = colors.reshape(shape)
        rows = np.stack([np.roll(grid, shift, axis=axes).ravel() for shift in shifts])
        rows.sort(axis=0)
        sig = np.concatenate([colors[None, :], rows], axis=0).T
        _, inverse = np.unique(sig, axis=0, return_inverse=True)
        inverse = inverse.ravel()  # shape differs across numpy versions
        new_count = int(inverse.max()) + 1
        if new_count == count:
            break
        colors = inverse.astype(np.int64)
        count = new_count
        counts.append(count)
        rounds += 1
    return RefinementTrace(
        rounds=rounds,
        class_counts=tuple(counts),
        final=VertexColoring(spec.order, tuple(int(x) for x in colors)),
    )


def cr_stabilize(g: Graph, c: VertexColoring) -> RefinementTrace:
    """Iterate color refinement to the stable coloring.

    Cayley graph descriptors take a vectorized signature-bucket path; plain
    digraphs run the naive per-round loop, which doubles as the oracle.
    """
    if isinstance(g, CayleyGraph):
        return _cr_stabilize_cayley(g, c)
    return _cr_stabilize_digraph(g, c)


# ---------------------------------------------------------------------------
# graph input formats
# ---------------------------------------------------------------------------

def parse_cayley_graph(text: str) -> CayleyGraph:
    """Parse ``"Z9:1,3,6,8"`` or ``"Z4xZ4:(1,0),(3,0),..."`` into a Cayley graph.

    Residues must be canonical (in ``[0, n_i)``); the part before ``:`` is a
    group spec string.  Errors carry the offending input position.
    """
    colon = text.find(":")
    if colon < 0:
        raise GraphFormatError("expected ':' between group and connection set", len(text))
    try:
        spec = parse_group_spec(text[:colon])
    except ValueError:
        raise GraphFormatError(f"malformed group spec {text[:colon]!r}", 0) from None
    body = text[colon + 1 :]
    offset = colon + 1
    con: list[int] = []
    if body.strip():
        if len(spec.moduli) == 1:
            for chunk, pos in _split_commas(body, offset):
                value = _parse_int(chunk, pos)
                if not 0 <= value < spec.order:
                    raise GraphFormatError(f"residue {value} out of range", pos)
                con.append(value)
        else:
            for residues, pos in _split_tuples(body, offset):
                if len(residues) != len(spec.moduli):
                    raise GraphFormatError(
                        f"expected {len(spec.moduli)} residues per element", pos
                    )
                for r, modulus in zip(residues, spec.moduli):
                    if not 0 <= r < modulus:
                        raise GraphFormatError(f"residue {r} out of range", pos)
                con.append(spec.index(residues))
    if spec.identity in con:
        raise GraphFormatError("identity element not allowed in connection set", colon + 1)
    return CayleyGraph(spec, tuple(sorted(set(con))))


def _split_commas(body: str, offset: int):
    pos = 0
    for chunk in body.split(","):
        yield chunk.strip(), offset + pos
        pos += len(chunk) + 1


def _parse_int(chunk: str, pos: int) -> int:
    try:
        return int(chunk)
    except ValueError:
        raise GraphFormatError(f"expected integer, got {chunk!r}", pos) from None


def _split_tuples(body: str, offset: int):
    i = 0
    length = len(body)
    while i < length:
        while i < length and body[i] in " ,":
            i += 1
        if i >= length:
            break
        if body[i] != "(":
            raise GraphFormatError("expected '(' starting a residue tuple", offset + i)
        close = body.find(")", i)
        if close < 0:
            raise GraphFormatError("unclosed residue tuple", offset + i)
        inner = body[i + 1 : close]
        residues = tuple(
            _parse_int(chunk, pos) for chunk, pos in _split_commas(inner, offset + i + 1)
        )
        yield residues, offset + i
        i = close + 1


def parse_adjacency(text: str) -> DiGraph:
    """Parse the plain edge-list format: a header line with the vertex count,
    then one ``u v`` pair per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty adjacency input", 0)
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphFormatError(f"expected vertex count, got {lines[0]!r}", 0) from None
    edges = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v' on line {lineno}", lineno)
        edges.append((int(parts[0]), int(parts[1])))
    return DiGraph.from_edges(n, edges)
