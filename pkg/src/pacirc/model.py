"""Growth model for preferential dynamic attachment circuits.

A circuit of index m starts as a single node 0 and grows one node per
time step. The new node draws m parents with replacement; each draw
favors a node with probability proportional to (outdegree + 1) *as of
that draw*, i.e. earlier draws in the same sample already count.

The state keeps a gap table with one entry per external node: a node of
outdegree s owns s + 1 entries. A uniform pick over gap entries is then
exactly the weighted pick over nodes, and the within-sample dynamic
update is a single append. After n insertions the table has
(m + 1) * n + 1 entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rng import RandomSource

WHITE = "white"
BLUE = "blue"
RED = "red"


def _color_of(outdegree: int) -> str:
    if outdegree == 0:
        return WHITE
    if outdegree == 1:
        return BLUE
    return RED


@dataclass(frozen=True)
class ColorCounts:
    """External-node color census: white/blue/red counts.

    White external nodes hang off outdegree-0 nodes (one each), blue off
    outdegree-1 nodes (two each), red off nodes of outdegree >= 2. The
    node counts of outdegree 0 and 1 are ``white`` and ``blue // 2``.
    """

    white: int
    blue: int
    red: int

    @property
    def total(self) -> int:
        return self.white + self.blue + self.red

    @property
    def outdeg0_nodes(self) -> int:
        return self.white

    @property
    def outdeg1_nodes(self) -> int:
        return self.blue // 2


@dataclass(frozen=True)
class SampleTrace:
    """Record of one insertion: parents in draw order, their colors, and gap totals.

    ``totals[s]`` is the gap-table size seen by draw s, so the draw
    selected ``parents[s]`` with probability (gap count of that node at
    that moment) / ``totals[s]``. Order matters: the same multiset of
    parents in a different order generally has a different probability.
    """

    node: int
    parents: tuple[int, ...]
    colors: tuple[str, ...]
    totals: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "node": self.node,
            "parents": list(self.parents),
            "colors": list(self.colors),
            "totals": list(self.totals),
        }


class CircuitState:
    """A growing circuit: node outdegrees plus the gap table.

    Node labels are dense integers 0..n; nothing is ever deleted. Edges
    are not stored (degrees carry every statistic of interest); traces
    returned by :func:`insert_node` imply them when needed.
    """

    __slots__ = ("m", "n", "outdeg", "gap_owners")

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"circuit index m must be >= 1, got {m}")
        self.m = m
        self.n = 0
        self.outdeg: list[int] = [0]
        self.gap_owners: list[int] = [0]

    def external_total(self) -> int:
        return len(self.gap_owners)

    def check_invariants(self) -> None:
        assert len(self.outdeg) == self.n + 1
        assert len(self.gap_owners) == (self.m + 1) * self.n + 1
        assert sum(self.outdeg) == self.m * self.n
        counts = [0] * (self.n + 1)
        for owner in self.gap_owners:
            counts[owner] += 1
        for v, d in enumerate(self.outdeg):
            assert counts[v] == d + 1, f"node {v}: {counts[v]} gaps, outdeg {d}"

    def to_json_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "outdeg": list(self.outdeg)}


def new_circuit(m: int) -> CircuitState:
    """Circuit at time 0: the lone originator node 0 with one white external node."""
    return CircuitState(m)


def insert_node(state: CircuitState, rng: RandomSource) -> SampleTrace:
    """Insert the next node, drawing its m parents dynamically.

    Each draw picks a uniform gap entry and immediately appends one entry
    owned by the selected parent, so later draws in the sample see the
    update. After the m-th draw the new node joins with outdegree 0 and
    its own gap entry.
    """
    m = state.m
    gaps = state.gap_owners
    outdeg = state.outdeg
    parents = []
    colors = []
    totals = []
    for _ in range(m):
        t = len(gaps)
        owner = gaps[rng.below(t)]
        parents.append(owner)
        colors.append(_color_of(outdeg[owner]))
        totals.append(t)
        outdeg[owner] += 1
        gaps.append(owner)
    node = state.n + 1
    outdeg.append(0)
    gaps.append(node)
    state.n = node
    return SampleTrace(node=node, parents=tuple(parents), colors=tuple(colors), totals=tuple(totals))


def color_counts(state: CircuitState) -> ColorCounts:
    """Census of external-node colors for the current circuit."""
    w = 0
    b = 0
    for d in state.outdeg:
        if d == 0:
            w += 1
        elif d == 1:
            b += 2
    return ColorCounts(white=w, blue=b, red=state.external_total() - w - b)


def degree_of(state: CircuitState, j: int) -> int:
    """Total degree of node j: outdegree plus indegree (m, except 0 for the originator)."""
    if not 0 <= j <= state.n:
        raise ValueError(f"node {j} not in circuit of age {state.n}")
    return state.outdeg[j] + (state.m if j > 0 else 0)
