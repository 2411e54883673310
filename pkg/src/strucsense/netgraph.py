"""Graph view of a square pattern matrix.

Nodes are state indices; a star edge (i, j) means the (possibly transposed)
pattern holds a star at that position, an unknown edge means it holds an
unknown. Node classification, star-edge connectivity, and independent-cycle
counting all live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pattern import PatternMatrix


def _adjacency(n: int, edges: frozenset) -> tuple:
    out = [[] for _ in range(n)]
    for (i, j) in edges:
        out[i].append(j)
    return tuple(tuple(sorted(nbrs)) for nbrs in out)


@dataclass(frozen=True)
class StateGraph:
    """Sparse bidirected graph with two edge kinds, immutable after build."""

    n: int
    star_edges: frozenset = field(default_factory=frozenset)
    unknown_edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        star = frozenset(tuple(e) for e in self.star_edges)
        unknown = frozenset(tuple(e) for e in self.unknown_edges)
        for (i, j) in star | unknown:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) outside node range 0..{self.n - 1}")
        if star & unknown:
            raise ValueError("an edge cannot be both star and unknown")
        object.__setattr__(self, "star_edges", star)
        object.__setattr__(self, "unknown_edges", unknown)
        object.__setattr__(self, "star_adj", _adjacency(self.n, star))
        object.__setattr__(self, "unknown_adj", _adjacency(self.n, unknown))

    def neighbors(self, i: int) -> list:
        """Distinct neighbors of node i over both edge kinds, self excluded."""
        nbrs = set(self.star_adj[i]) | set(self.unknown_adj[i])
        # in-neighbors too, so asymmetric inputs are still classified sensibly
        nbrs.update(self._in_adj[i])
        nbrs.discard(i)
        return sorted(nbrs)

    @property
    def _in_adj(self):
        cached = getattr(self, "_in_adj_cache", None)
        if cached is None:
            ins = [[] for _ in range(self.n)]
            for (i, j) in self.star_edges | self.unknown_edges:
                ins[j].append(i)
            cached = tuple(tuple(sorted(x)) for x in ins)
            object.__setattr__(self, "_in_adj_cache", cached)
        return cached

    def undirected_star_pairs(self) -> set:
        """Unordered star edges {i, j} with i != j (self-loops dropped)."""
        return {(min(i, j), max(i, j)) for (i, j) in self.star_edges if i != j}

    def is_symmetric(self) -> bool:
        return all((j, i) in self.star_edges for (i, j) in self.star_edges) and all(
            (j, i) in self.unknown_edges for (i, j) in self.unknown_edges
        )


@dataclass(frozen=True)
class NodeClassification:
    """Degree-based node roles; degrees ignore self-loops.

    Extreme nodes have exactly one neighbor, intersection nodes at least
    three. Isolated (degree-0) nodes are listed separately: they are not
    extreme, but the cyclic placement rule still selects them.
    """

    extreme: tuple
    intersection: tuple
    isolated: tuple

    @property
    def n_e(self) -> int:
        return len(self.extreme)

    @property
    def n_i(self) -> int:
        return len(self.intersection)


@dataclass(frozen=True)
class PreconditionReport:
    """Structural prerequisites for guaranteed placement, with witnesses."""

    symmetric: bool
    fully_connected: bool
    has_extreme: bool
    asymmetric_at: tuple | None
    components: tuple
    extreme_nodes: tuple

    @property
    def all_ok(self) -> bool:
        return self.symmetric and self.fully_connected and self.has_extreme

    def as_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "fully_connected": self.fully_connected,
            "has_extreme": self.has_extreme,
            "asymmetric_at": list(self.asymmetric_at) if self.asymmetric_at else None,
            "components": [list(c) for c in self.components],
            "extreme_nodes": list(self.extreme_nodes),
        }


def from_pattern(a: PatternMatrix, transpose: bool = False) -> StateGraph:
    """Graph of a square pattern; with ``transpose`` edges follow entry (j, i)."""
    if not a.is_square:
        raise ValueError(f"square matrix required, got {a.rows}x{a.cols}")
    if transpose:
        star = frozenset((j, i) for (i, j) in a.star)
        unknown = frozenset((j, i) for (i, j) in a.unknown)
    else:
        star, unknown = a.star, a.unknown
    return StateGraph(a.rows, star, unknown)


def classify_nodes(g: StateGraph) -> NodeClassification:
    extreme, intersection, isolated = [], [], []
    for v in range(g.n):
        d = len(g.neighbors(v))
        if d == 1:
            extreme.append(v)
        elif d >= 3:
            intersection.append(v)
        elif d == 0:
            isolated.append(v)
    return NodeClassification(tuple(extreme), tuple(intersection), tuple(isolated))


def connected_components_star(g: StateGraph) -> list:
    """Partition of all nodes by reachability over star edges (both directions)."""
    adj = [set() for _ in range(g.n)]
    for (i, j) in g.star_edges:
        if i != j:
            adj[i].add(j)
            adj[j].add(i)
    seen = [False] * g.n
    components = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp, stack = [root], [root]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    stack.append(u)
        components.append(sorted(comp))
    return components


def cycle_count(g: StateGraph) -> int:
    """Independent cycles over star edges: edges - nodes + components.

    Self-loops are excluded. This equals the number of edges a spanning
    forest removes.
    """
    m = len(g.undirected_star_pairs())
    return m - g.n + len(connected_components_star(g))


def check_preconditions(a: PatternMatrix) -> PreconditionReport:
    """Report whether a square pattern meets the placement prerequisites.

    Checks symmetry of the pattern, full connectivity through star edges,
    and the presence of at least one extreme node. Report-only; callers
    decide what to do with violations.
    """
    if not a.is_square:
        raise ValueError(f"square matrix required, got {a.rows}x{a.cols}")
    asymmetric_at = None
    for (i, j) in sorted(a.star | a.unknown):
        if a.entry(i, j) is not a.entry(j, i):
            asymmetric_at = (i, j)
            break
    g = from_pattern(a, transpose=True)
    components = connected_components_star(g)
    classification = classify_nodes(g)
    return PreconditionReport(
        symmetric=asymmetric_at is None,
        fully_connected=len(components) <= 1,
        has_extreme=classification.n_e >= 1,
        asymmetric_at=asymmetric_at,
        components=tuple(tuple(c) for c in components),
        extreme_nodes=tuple(classification.extreme),
    )
