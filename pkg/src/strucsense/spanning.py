"""Spanning-tree extraction from a cyclic state graph.

Depth-first search over star edges only, self-loops ignored. Tie-breaking is
fixed (lowest-index root per component, neighbors explored in ascending
index order) so identical inputs always yield the identical tree. An
explicit stack keeps the traversal O(n + m) even on large networks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .netgraph import StateGraph


@dataclass(frozen=True)
class SpanningTree:
    """Spanning forest: parent pointers, per-component roots, undirected edges."""

    parent: tuple          # parent index per node, None at roots
    roots: tuple
    tree_edges: frozenset  # undirected pairs stored as (min, max)
    visited: tuple

    @property
    def n(self) -> int:
        return len(self.parent)

    def degrees(self) -> list:
        """Tree degree per node (self-loops never enter a tree)."""
        deg = [0] * self.n
        for (i, j) in self.tree_edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def to_json(self) -> str:
        payload = {
            "parent": [-1 if p is None else p for p in self.parent],
            "roots": sorted(self.roots),
            "edges": sorted([i, j] for (i, j) in self.tree_edges),
        }
        return json.dumps(payload, sort_keys=True)


def spanning_tree_dfs(g: StateGraph) -> SpanningTree:
    """Extract a spanning forest of the star edges, one root per component.

    An edge joins the tree exactly when the search encounters an unvisited
    node, so the output is acyclic and spans every star component.
    Disconnected inputs are allowed and produce a forest.
    """
    undirected = [set() for _ in range(g.n)]
    for (i, j) in g.star_edges:
        if i != j:
            undirected[i].add(j)
            undirected[j].add(i)
    adj = [sorted(nbrs) for nbrs in undirected]

    parent: list = [None] * g.n
    visited = [False] * g.n
    roots = []
    tree_edges = set()

    for root in range(g.n):
        if visited[root]:
            continue
        visited[root] = True
        roots.append(root)
        # stack of (node, next position in its adjacency list)
        stack = [(root, 0)]
        while stack:
            v, pos = stack[-1]
            advanced = False
            nbrs = adj[v]
            while pos < len(nbrs):
                u = nbrs[pos]
                pos += 1
                if not visited[u]:
                    visited[u] = True
                    parent[u] = v
                    tree_edges.add((min(v, u), max(v, u)))
                    stack[-1] = (v, pos)
                    stack.append((u, 0))
                    advanced = True
                    break
            if not advanced:
                stack.pop()

    return SpanningTree(tuple(parent), tuple(roots), frozenset(tree_edges), tuple(visited))


def removed_chords(g: StateGraph, t: SpanningTree) -> set:
    """Star edges of ``g`` (self-loops excluded) that the tree dropped."""
    if t.n != g.n:
        raise ValueError(f"tree over {t.n} nodes does not match graph with {g.n}")
    pairs = g.undirected_star_pairs()
    if not t.tree_edges <= pairs:
        stray = min(t.tree_edges - pairs)
        raise ValueError(f"tree edge {stray} is not a star edge of the graph")
    return pairs - t.tree_edges
