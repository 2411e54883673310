"""Graphviz DOT rendering of graphs, trees, placements, and forcing traces.

Star edges are solid, unknown edges dashed, dropped chords dotted. Sensor
nodes render as red hexagons pointing at their measured state. Symmetric
graphs render undirected; anything else falls back to a digraph.
"""

from __future__ import annotations

from .forcing import ObservabilityGraph
from .netgraph import StateGraph
from .placement import SensorPlacement
from .spanning import SpanningTree, removed_chords


def _quote(name) -> str:
    text = str(name).replace('"', '\\"')
    return f'"{text}"'


def _node_label(i: int, labels) -> str:
    return labels[i] if labels is not None else str(i)


def _node_decls(g: StateGraph, labels, flow_count) -> list:
    lines = []
    for v in range(g.n):
        attrs = []
        if flow_count is not None:
            attrs.append("shape=box" if v < flow_count else "shape=circle")
        label = _node_label(v, labels)
        if label != str(v):
            attrs.append(f"label={_quote(label)}")
        decl = f"  {_quote(v)}"
        if attrs:
            decl += " [" + ", ".join(attrs) + "]"
        lines.append(decl + ";")
    return lines


def _edge_lines(g: StateGraph, connector: str, style_overrides=None) -> list:
    """One line per undirected pair (or per arc when directed)."""
    style_overrides = style_overrides or {}
    lines = []
    emitted = set()
    for kind, edges, default_style in (("star", g.star_edges, "solid"), ("unknown", g.unknown_edges, "dashed")):
        for (i, j) in sorted(edges):
            if connector == "--":
                key = (min(i, j), max(i, j), kind)
                if key in emitted:
                    continue
                emitted.add(key)
                pair = (min(i, j), max(i, j))
            else:
                pair = (i, j)
            style = style_overrides.get((min(i, j), max(i, j)), default_style)
            lines.append(f"  {_quote(pair[0])} {connector} {_quote(pair[1])} [style={style}];")
    return lines


def graph_dot(g: StateGraph, labels=None, flow_count=None, name="network") -> str:
    """Render a state graph; solid star edges, dashed unknown edges."""
    undirected = g.is_symmetric()
    keyword, connector = ("graph", "--") if undirected else ("digraph", "->")
    lines = [f"{keyword} {_quote(name)} {{"]
    lines += _node_decls(g, labels, flow_count)
    lines += _edge_lines(g, connector)
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_dot(g: StateGraph, t: SpanningTree, labels=None, flow_count=None, name="spanning_tree") -> str:
    """Render the graph with dropped chords dotted, kept tree edges solid."""
    chords = removed_chords(g, t)
    overrides = {pair: "dotted" for pair in chords}
    undirected = g.is_symmetric()
    keyword, connector = ("graph", "--") if undirected else ("digraph", "->")
    lines = [f"{keyword} {_quote(name)} {{"]
    lines += _node_decls(g, labels, flow_count)
    lines += _edge_lines(g, connector, overrides)
    lines.append("}")
    return "\n".join(lines) + "\n"


def placement_dot(
    g: StateGraph,
    placement: SensorPlacement,
    labels=None,
    flow_count=None,
    name="placement",
) -> str:
    """Render the graph plus one red hexagon sensor per measured state."""
    undirected = g.is_symmetric()
    keyword, connector = ("graph", "--") if undirected else ("digraph", "->")
    lines = [f"{keyword} {_quote(name)} {{"]
    lines += _node_decls(g, labels, flow_count)
    for k, state in enumerate(placement.measured):
        sensor = f"s{k}"
        lines.append(f"  {_quote(sensor)} [shape=hexagon, color=red, label={_quote(sensor)}];")
        lines.append(f"  {_quote(sensor)} {connector} {_quote(state)} [style=solid, color=red];")
    lines += _edge_lines(g, connector)
    lines.append("}")
    return "\n".join(lines) + "\n"


def trace_dot(g: ObservabilityGraph, trace, labels=None, name="forcing_trace") -> str:
    """Render an observability graph with forcing step numbers on the nodes.

    Forced nodes show the 1-based step at which they turned black and the
    forcing edges are drawn bold, so the closure can be replayed visually.
    """
    step_of = {u: k + 1 for k, (_, u) in enumerate(trace)}
    forcing_edges = {(v, u) for (v, u) in trace}
    lines = [f"digraph {_quote(name)} {{"]
    for v in range(g.n_states):
        label = _node_label(v, labels)
        step = f"#{step_of[v]}" if v in step_of else "white"
        fill = ", style=filled, fillcolor=gray80" if v in step_of else ""
        lines.append(f"  {_quote(v)} [label={_quote(f'{label}|{step}')}{fill}];")
    for k in range(g.n_sensors):
        v = g.n_states + k
        lines.append(f"  {_quote(v)} [shape=hexagon, color=red, label={_quote(f's{k}')}];")
    for v in range(g.n_nodes):
        for kind, targets in (("star", g.star_out[v]), ("unknown", g.unknown_out[v])):
            style = "solid" if kind == "star" else "dashed"
            for u in targets:
                extra = ", penwidth=2.5, color=black" if (v, u) in forcing_edges else ""
                lines.append(f"  {_quote(v)} -> {_quote(u)} [style={style}{extra}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
