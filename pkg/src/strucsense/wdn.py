"""Water-network ingestion and the structured state pattern it induces.

Reads the topology subset of the EPANET INP dialect (junctions, reservoirs,
tanks, pipes, pumps, valves, optional coordinates), builds the node-by-link
incidence matrix, and assembles the block pattern whose states are one flow
per link followed by one head per hydraulic node: star self-loops on flows,
unknown self-loops on heads, and star couplings wherever a link meets a
node. Hydraulic parameters are never parsed; only topology shapes the
pattern.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .netgraph import StateGraph
from .pattern import PatternMatrix

_NODE_SECTIONS = {"JUNCTIONS": "junction", "RESERVOIRS": "reservoir", "TANKS": "tank"}
_LINK_SECTIONS = {"PIPES": "pipe", "PUMPS": "pump", "VALVES": "valve"}


class ParseError(ValueError):
    """Input file rejected; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        suffix = f" (line {line})" if line is not None else ""
        super().__init__(message + suffix)


@dataclass(frozen=True)
class HydraulicNode:
    label: str
    kind: str  # junction | reservoir | tank


@dataclass(frozen=True)
class Link:
    label: str
    kind: str  # pipe | pump | valve
    from_label: str
    to_label: str


@dataclass(frozen=True)
class WdnNetwork:
    """Topological view of a water network: labeled nodes and links, in file order."""

    nodes: tuple
    links: tuple
    coordinates: dict = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_links(self) -> int:
        return len(self.links)

    def node_index(self, label: str) -> int:
        return self._node_lookup[label]

    @property
    def _node_lookup(self) -> dict:
        cached = getattr(self, "_node_lookup_cache", None)
        if cached is None:
            cached = {node.label: i for i, node in enumerate(self.nodes)}
            object.__setattr__(self, "_node_lookup_cache", cached)
        return cached


def parse_inp(text: str) -> WdnNetwork:
    """Parse the topology sections of an EPANET INP file.

    Node and link order follow the file. ';' starts a comment, blank lines
    are skipped, unknown sections are ignored. At least one link section
    (pipes, pumps, or valves) must be present; endpoints must resolve to
    declared nodes; labels must be unique within nodes and within links.
    """
    nodes, links = [], []
    node_lines, link_lines = {}, {}
    coordinates = {}
    seen_link_section = False
    section = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            name = line.strip("[]").strip().upper()
            section = name
            if name in _LINK_SECTIONS:
                seen_link_section = True
            continue
        tokens = line.split()
        if section in _NODE_SECTIONS:
            label = tokens[0]
            if label in node_lines:
                raise ParseError(f"duplicate node label {label!r}", lineno)
            node_lines[label] = lineno
            nodes.append(HydraulicNode(label, _NODE_SECTIONS[section]))
        elif section in _LINK_SECTIONS:
            if len(tokens) < 3:
                raise ParseError(f"link line needs id and two endpoints: {line!r}", lineno)
            label, from_label, to_label = tokens[0], tokens[1], tokens[2]
            if label in link_lines:
                raise ParseError(f"duplicate link label {label!r}", lineno)
            link_lines[label] = lineno
            links.append(Link(label, _LINK_SECTIONS[section], from_label, to_label))
        elif section == "COORDINATES":
            if len(tokens) >= 3:
                try:
                    coordinates[tokens[0]] = (float(tokens[1]), float(tokens[2]))
                except ValueError:
                    pass  # layout hints only; ignore malformed ones

    if not seen_link_section:
        raise ParseError("no link section ([PIPES], [PUMPS] or [VALVES]) found")
    declared = {node.label for node in nodes}
    for link in links:
        for endpoint in (link.from_label, link.to_label):
            if endpoint not in declared:
                raise ParseError(
                    f"link {link.label!r} references undeclared node {endpoint!r}",
                    link_lines[link.label],
                )
    return WdnNetwork(tuple(nodes), tuple(links), coordinates)


def to_inp_text(net: WdnNetwork) -> str:
    """Write a minimal INP round-trippable by :func:`parse_inp`."""
    out = ["[TITLE]", "exported network", ""]
    filler = {
        "junction": "0",
        "reservoir": "0",
        "tank": "0 10 0 20 50 0",
        "pipe": "1000 300 100",
        "pump": "HEAD 1",
        "valve": "300 PRV 0",
    }
    for section, kind in (("JUNCTIONS", "junction"), ("RESERVOIRS", "reservoir"), ("TANKS", "tank")):
        rows = [n for n in net.nodes if n.kind == kind]
        if rows:
            out.append(f"[{section}]")
            out.extend(f" {n.label}\t{filler[kind]}" for n in rows)
            out.append("")
    for section, kind in (("PIPES", "pipe"), ("PUMPS", "pump"), ("VALVES", "valve")):
        rows = [l for l in net.links if l.kind == kind]
        if rows:
            out.append(f"[{section}]")
            out.extend(f" {l.label}\t{l.from_label}\t{l.to_label}\t{filler[kind]}" for l in rows)
            out.append("")
    if not any(l.kind in ("pipe", "pump", "valve") for l in net.links):
        out.append("[PIPES]")
        out.append("")
    if net.coordinates:
        out.append("[COORDINATES]")
        out.extend(f" {label}\t{x}\t{y}" for label, (x, y) in sorted(net.coordinates.items()))
        out.append("")
    out.append("[END]")
    return "\n".join(out) + "\n"


def incidence(net: WdnNetwork) -> np.ndarray:
    """Node-by-link incidence: +1 at a link's from-node, -1 at its to-node."""
    mat = np.zeros((net.n_nodes, net.n_links))
    for j, link in enumerate(net.links):
        if link.from_label == link.to_label:
            raise ValueError(f"link {link.label!r} connects node {link.from_label!r} to itself")
        mat[net.node_index(link.from_label), j] = 1.0
        mat[net.node_index(link.to_label), j] = -1.0
    return mat


def incidence_csv(mat: np.ndarray) -> str:
    """Comma-separated rows of an incidence (or any numeric) matrix."""
    return "\n".join(",".join(f"{v:g}" for v in row) for row in np.asarray(mat)) + "\n"


def build_structured_wdn(inc: np.ndarray) -> PatternMatrix:
    """Block pattern of the linearized network: flows first, heads after.

    Flows carry star self-loops (friction), heads carry unknown self-loops
    (local hydraulic effects may or may not be present), and each link
    couples its flow state to both endpoint heads with mirrored stars. The
    result is symmetric by construction.
    """
    inc = np.asarray(inc, dtype=float)
    if inc.ndim != 2:
        raise ValueError("incidence matrix must be two-dimensional")
    n, m = inc.shape
    star = {(k, k) for k in range(m)}
    unknown = {(m + i, m + i) for i in range(n)}
    rows, cols = np.nonzero(inc)
    for i, j in zip(rows.tolist(), cols.tolist()):
        star.add((j, m + i))
        star.add((m + i, j))
    return PatternMatrix(m + n, m + n, frozenset(star), frozenset(unknown), symmetric=True)


def structured_state_labels(net: WdnNetwork) -> list:
    """State labels matching the structured pattern's ordering."""
    return [f"q:{link.label}" for link in net.links] + [f"h:{node.label}" for node in net.nodes]


def parse_edge_list(text: str) -> StateGraph:
    """Build a state graph from JSON ``{"n": N, "star": [[i, j], ...], "unknown": ...}``.

    Pairs are symmetrized automatically, so any symmetric network can feed
    the placement pipeline without going through a water-network file.
    """
    data = json.loads(text)
    n = int(data["n"])
    star, unknown = set(), set()
    for key, bucket in (("star", star), ("unknown", unknown)):
        for pair in data.get(key, []):
            i, j = int(pair[0]), int(pair[1])
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"{key} pair ({i}, {j}) outside 0..{n - 1}")
            bucket.add((i, j))
            bucket.add((j, i))
    return StateGraph(n, frozenset(star), frozenset(unknown))


def to_pattern(g: StateGraph) -> PatternMatrix:
    """Square pattern whose graph is ``g`` (edges become entries one-to-one)."""
    return PatternMatrix(g.n, g.n, g.star_edges, g.unknown_edges, symmetric=g.is_symmetric())
