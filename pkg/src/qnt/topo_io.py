"""Line-oriented topology files and a JSON-compatible export.

Text schema (one declaration per line, ``#`` comments and blank lines
allowed):

    node <id> monitor|internal
    edge <id> <nodeA> <nodeB> <q_x> <q_y> <q_z>

Node lines must precede the edges that reference them.  Channel parameters
are validated on load (range and complete positivity), and every parse
error reports the offending line number.
"""

from __future__ import annotations

import json
from importlib import resources

from .network import Edge, Topology, natural_key
from .pauli import ChannelValidationError, PauliChannel


class TopologyParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def parse_topology(text: str) -> Topology:
    """Parse the text schema into a validated :class:`Topology`."""
    nodes: dict[str, str] = {}
    edges: list[Edge] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "node":
            if len(fields) != 3:
                raise TopologyParseError(line_no, "expected: node <id> monitor|internal")
            _, node_id, role = fields
            if role not in ("monitor", "internal"):
                raise TopologyParseError(line_no, f"unknown node kind {role!r}")
            if node_id in nodes:
                raise TopologyParseError(line_no, f"duplicate node id {node_id!r}")
            nodes[node_id] = role
        elif kind == "edge":
            if len(fields) != 7:
                raise TopologyParseError(
                    line_no, "expected: edge <id> <nodeA> <nodeB> <q_x> <q_y> <q_z>"
                )
            _, edge_id, node_a, node_b, *qs = fields
            if any(e.edge_id == edge_id for e in edges):
                raise TopologyParseError(line_no, f"duplicate edge id {edge_id!r}")
            for endpoint in (node_a, node_b):
                if endpoint not in nodes:
                    raise TopologyParseError(line_no, f"unknown node reference {endpoint!r}")
            try:
                q_x, q_y, q_z = (float(v) for v in qs)
            except ValueError:
                raise TopologyParseError(line_no, f"non-numeric channel parameters {qs!r}") from None
            try:
                channel = PauliChannel(q_x, q_y, q_z)
            except ChannelValidationError as exc:
                raise TopologyParseError(line_no, f"invalid channel: {exc}") from None
            edges.append(Edge(edge_id, node_a, node_b, channel))
        else:
            raise TopologyParseError(line_no, f"unknown declaration {kind!r}")
    if not nodes:
        raise TopologyParseError(0, "file declares no nodes")
    return Topology(nodes, edges)


def format_topology(topology: Topology) -> str:
    """Render a topology back into the text schema (sorted, diff-friendly)."""
    lines = []
    for node in sorted(topology.nodes, key=natural_key):
        lines.append(f"node {node} {topology.nodes[node]}")
    for edge_id in topology.sorted_edge_ids():
        edge = topology.edges[edge_id]
        q = edge.channel
        lines.append(
            f"edge {edge_id} {edge.node_a} {edge.node_b} {q.q_x:.17g} {q.q_y:.17g} {q.q_z:.17g}"
        )
    return "\n".join(lines) + "\n"


def topology_to_json(topology: Topology) -> str:
    payload = {
        "nodes": [
            {"id": node, "kind": topology.nodes[node]}
            for node in sorted(topology.nodes, key=natural_key)
        ],
        "edges": [
            {
                "id": edge_id,
                "endpoints": [topology.edges[edge_id].node_a, topology.edges[edge_id].node_b],
                "q": list(topology.edges[edge_id].channel.q),
            }
            for edge_id in topology.sorted_edge_ids()
        ],
    }
    return json.dumps(payload, indent=2)


def topology_from_json(text: str) -> Topology:
    payload = json.loads(text)
    nodes = {item["id"]: item["kind"] for item in payload["nodes"]}
    edges = [
        Edge(item["id"], item["endpoints"][0], item["endpoints"][1], PauliChannel(*item["q"]))
        for item in payload["edges"]
    ]
    return Topology(nodes, edges)


def load_topology(path: str) -> Topology:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_topology(handle.read())


def bundled_topology(name: str) -> Topology:
    """Load one of the packaged example topologies (e.g. ``fig1``, ``star3``)."""
    text = resources.files("qnt.data").joinpath(f"{name}.topo").read_text(encoding="utf-8")
    return parse_topology(text)
