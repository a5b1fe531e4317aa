"""Network graph model: monitors, Pauli-channel edges, and etching bookkeeping.

A topology is an undirected multigraph whose nodes are either ``monitor``
(peripheral, degree exactly 1, capable of state preparation/measurement) or
``internal`` (gate operations only).  Tomography identifies edges from the
periphery inward; :class:`EtchingState` tracks which edges are identified,
which internal nodes have been promoted to *effective monitors*, and through
which edge each promotion happened (so every effective monitor has a chain
of identified edges back to a real monitor).

Degree-2 internal nodes make their incident channels individually
unidentifiable; :func:`simplify_degree2` contracts each maximal chain of
them into one equivalent channel whose parameters are the componentwise
product of the members'.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .pauli import PauliChannel, compose_channels

MONITOR = "monitor"
INTERNAL = "internal"


class TopologyError(ValueError):
    """Structurally invalid topology or reference to a missing node/edge."""


class BranchSelectionError(RuntimeError):
    """No valid pair of disjoint monitor-reaching branches exists."""


def natural_key(identifier: str) -> tuple:
    """Sort key treating digit runs numerically, so P2 < P11."""
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", identifier))


@dataclass(frozen=True)
class Edge:
    edge_id: str
    node_a: str
    node_b: str
    channel: PauliChannel

    def other(self, node: str) -> str:
        if node == self.node_a:
            return self.node_b
        if node == self.node_b:
            return self.node_a
        raise TopologyError(f"node {node!r} is not an endpoint of edge {self.edge_id!r}")

    @property
    def endpoints(self) -> frozenset:
        return frozenset((self.node_a, self.node_b))


class Topology:
    """Immutable node/edge container with adjacency lookups."""

    def __init__(self, nodes: Mapping[str, str], edges: Iterable[Edge]):
        node_map = dict(nodes)
        for node, kind in node_map.items():
            if kind not in (MONITOR, INTERNAL):
                raise TopologyError(f"node {node!r} has unknown kind {kind!r}")
        edge_map: dict[str, Edge] = {}
        adjacency: dict[str, list[str]] = {node: [] for node in node_map}
        for edge in edges:
            if edge.edge_id in edge_map:
                raise TopologyError(f"duplicate edge id {edge.edge_id!r}")
            for endpoint in (edge.node_a, edge.node_b):
                if endpoint not in node_map:
                    raise TopologyError(
                        f"edge {edge.edge_id!r} references unknown node {endpoint!r}"
                    )
            edge_map[edge.edge_id] = edge
            adjacency[edge.node_a].append(edge.edge_id)
            if edge.node_b != edge.node_a:
                adjacency[edge.node_b].append(edge.edge_id)
        for node in adjacency:
            adjacency[node].sort(key=natural_key)
        self._nodes = MappingProxyType(node_map)
        self._edges = MappingProxyType(edge_map)
        self._adjacency = MappingProxyType({n: tuple(e) for n, e in adjacency.items()})

    @property
    def nodes(self) -> Mapping[str, str]:
        return self._nodes

    @property
    def edges(self) -> Mapping[str, Edge]:
        return self._edges

    def is_monitor(self, node: str) -> bool:
        return self._nodes[node] == MONITOR

    @property
    def monitors(self) -> frozenset:
        return frozenset(n for n, kind in self._nodes.items() if kind == MONITOR)

    def incident_edges(self, node: str) -> tuple[str, ...]:
        return self._adjacency[node]

    def degree(self, node: str) -> int:
        # A self-loop contributes 2 to the degree of its node.
        return sum(2 if self._edges[e].node_a == self._edges[e].node_b else 1
                   for e in self._adjacency[node])

    def sorted_edge_ids(self) -> list[str]:
        return sorted(self._edges, key=natural_key)


@dataclass(frozen=True)
class TopologyViolation:
    rule: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.subject}: {self.detail}"


def _connected_components(topology: Topology) -> list[set]:
    seen: set[str] = set()
    components = []
    for start in topology.nodes:
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            node = stack.pop()
            if node in comp:
                continue
            comp.add(node)
            for edge_id in topology.incident_edges(node):
                stack.append(topology.edges[edge_id].other(node))
        seen |= comp
        components.append(comp)
    return components


def validate(topology: Topology, require_simplified: bool = False) -> list[TopologyViolation]:
    """Structural checks; an empty list means the topology is valid.

    ``require_simplified`` additionally demands every internal node have
    degree >= 3 (the post-condition of :func:`simplify_degree2`).
    """
    violations = []
    if not topology.nodes:
        violations.append(TopologyViolation("empty", "-", "topology has no nodes"))
        return violations
    components = _connected_components(topology)
    if len(components) > 1:
        for comp in components[1:]:
            sample = sorted(comp, key=natural_key)[0]
            violations.append(
                TopologyViolation("connectivity", sample, "node is not connected to the rest")
            )
    for edge_id, edge in topology.edges.items():
        if edge.node_a == edge.node_b:
            violations.append(
                TopologyViolation("self-loop", edge_id, "channel starts and ends at one node")
            )
    for node, kind in topology.nodes.items():
        degree = topology.degree(node)
        if kind == MONITOR and degree != 1:
            violations.append(
                TopologyViolation("monitor-degree", node, f"monitor has degree {degree}, expected 1")
            )
        if kind == INTERNAL and degree == 0:
            violations.append(TopologyViolation("isolated", node, "internal node has no edges"))
        if require_simplified and kind == INTERNAL and 0 < degree < 3:
            violations.append(
                TopologyViolation(
                    "internal-degree", node, f"internal node has degree {degree} after simplification"
                )
            )
    if not topology.monitors:
        violations.append(TopologyViolation("no-monitors", "-", "topology has no monitor nodes"))
    return violations


@dataclass(frozen=True)
class EquivalentChannel:
    """A contracted path of degree-2-joined edges treated as one channel."""

    edge_ids: tuple[str, ...]
    node_a: str
    node_b: str
    composite: PauliChannel


def _is_chain_interior(topology: Topology, node: str) -> bool:
    return not topology.is_monitor(node) and topology.degree(node) == 2


def simplify_degree2(topology: Topology) -> tuple[Topology, list[EquivalentChannel]]:
    """Contract every maximal path of degree-2 internal nodes.

    Each contracted path becomes a single edge whose channel is the ordered
    composite of its members; edge count is conserved in the sense that
    original edges = surviving simple edges + sum of path lengths.  A cycle
    made entirely of degree-2 nodes has no anchoring endpoint and is
    rejected.
    """
    consumed: set[str] = set()
    equivalents: list[EquivalentChannel] = []
    surviving: list[Edge] = []

    for edge_id in topology.sorted_edge_ids():
        if edge_id in consumed:
            continue
        edge = topology.edges[edge_id]
        if not (_is_chain_interior(topology, edge.node_a) or _is_chain_interior(topology, edge.node_b)):
            surviving.append(edge)
            consumed.add(edge_id)
            continue
        # Walk to both ends of the maximal chain through degree-2 interiors.
        path = [edge_id]
        ends = []
        for direction in (edge.node_a, edge.node_b):
            node, prev_edge = direction, edge_id
            segment = []
            while _is_chain_interior(topology, node):
                incident = [e for e in topology.incident_edges(node) if e != prev_edge]
                if len(incident) != 1:
                    raise TopologyError(f"inconsistent degree bookkeeping at node {node!r}")
                prev_edge = incident[0]
                segment.append(prev_edge)
                node = topology.edges[prev_edge].other(node)
                if prev_edge == edge_id or prev_edge in path or prev_edge in segment[:-1]:
                    raise TopologyError(
                        "cycle composed entirely of degree-2 nodes is unsupported"
                    )
            ends.append((node, segment))
        (end_a, seg_a), (end_b, seg_b) = ends
        if set(seg_a) & set(seg_b):
            raise TopologyError("cycle composed entirely of degree-2 nodes is unsupported")
        if end_a == end_b:
            # A degree-2 cycle hanging off a single anchor would contract to
            # a self-loop, which no protocol can characterize.
            raise TopologyError(
                f"degree-2 cycle attached to node {end_a!r} is unsupported"
            )
        ordered = [*reversed(seg_a), edge_id, *seg_b]
        consumed.update(ordered)
        channels = []
        node = end_a
        for member in ordered:
            channels.append(topology.edges[member].channel)
            node = topology.edges[member].other(node)
        composite = compose_channels(channels)
        equivalents.append(EquivalentChannel(tuple(ordered), end_a, end_b, composite))

    new_nodes = {n: k for n, k in topology.nodes.items()}
    interior = {
        n
        for eq in equivalents
        for member in eq.edge_ids
        for n in topology.edges[member].endpoints
        if n not in (eq.node_a, eq.node_b)
    }
    for n in interior:
        new_nodes.pop(n)
    new_edges = list(surviving)
    for eq in equivalents:
        new_id = "+".join(eq.edge_ids)
        new_edges.append(Edge(new_id, eq.node_a, eq.node_b, eq.composite))
    return Topology(new_nodes, new_edges), equivalents


@dataclass
class EtchingState:
    """Mutable bookkeeping for the progressive etching sweep.

    ``identified`` maps each fully estimated edge to its per-basis estimates
    (stored by the protocol driver; values are opaque to this module).
    ``effective_monitors`` is the set of nodes usable as monitor endpoints,
    and ``promoted_via[node]`` records the identified edge through which an
    internal node was promoted, giving a chain back to a real monitor.
    """

    identified: dict = field(default_factory=dict)
    effective_monitors: set = field(default_factory=set)
    promoted_via: dict = field(default_factory=dict)
    frontier: set = field(default_factory=set)

    @classmethod
    def initial(cls, topology: Topology) -> "EtchingState":
        state = cls(effective_monitors=set(topology.monitors))
        state.frontier = peripheral_edges(topology, state)
        return state


def peripheral_edges(topology: Topology, state: EtchingState) -> set:
    """Unidentified edges with at least one endpoint in the effective monitors."""
    out = set()
    for edge_id, edge in topology.edges.items():
        if edge_id in state.identified:
            continue
        if edge.node_a in state.effective_monitors or edge.node_b in state.effective_monitors:
            out.add(edge_id)
    return out


def monitor_chain(topology: Topology, state: EtchingState, node: str) -> tuple[str, ...]:
    """Identified edges leading from ``node`` back to a real monitor.

    Empty for a real monitor; for effective monitors it follows the
    promotion records.  The returned order is node-outward (first element is
    the edge incident to ``node``).
    """
    chain = []
    current = node
    seen = set()
    while not topology.is_monitor(current):
        if current in seen:
            raise TopologyError(f"promotion records form a cycle at node {current!r}")
        seen.add(current)
        edge_id = state.promoted_via.get(current)
        if edge_id is None:
            raise TopologyError(f"node {current!r} is not an effective monitor")
        chain.append(edge_id)
        current = topology.edges[edge_id].other(current)
    return tuple(chain)


@dataclass(frozen=True)
class BranchSelection:
    """Two physically disjoint monitor-reaching branches for Mergecast.

    ``path_a2`` and ``path_b`` run from the merge node to effective
    monitors; ``chain_a2`` / ``chain_b`` extend them through identified
    edges to real monitors (empty when the terminal is already real).
    """

    merge_node: str
    outer_node: str
    target_chain: tuple[str, ...]
    path_a2: tuple[str, ...]
    chain_a2: tuple[str, ...]
    path_b: tuple[str, ...]
    chain_b: tuple[str, ...]

    @property
    def full_a2(self) -> tuple[str, ...]:
        return self.path_a2 + self.chain_a2

    @property
    def full_b(self) -> tuple[str, ...]:
        return self.path_b + self.chain_b


def _shortest_path_to_monitors(
    topology: Topology,
    state: EtchingState,
    start: str,
    blocked_edges: set,
) -> dict[str, tuple[str, ...]]:
    """BFS edge paths from ``start`` to each reachable effective monitor.

    Paths do not traverse blocked edges and stop at the first monitor
    reached (interior nodes are never monitors).  Neighbor expansion follows
    natural edge order, so ties resolve deterministically.
    """
    paths: dict[str, tuple[str, ...]] = {}
    visited = {start}
    queue: list[tuple[str, tuple[str, ...]]] = [(start, ())]
    while queue:
        node, path = queue.pop(0)
        for edge_id in topology.incident_edges(node):
            if edge_id in blocked_edges or edge_id in path:
                continue
            other = topology.edges[edge_id].other(node)
            if other in state.effective_monitors:
                if other not in paths and other != start:
                    paths[other] = path + (edge_id,)
                continue
            if other in visited:
                continue
            visited.add(other)
            queue.append((other, path + (edge_id,)))
    return paths


def select_mergecast_branches(
    topology: Topology,
    state: EtchingState,
    target: str,
    merge_node: Optional[str] = None,
) -> BranchSelection:
    """Pick the two Mergecast branches for a frontier edge.

    The target edge must have an endpoint in the effective monitors; the
    merge happens at the other endpoint (or at ``merge_node`` when both
    endpoints qualify and the caller wants to pin the choice).  Branches are
    edge-disjoint from each other, from the target, and from the identified
    chains backing every involved effective monitor, so the three physical
    qubit paths of a run never share a channel.  Selection is deterministic:
    monitor pairs are tried in natural order with BFS-shortest paths.
    """
    edge = topology.edges[target]
    candidates = []
    for outer, center in ((edge.node_a, edge.node_b), (edge.node_b, edge.node_a)):
        if outer not in state.effective_monitors:
            continue
        if merge_node is not None and center != merge_node:
            continue
        candidates.append((outer, center))
    if not candidates:
        raise BranchSelectionError(f"target {target!r} has no endpoint in the effective monitors")
    candidates.sort(key=lambda pair: natural_key(pair[0]))

    def ranked(paths: dict) -> list:
        # shortest physical branch first (identified chain included), with
        # natural name order breaking ties
        return sorted(
            paths,
            key=lambda mon: (
                len(paths[mon]) + len(monitor_chain(topology, state, mon)),
                natural_key(mon),
            ),
        )

    last_error = f"no disjoint branch pair found for target {target!r}"
    for outer, center in candidates:
        target_chain = monitor_chain(topology, state, outer)
        reserved = set(target_chain) | {target}
        first_paths = _shortest_path_to_monitors(topology, state, center, reserved)
        for monitor_a in ranked(first_paths):
            if monitor_a == outer:
                continue
            path_a = first_paths[monitor_a]
            chain_a = monitor_chain(topology, state, monitor_a)
            used = reserved | set(path_a) | set(chain_a)
            if len(used) != len(reserved) + len(path_a) + len(chain_a):
                continue
            second_paths = _shortest_path_to_monitors(topology, state, center, used)
            for monitor_b in ranked(second_paths):
                if monitor_b in (outer, monitor_a):
                    continue
                path_b = second_paths[monitor_b]
                chain_b = monitor_chain(topology, state, monitor_b)
                all_edges = used | set(path_b) | set(chain_b)
                if len(all_edges) != len(used) + len(path_b) + len(chain_b):
                    continue
                return BranchSelection(
                    merge_node=center,
                    outer_node=outer,
                    target_chain=target_chain,
                    path_a2=path_a,
                    chain_a2=chain_a,
                    path_b=path_b,
                    chain_b=chain_b,
                )
        last_error = (
            f"merge node {center!r} cannot reach two distinct effective monitors "
            f"on edge-disjoint paths avoiding target {target!r}"
        )
    raise BranchSelectionError(last_error)
