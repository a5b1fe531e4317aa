"""A degree-2-heavy topology shared by the property tests."""

from qnt.network import Edge, Topology
from qnt.pauli import PauliChannel


def build_chain_heavy_topology() -> Topology:
    """A hub network where three of four branches run through relay chains."""
    q = PauliChannel(0.8, 0.8, 0.8)
    nodes = {
        "HUB1": "internal",
        "HUB2": "internal",
        "R1": "internal",
        "R2": "internal",
        "R3": "internal",
        "R4": "internal",
        "M1": "monitor",
        "M2": "monitor",
        "M3": "monitor",
        "M4": "monitor",
    }
    edges = [
        Edge("L1", "M1", "R1", q),
        Edge("L2", "R1", "HUB1", q),
        Edge("L3", "M2", "HUB1", q),
        Edge("L4", "HUB1", "R2", q),
        Edge("L5", "R2", "R3", q),
        Edge("L6", "R3", "HUB2", q),
        Edge("L7", "HUB2", "M3", q),
        Edge("L8", "HUB2", "R4", q),
        Edge("L9", "R4", "M4", q),
        Edge("L10", "HUB1", "HUB2", q),
    ]
    return Topology(nodes, edges)
