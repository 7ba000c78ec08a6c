import json
import logging
from typing import Dict, Tuple

import networkx as nx

from ..const import (CCX_CX, CCX_T, CCX_T_DEPTH, CONTROLLED_COSTS, CSWAP_CX, CSWAP_T, CSWAP_T_DEPTH,
                     ROTATION_KINDS)
from ..costs import CostVector
from ..errors import CircuitError
from .circuit import Circuit
from .gates import Gate

logger = logging.getLogger(__name__)

GATE_CLASSES = ("CX", "RZ", "T", "2Q")

# gate class to node color, for the html/json exports
NODE_COLOR = {
    'CX': '#5470c6',
    'RZ': '#91cc75',
    'T': '#fac858',
    '2Q': '#61a0a8',
}


def gate_cost(gate: Gate, gate_class: str, t_eps: float = 1.0) -> Tuple[float, float]:
    """
    (count, sequential layers) contributed by one gate to a gate class.
    CSWAP and CCX count through their CX / Clifford+T decompositions,
    extra controls on single-qubit gates through CONTROLLED_COSTS.
    """
    if not gate.is_unitary():
        return 0, 0
    kind = gate.kind
    if gate_class == "2Q":
        return (1, 1) if gate.is_multi_qubit() else (0, 0)
    if gate_class == "CX":
        if kind == "CX":
            return 1, 1
        if kind == "CSWAP":
            return CSWAP_CX, CSWAP_CX
        if kind == "CCX":
            return CCX_CX, CCX_CX
        if gate.control is not None:
            cx = CONTROLLED_COSTS[kind][0]
            return cx, cx
        return 0, 0
    if gate_class == "RZ":
        if gate.control is not None:
            rz = CONTROLLED_COSTS[kind][1]
            return rz, rz
        return (1, 1) if kind in ROTATION_KINDS else (0, 0)
    if gate_class == "T":
        if kind == "CSWAP":
            return CSWAP_T, CSWAP_T_DEPTH
        if kind == "CCX":
            return CCX_T, CCX_T_DEPTH
        rz, layers = gate_cost(gate, "RZ")
        return rz * t_eps, layers * t_eps
    raise CircuitError(f"unknown gate class {gate_class!r}, expected one of {GATE_CLASSES}")


class CircuitGraphBuilder:
    """
    Dependency DAG of the gates of one class: a node per contributing gate,
    an edge to the next contributing gate on every shared qubit.
    Node weight is the number of sequential layers the gate occupies.
    """

    def __init__(self, circuit: Circuit, gate_class: str, t_eps: float = 1.0):
        self.circuit = circuit
        self.gate_class = gate_class
        self.t_eps = t_eps
        self.G = nx.DiGraph()
        self.count = 0

    def build_graph(self) -> "CircuitGraphBuilder":
        last_on_qubit: Dict[int, int] = {}
        for index, gate in enumerate(self.circuit.gates):
            count, layers = gate_cost(gate, self.gate_class, self.t_eps)
            if count == 0:
                continue
            self.count += count
            self.G.add_node(index, kind=gate.kind, label=gate.to_text(), weight=layers,
                            color=NODE_COLOR[self.gate_class])
            for q in gate.all_qubits:
                prev = last_on_qubit.get(q)
                if prev is not None and not self.G.has_edge(prev, index):
                    self.G.add_edge(prev, index, weight=layers)
                last_on_qubit[q] = index
        return self

    def longest_chain(self) -> float:
        finish: Dict[int, float] = {}
        for node in nx.topological_sort(self.G):
            start = max((finish[p] for p in self.G.predecessors(node)), default=0)
            finish[node] = start + self.G.nodes[node]["weight"]
        return max(finish.values(), default=0)

    def save_graph(self, save_path: str, save_format: str = "graphml"):
        if save_format == "graphml":
            nx.write_graphml(self.G, save_path)
        elif save_format == "gexf":
            nx.write_gexf(self.G, save_path)
        elif save_format == "gml":
            nx.write_gml(self.G, save_path)
        elif save_format == "json":
            nodes = [{"id": node, **self.G.nodes[node]} for node in self.G.nodes()]
            edges = [{"source": u, "target": v, **self.G.edges[u, v]} for u, v in self.G.edges()]
            with open(save_path, 'w') as f:
                json.dump({"nodes": nodes, "edges": edges}, f, indent=4)
        else:
            raise CircuitError(f"unsupported graph format: {save_format}")


def count(c: Circuit, gate_class: str, t_eps: float = 1.0) -> float:
    return sum(gate_cost(gate, gate_class, t_eps)[0] for gate in c.gates)


def depth(c: Circuit, gate_class: str, t_eps: float = 1.0) -> float:
    """
    Class-restricted layering: gates outside the class are dropped, per-qubit order is kept,
    and a CSWAP occupies 7 consecutive CX layers
    """
    return CircuitGraphBuilder(c, gate_class, t_eps).build_graph().longest_chain()


def summary(c: Circuit, t_eps: float = 1.0) -> CostVector:
    return CostVector(
        cx_count=count(c, "CX"),
        rz_count=count(c, "RZ"),
        t_count=count(c, "T", t_eps),
        cx_depth=depth(c, "CX"),
        rz_depth=depth(c, "RZ"),
        t_depth=depth(c, "T", t_eps),
    )


def two_qubit_profile(c: Circuit) -> Dict[str, float]:
    return {"count": count(c, "2Q"), "depth": depth(c, "2Q")}
