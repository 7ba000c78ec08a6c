import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..const import GATE_ARITY, ROTATION_KINDS, SINGLE_QUBIT_KINDS
from ..errors import CircuitError

_SQRT_HALF = 1 / math.sqrt(2)
_INVERSE_KIND = {"S": "SDG", "SDG": "S"}


@dataclass(frozen=True)
class Gate:
    """
    One circuit instruction
    - kind: H, X, S, SDG, RZ, RY, PHASE, CX, CCX, CSWAP, MEASURE, RESET or BARRIER
    - qubits: operand qubits; for CX/CCX/CSWAP the controls come first
    - param: radians for RZ/RY, turns in [0, 1) for PHASE
    - control: optional extra control qubit on a single-qubit gate
    - cbit: classical target of MEASURE
    """
    kind: str
    qubits: Tuple[int, ...]
    param: Optional[float] = None
    control: Optional[int] = None
    cbit: Optional[int] = None

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        arity = GATE_ARITY[self.kind]
        if self.kind != "BARRIER" and len(qubits) != arity:
            raise CircuitError(f"{self.kind} takes {arity} qubits, got {len(qubits)}")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"{self.kind} has repeated operands {qubits}")
        if any(q < 0 for q in qubits):
            raise CircuitError(f"{self.kind} has a negative operand {qubits}")
        if self.kind in ROTATION_KINDS:
            if self.param is None or not math.isfinite(self.param):
                raise CircuitError(f"{self.kind} needs a finite angle, got {self.param}")
            if self.kind == "PHASE":
                object.__setattr__(self, "param", float(self.param) % 1.0)
            else:
                object.__setattr__(self, "param", float(self.param))
        elif self.param is not None:
            raise CircuitError(f"{self.kind} takes no angle")
        if self.control is not None:
            if self.kind not in SINGLE_QUBIT_KINDS:
                raise CircuitError(f"{self.kind} cannot carry an extra control")
            if self.control in qubits:
                raise CircuitError(f"control {self.control} overlaps operands {qubits}")
        if (self.cbit is None) != (self.kind != "MEASURE"):
            raise CircuitError("MEASURE needs a classical bit, other gates take none")

    @property
    def all_qubits(self) -> Tuple[int, ...]:
        if self.control is None:
            return self.qubits
        return (self.control,) + self.qubits

    def is_unitary(self) -> bool:
        return self.kind not in ("MEASURE", "RESET", "BARRIER")

    def is_multi_qubit(self) -> bool:
        return self.is_unitary() and len(self.all_qubits) > 1

    def inverse(self) -> "Gate":
        if not self.is_unitary() and self.kind != "BARRIER":
            raise CircuitError(f"{self.kind} has no inverse")
        kind = _INVERSE_KIND.get(self.kind, self.kind)
        param = None
        if self.kind in ROTATION_KINDS:
            param = -self.param
        return Gate(kind, self.qubits, param, self.control)

    def matrix(self) -> np.ndarray:
        """
        2x2 matrix of a single-qubit kind (the extra control is not included)
        """
        kind, a = self.kind, self.param
        if kind == "H":
            return _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex)
        if kind == "X":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if kind == "S":
            return np.diag([1, 1j])
        if kind == "SDG":
            return np.diag([1, -1j])
        if kind == "RZ":
            return np.diag([np.exp(-0.5j * a), np.exp(0.5j * a)])
        if kind == "RY":
            c, s = math.cos(a / 2), math.sin(a / 2)
            return np.array([[c, -s], [s, c]], dtype=complex)
        if kind == "PHASE":
            return np.diag([1, np.exp(2j * math.pi * a)])
        raise CircuitError(f"{kind} is not a single-qubit gate")

    def diagonal(self) -> Optional[np.ndarray]:
        if self.kind in ("S", "SDG", "RZ", "PHASE"):
            return np.diag(self.matrix()).copy()
        return None

    def remap(self, mapping) -> "Gate":
        control = None if self.control is None else mapping[self.control]
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.param, control, self.cbit)

    def to_text(self) -> str:
        parts = [self.kind] + [str(q) for q in self.qubits]
        if self.param is not None:
            parts.append(repr(self.param))
        if self.control is not None:
            parts.append(f"ctrl={self.control}")
        if self.cbit is not None:
            parts += ["->", str(self.cbit)]
        return " ".join(parts)

    @classmethod
    def from_text(cls, line: str) -> "Gate":
        tokens = line.split()
        kind, rest = tokens[0].upper(), tokens[1:]
        cbit = control = param = None
        if "->" in rest:
            pos = rest.index("->")
            cbit = int(rest[pos + 1])
            rest = rest[:pos]
        for token in list(rest):
            if token.startswith("ctrl="):
                control = int(token[5:])
                rest.remove(token)
        if kind == "BARRIER":
            return cls(kind, tuple(int(t) for t in rest))
        arity = GATE_ARITY.get(kind)
        if arity is None:
            raise CircuitError(f"unknown gate kind in line {line!r}")
        qubits = tuple(int(t) for t in rest[:arity])
        if len(rest) > arity:
            param = float(rest[arity])
        return cls(kind, qubits, param, control, cbit)


# shorthand constructors used by the builders
def h(q: int) -> Gate:
    return Gate("H", (q,))


def x(q: int) -> Gate:
    return Gate("X", (q,))


def s(q: int) -> Gate:
    return Gate("S", (q,))


def sdg(q: int) -> Gate:
    return Gate("SDG", (q,))


def rz(q: int, angle: float, control: Optional[int] = None) -> Gate:
    return Gate("RZ", (q,), angle, control)


def ry(q: int, angle: float, control: Optional[int] = None) -> Gate:
    return Gate("RY", (q,), angle, control)


def phase(q: int, turns: float, control: Optional[int] = None) -> Gate:
    return Gate("PHASE", (q,), turns, control)


def cx(control: int, target: int) -> Gate:
    return Gate("CX", (control, target))


def ccx(c0: int, c1: int, target: int) -> Gate:
    return Gate("CCX", (c0, c1, target))


def cswap(control: int, a: int, b: int) -> Gate:
    return Gate("CSWAP", (control, a, b))


def measure(q: int, cbit: int) -> Gate:
    return Gate("MEASURE", (q,), cbit=cbit)


def reset(q: int) -> Gate:
    return Gate("RESET", (q,))


def barrier(*qubits: int) -> Gate:
    return Gate("BARRIER", tuple(qubits))
