import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..errors import CircuitError
from . import gates as g
from .gates import Gate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Register:
    name: str
    start: int
    size: int

    @property
    def indices(self) -> List[int]:
        return list(range(self.start, self.start + self.size))

    def __getitem__(self, k: int) -> int:
        if not -self.size <= k < self.size:
            raise CircuitError(f"index {k} out of register {self.name}[{self.size}]")
        return self.start + (k % self.size)

    def __len__(self):
        return self.size


class Circuit:
    """
    Ordered gate list over named quantum and classical registers.
    Treated as immutable once built; the `add` family is for builders only.
    - n_qubits / n_cbits: register widths
    - qregs / cregs: named contiguous index ranges, in declaration order
    - gates: the instruction list
    """

    def __init__(self, n_qubits: int, n_cbits: int = 0,
                 qregs: Sequence[Register] = (), cregs: Sequence[Register] = (),
                 gates: Iterable[Gate] = ()):
        self.n_qubits = int(n_qubits)
        self.n_cbits = int(n_cbits)
        self.qregs: Tuple[Register, ...] = tuple(qregs)
        self.cregs: Tuple[Register, ...] = tuple(cregs)
        self._gates: List[Gate] = []
        for reg in self.qregs:
            if reg.start + reg.size > self.n_qubits:
                raise CircuitError(f"register {reg.name} overflows {self.n_qubits} qubits")
        for reg in self.cregs:
            if reg.start + reg.size > self.n_cbits:
                raise CircuitError(f"classical register {reg.name} overflows {self.n_cbits} bits")
        self.extend(gates)

    # builder interface

    def add(self, gate: Gate) -> "Circuit":
        for q in gate.all_qubits:
            if q >= self.n_qubits:
                raise CircuitError(f"{gate.kind} operand {q} >= {self.n_qubits} qubits")
        if gate.cbit is not None and gate.cbit >= self.n_cbits:
            raise CircuitError(f"MEASURE target bit {gate.cbit} >= {self.n_cbits} bits")
        self._gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for gate in gates:
            self.add(gate)
        return self

    # read interface

    @property
    def gates(self) -> Tuple[Gate, ...]:
        return tuple(self._gates)

    def __len__(self):
        return len(self._gates)

    def __iter__(self):
        return iter(self._gates)

    def qreg(self, name: str) -> Register:
        for reg in self.qregs:
            if reg.name == name:
                return reg
        raise CircuitError(f"no quantum register named {name!r}")

    def creg(self, name: str) -> Register:
        for reg in self.cregs:
            if reg.name == name:
                return reg
        raise CircuitError(f"no classical register named {name!r}")

    def has_qreg(self, name: str) -> bool:
        return any(reg.name == name for reg in self.qregs)

    def has_measurements(self) -> bool:
        return any(gate.kind in ("MEASURE", "RESET") for gate in self._gates)

    def gate_census(self) -> Dict[str, int]:
        census = Counter()
        for gate in self._gates:
            census[gate.kind if gate.control is None else f"C{gate.kind}"] += 1
        return dict(census)

    def same_layout(self, other: "Circuit") -> bool:
        return self.n_qubits == other.n_qubits and _compatible(self.qregs, other.qregs) \
            and _compatible(self.cregs, other.cregs)

    def empty_like(self) -> "Circuit":
        return Circuit(self.n_qubits, self.n_cbits, self.qregs, self.cregs)

    # transformations

    def inverse(self) -> "Circuit":
        out = self.empty_like()
        for gate in reversed(self._gates):
            out.add(gate.inverse())
        return out

    def repeat(self, times: int) -> "Circuit":
        out = self.empty_like()
        for _ in range(times):
            out.extend(self._gates)
        return out

    def controlled(self, control: int) -> "Circuit":
        """
        Add `control` to every gate: X becomes CX, CX becomes CCX, rotations gain a control
        """
        out = self.empty_like()
        for gate in self._gates:
            if control in gate.all_qubits:
                raise CircuitError(f"[Circuit::controlled] control {control} is already used by {gate.kind}")
            if gate.kind == "BARRIER":
                out.add(gate)
            elif gate.kind == "X" and gate.control is None:
                out.add(g.cx(control, gate.qubits[0]))
            elif gate.kind == "CX":
                out.add(g.ccx(control, gate.qubits[0], gate.qubits[1]))
            elif gate.kind in ("H", "S", "SDG", "RZ", "RY", "PHASE") and gate.control is None:
                out.add(Gate(gate.kind, gate.qubits, gate.param, control))
            else:
                raise CircuitError(f"[Circuit::controlled] cannot control {gate.to_text()}")
        return out

    def remap(self, mapping: Mapping[int, int], n_qubits: int, qregs: Sequence[Register] = (),
              n_cbits: int = 0, cregs: Sequence[Register] = (),
              cbit_mapping: Optional[Mapping[int, int]] = None) -> "Circuit":
        """
        Place this circuit onto a wider layout, qubit q going to mapping[q]
        """
        out = Circuit(n_qubits, n_cbits, qregs, cregs)
        for gate in self._gates:
            moved = gate.remap(mapping)
            if moved.cbit is not None and cbit_mapping is not None:
                moved = Gate(moved.kind, moved.qubits, cbit=cbit_mapping[moved.cbit])
            out.add(moved)
        return out

    def place(self, register: Register, n_qubits: int, qregs: Sequence[Register] = (),
              n_cbits: int = 0, cregs: Sequence[Register] = ()) -> "Circuit":
        if register.size != self.n_qubits:
            raise CircuitError(f"[Circuit::place] {self.n_qubits}-qubit circuit does not fit "
                               f"register {register.name}[{register.size}]")
        mapping = {k: register.start + k for k in range(self.n_qubits)}
        return self.remap(mapping, n_qubits, qregs, n_cbits, cregs)

    # serialization

    def to_text(self) -> str:
        lines = [f"qubits {self.n_qubits}", f"cbits {self.n_cbits}"]
        lines += [f"qreg {r.name} {r.start} {r.size}" for r in self.qregs]
        lines += [f"creg {r.name} {r.start} {r.size}" for r in self.cregs]
        lines += [gate.to_text() for gate in self._gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        header = {"qubits": 0, "cbits": 0}
        qregs, cregs, body = [], [], []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head = line.split()
            if head[0] in header:
                header[head[0]] = int(head[1])
            elif head[0] in ("qreg", "creg"):
                reg = Register(head[1], int(head[2]), int(head[3]))
                (qregs if head[0] == "qreg" else cregs).append(reg)
            else:
                try:
                    body.append(Gate.from_text(line))
                except (ValueError, IndexError) as e:
                    raise CircuitError(f"[Circuit::from_text] line {lineno}: {e}")
        return cls(header["qubits"], header["cbits"], qregs, cregs, body)

    def save(self, save_path: str):
        with open(save_path, "w") as f:
            f.write(self.to_text())

    @classmethod
    def load(cls, load_path: str) -> "Circuit":
        with open(load_path, "r") as f:
            return cls.from_text(f.read())

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.to_text() == other.to_text()

    def __repr__(self):
        return f"Circuit({self.n_qubits} qubits, {self.n_cbits} cbits, {len(self._gates)} gates)"


def _compatible(a: Sequence[Register], b: Sequence[Register]) -> bool:
    by_name = {reg.name: reg for reg in a}
    return all(by_name.get(reg.name, reg) == reg for reg in b)


def compose(a: Circuit, b: Circuit) -> Circuit:
    """
    Run a then b on a shared layout
    """
    if a.n_qubits != b.n_qubits:
        raise CircuitError(f"[compose] layout mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    if not _compatible(a.qregs, b.qregs) or not _compatible(a.cregs, b.cregs):
        raise CircuitError("[compose] layout mismatch: registers with the same name differ")
    qregs = list(a.qregs) + [r for r in b.qregs if r not in a.qregs]
    cregs = list(a.cregs) + [r for r in b.cregs if r not in a.cregs]
    out = Circuit(a.n_qubits, max(a.n_cbits, b.n_cbits), qregs, cregs)
    out.extend(a.gates)
    out.extend(b.gates)
    return out


def identity(n_qubits: int) -> Circuit:
    return Circuit(n_qubits)
