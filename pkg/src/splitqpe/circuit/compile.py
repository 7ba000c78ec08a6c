"""
Compilation identities: Pauli exponentials, their controlled versions,
nearest-neighbour Givens rotations and the inverse QFT.

Angles follow exp(-i * angle * P); the Pauli string's own coefficient is
ignored here and folded into `angle` by the caller.
"""
from typing import List, Optional, Sequence

from ..errors import CircuitError
from ..pauli import PauliString, PauliSum
from . import gates as g
from .circuit import Circuit, Register
from .gates import Gate


def _basis_in(p: PauliString) -> List[Gate]:
    out = []
    for q, letter in p.ops:
        if letter == "X":
            out.append(g.h(q))
        elif letter == "Y":
            out += [g.sdg(q), g.h(q)]
    return out


def _basis_out(p: PauliString) -> List[Gate]:
    out = []
    for q, letter in p.ops:
        if letter == "X":
            out.append(g.h(q))
        elif letter == "Y":
            out += [g.h(q), g.s(q)]
    return out


def _ladder(qubits: Sequence[int]) -> List[Gate]:
    return [g.cx(qubits[k], qubits[k + 1]) for k in range(len(qubits) - 1)]


def pauli_exp_gates(p: PauliString, angle: float) -> List[Gate]:
    if p.is_identity():
        raise CircuitError("[pauli_exp] empty Pauli string")
    ladder = _ladder(p.qubits)
    return _basis_in(p) + ladder + [g.rz(p.qubits[-1], 2 * angle)] + ladder[::-1] + _basis_out(p)


def controlled_pauli_exp_gates(p: PauliString, angle: float, control: int) -> List[Gate]:
    if p.is_identity():
        raise CircuitError("[controlled_pauli_exp] empty Pauli string")
    if control in p.qubits:
        raise CircuitError(f"[controlled_pauli_exp] control {control} overlaps operands {p.qubits}")
    ladder = _ladder(p.qubits)
    target = p.qubits[-1]
    # |1><1|_a (x) exp(-i angle Z_t) = Rz_t(angle) CX(a,t) Rz_t(-angle) CX(a,t)
    core = [g.cx(control, target), g.rz(target, -angle), g.cx(control, target), g.rz(target, angle)]
    return _basis_in(p) + ladder + core + ladder[::-1] + _basis_out(p)


def pauli_exp(p: PauliString, angle: float, n_qubits: Optional[int] = None) -> Circuit:
    n = n_qubits if n_qubits is not None else p.max_qubit() + 1
    return Circuit(n, gates=pauli_exp_gates(p, angle))


def controlled_pauli_exp(p: PauliString, angle: float, control: int,
                         n_qubits: Optional[int] = None) -> Circuit:
    n = n_qubits if n_qubits is not None else max(p.max_qubit(), control) + 1
    return Circuit(n, gates=controlled_pauli_exp_gates(p, angle, control))


def sum_exp_gates(h: PauliSum, t: float, control: Optional[int] = None) -> List[Gate]:
    """
    Term-by-term product of exp(-i t c_k P_k); exact when the terms commute
    """
    out = []
    for term in h.terms:
        angle = t * term.coeff.real
        if control is None:
            out += pauli_exp_gates(term, angle)
        else:
            out += controlled_pauli_exp_gates(term, angle, control)
    return out


def givens_gates(p: int, theta: float) -> List[Gate]:
    return [g.h(p), g.cx(p, p + 1), g.ry(p, theta), g.ry(p + 1, theta), g.cx(p, p + 1), g.h(p)]


def givens(p: int, theta: float, n_qubits: Optional[int] = None) -> Circuit:
    """
    Nearest-neighbour Givens rotation between qubits p and p+1:
    |01> -> cos t |01> - sin t |10>, |10> -> sin t |01> + cos t |10>
    """
    if p < 0:
        raise CircuitError(f"[givens] negative qubit {p}")
    n = n_qubits if n_qubits is not None else p + 2
    if p + 1 >= n:
        raise CircuitError(f"[givens] qubit {p + 1} does not exist in {n} qubits")
    return Circuit(n, gates=givens_gates(p, theta))


def inverse_qft_gates(qubits: Sequence[int]) -> List[Gate]:
    """
    Inverse QFT without the closing swaps: afterwards qubits[k] holds output bit m-1-k,
    which the caller undoes by measuring qubits[k] into classical bit m-1-k.
    """
    m = len(qubits)
    out = []
    for k in range(m - 1, -1, -1):
        for d in range(1, m - k):
            out.append(g.phase(qubits[k], -1.0 / 2 ** (d + 1), control=qubits[k + d]))
        out.append(g.h(qubits[k]))
    return out


def inverse_qft(m: int, start: int = 0, n_qubits: Optional[int] = None) -> Circuit:
    if m < 1:
        raise CircuitError(f"[inverse_qft] needs at least one qubit, got {m}")
    n = n_qubits if n_qubits is not None else start + m
    reg = Register("phase", start, m)
    return Circuit(n, qregs=[reg], gates=inverse_qft_gates(reg.indices))


def readout_gates(qubits: Sequence[int], cbit_start: int = 0) -> List[Gate]:
    m = len(qubits)
    return [g.measure(qubits[k], cbit_start + m - 1 - k) for k in range(m)]
