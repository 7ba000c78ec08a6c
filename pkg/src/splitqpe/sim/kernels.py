"""
In-place gate kernels on a statevector tensor.

The state has shape (2,) * n, optionally followed by one batch axis; qubit q
lives on axis n - 1 - q so that C-order flattening gives little-endian indices.
"""
from typing import Dict

import numpy as np

from ..circuit.gates import Gate
from ..errors import CircuitError

# Pauli letters indexed by the error-channel digit
PAULI_DIGITS = (None, "X", "Y", "Z")


def axis_of(q: int, n: int) -> int:
    return n - 1 - q


def _idx(ndim: int, fixed: Dict[int, int]) -> tuple:
    index = [slice(None)] * ndim
    for axis, value in fixed.items():
        index[axis] = value
    return tuple(index)


def _swap_slices(psi: np.ndarray, a: tuple, b: tuple):
    tmp = psi[a].copy()
    psi[a] = psi[b]
    psi[b] = tmp


def apply_matrix(psi: np.ndarray, matrix: np.ndarray, q: int, n: int, controls=()):
    fixed = {axis_of(c, n): 1 for c in controls}
    ax = axis_of(q, n)
    i0 = _idx(psi.ndim, {**fixed, ax: 0})
    i1 = _idx(psi.ndim, {**fixed, ax: 1})
    a0 = psi[i0].copy()
    a1 = psi[i1]
    if matrix[0, 1] == 0 and matrix[1, 0] == 0:
        if matrix[0, 0] != 1:
            psi[i0] *= matrix[0, 0]
        psi[i1] *= matrix[1, 1]
        return
    psi[i0] = matrix[0, 0] * a0 + matrix[0, 1] * a1
    psi[i1] = matrix[1, 0] * a0 + matrix[1, 1] * a1


def apply_x(psi: np.ndarray, q: int, n: int, controls=()):
    fixed = {axis_of(c, n): 1 for c in controls}
    ax = axis_of(q, n)
    _swap_slices(psi, _idx(psi.ndim, {**fixed, ax: 0}), _idx(psi.ndim, {**fixed, ax: 1}))


def apply_z(psi: np.ndarray, q: int, n: int):
    psi[_idx(psi.ndim, {axis_of(q, n): 1})] *= -1


def apply_cswap(psi: np.ndarray, control: int, a: int, b: int, n: int):
    ac, aa, ab = axis_of(control, n), axis_of(a, n), axis_of(b, n)
    _swap_slices(psi, _idx(psi.ndim, {ac: 1, aa: 0, ab: 1}), _idx(psi.ndim, {ac: 1, aa: 1, ab: 0}))


def apply_gate(psi: np.ndarray, gate: Gate, n: int):
    kind = gate.kind
    if kind == "BARRIER":
        return
    if kind == "CX":
        apply_x(psi, gate.qubits[1], n, controls=(gate.qubits[0],))
    elif kind == "CCX":
        apply_x(psi, gate.qubits[2], n, controls=gate.qubits[:2])
    elif kind == "CSWAP":
        apply_cswap(psi, *gate.qubits, n)
    elif kind == "X":
        controls = () if gate.control is None else (gate.control,)
        apply_x(psi, gate.qubits[0], n, controls)
    elif gate.is_unitary():
        controls = () if gate.control is None else (gate.control,)
        apply_matrix(psi, gate.matrix(), gate.qubits[0], n, controls)
    else:
        raise CircuitError(f"{kind} is not a unitary gate")


def apply_pauli(psi: np.ndarray, q: int, letter: str, n: int):
    """
    Pauli error up to a global phase (Y applied as X.Z)
    """
    if letter in ("Z", "Y"):
        apply_z(psi, q, n)
    if letter in ("X", "Y"):
        apply_x(psi, q, n)


def prob_one(psi: np.ndarray, q: int, n: int) -> float:
    total = float(np.vdot(psi, psi).real)
    ones = psi[_idx(psi.ndim, {axis_of(q, n): 1})]
    return float(np.vdot(ones, ones).real) / total


def project(psi: np.ndarray, q: int, n: int, outcome: int, prob: float):
    """
    Collapse qubit q onto `outcome` (measured with probability `prob`) and renormalise
    """
    psi[_idx(psi.ndim, {axis_of(q, n): 1 - outcome})] = 0
    psi /= np.sqrt(prob)


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    return psi
