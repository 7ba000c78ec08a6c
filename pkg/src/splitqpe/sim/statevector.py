import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..circuit import Circuit
from ..circuit.circuit import Register
from ..const import (CREG_ED_PREFIX, CREG_PHASE, DETERMINISTIC_TOL, NORM_TOL, STATEVECTOR_QUBIT_CAP,
                     UNITARY_QUBIT_CAP)
from ..errors import CircuitError, DenseCapError, MeasurementError
from ..pauli import DenseState
from . import kernels

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShotRecord:
    """
    One sampled outcome
    - shot: shot index
    - phase_bits: m_{M-1} ... m_0, most significant first
    - ed_bits: error-detection bits in circuit order
    """
    shot: int
    phase_bits: str
    ed_bits: str = ""

    @property
    def value(self) -> int:
        return int(self.phase_bits, 2) if self.phase_bits else 0

    @property
    def flagged(self) -> bool:
        return "1" in self.ed_bits


@dataclass(frozen=True)
class NoiseConfig:
    """
    Two-parameter stand-in noise model
    - p2: depolarising probability per CX-equivalent of a multi-qubit gate
    - pm: readout flip probability per measured bit
    - seed: default seed for sampling
    """
    p2: float = 0.0
    pm: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("p2", "pm"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise CircuitError(f"[NoiseConfig] {name}={value} outside [0, 1]")

    @property
    def active(self) -> bool:
        return self.p2 > 0 or self.pm > 0


def check_size(c: Circuit, cap: int = STATEVECTOR_QUBIT_CAP):
    if c.n_qubits > cap:
        raise DenseCapError(f"circuit has {c.n_qubits} qubits, simulator cap is {cap}")


def phase_register(c: Circuit) -> Register:
    return c.creg(CREG_PHASE)


def ed_registers(c: Circuit) -> List[Register]:
    return [reg for reg in c.cregs if reg.name.startswith(CREG_ED_PREFIX)]


def terminal_start(c: Circuit) -> int:
    """
    Index where the trailing block of MEASURE/BARRIER gates begins
    """
    gates = c.gates
    k = len(gates)
    while k > 0 and gates[k - 1].kind in ("MEASURE", "BARRIER"):
        k -= 1
    return k


def record_from_cbits(c: Circuit, cbits: np.ndarray, shot: int) -> ShotRecord:
    phase = phase_register(c)
    phase_bits = "".join(str(int(cbits[phase.start + j])) for j in reversed(range(phase.size)))
    ed_bits = "".join(str(int(cbits[i])) for reg in ed_registers(c) for i in reg.indices)
    return ShotRecord(shot, phase_bits, ed_bits)


def evolve(c: Circuit, initial: Optional[DenseState] = None) -> DenseState:
    check_size(c)
    if c.has_measurements():
        raise MeasurementError("[evolve] circuit contains MEASURE/RESET; use sample or phase_marginal")
    n = c.n_qubits
    if initial is None:
        psi = kernels.zero_state(n)
    else:
        if initial.n != n:
            raise CircuitError(f"[evolve] {initial.n}-qubit state for a {n}-qubit circuit")
        psi = np.array(initial.amplitudes).reshape((2,) * n)
    for gate in c.gates:
        kernels.apply_gate(psi, gate, n)
    return DenseState(psi.reshape(-1), n)


def unitary(c: Circuit) -> np.ndarray:
    """
    Dense unitary of a measurement-free circuit, column k is the image of |k>
    """
    check_size(c, UNITARY_QUBIT_CAP)
    if c.has_measurements():
        raise MeasurementError("[unitary] circuit contains MEASURE/RESET")
    n = c.n_qubits
    dim = 1 << n
    psi = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for gate in c.gates:
        kernels.apply_gate(psi, gate, n)
    return psi.reshape(dim, dim)


def _deterministic_outcome(prob1: float, gate_text: str) -> int:
    if prob1 <= DETERMINISTIC_TOL:
        return 0
    if prob1 >= 1 - DETERMINISTIC_TOL:
        return 1
    raise MeasurementError(f"[phase_marginal] {gate_text} is not deterministic (p1={prob1:.3e})")


def run_deterministic(c: Circuit, stop: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Noiseless run up to gate `stop`, requiring every MEASURE/RESET on the way to be deterministic.
    Returns (state tensor, classical bits).
    """
    check_size(c)
    n = c.n_qubits
    psi = kernels.zero_state(n)
    cbits = np.zeros(c.n_cbits, dtype=np.int8)
    gates = c.gates if stop is None else c.gates[:stop]
    for gate in gates:
        if gate.kind in ("MEASURE", "RESET"):
            q = gate.qubits[0]
            p1 = kernels.prob_one(psi, q, n)
            outcome = _deterministic_outcome(p1, gate.to_text())
            kernels.project(psi, q, n, outcome, p1 if outcome else 1 - p1)
            if gate.kind == "MEASURE":
                cbits[gate.cbit] = outcome
            elif outcome:
                kernels.apply_x(psi, q, n)
        else:
            kernels.apply_gate(psi, gate, n)
    return psi, cbits


def phase_marginal(c: Circuit) -> np.ndarray:
    """
    Exact Born probabilities of the phase readout x = sum_j m_j 2^j.
    Mid-circuit MEASURE/RESET must be deterministic; the trailing readout block is marginalised.
    """
    phase = phase_register(c)
    stop = terminal_start(c)
    psi, _ = run_deterministic(c, stop)
    n = c.n_qubits
    # qubit feeding each phase bit, from the trailing readout
    source = {}
    for gate in c.gates[stop:]:
        if gate.kind == "MEASURE" and phase.start <= gate.cbit < phase.start + phase.size:
            source[gate.cbit - phase.start] = gate.qubits[0]
    if len(source) != phase.size:
        raise MeasurementError(f"[phase_marginal] only {len(source)} of {phase.size} phase bits are read out "
                               f"in the trailing block")
    probs = np.abs(psi) ** 2
    qubits = [source[j] for j in range(phase.size)]
    keep = [kernels.axis_of(q, n) for q in qubits]
    drop = tuple(ax for ax in range(n) if ax not in keep)
    marginal = probs.sum(axis=drop)
    # remaining axes are in increasing axis order; reorder to (m_{M-1}, ..., m_0)
    order = sorted(keep)
    marginal = np.transpose(marginal, [order.index(kernels.axis_of(qubits[j], n))
                                       for j in reversed(range(phase.size))])
    out = marginal.reshape(-1)
    total = out.sum()
    if abs(total - 1) > NORM_TOL:
        raise MeasurementError(f"[phase_marginal] probabilities sum to {total:.12f}")
    logger.info("[phase_marginal] %d outcomes, argmax %d", out.size, int(np.argmax(out)))
    return out / total


def strip_mid_measurements(c: Circuit) -> Circuit:
    """
    Same circuit with every MEASURE/RESET before the trailing readout removed
    """
    stop = terminal_start(c)
    out = c.empty_like()
    for index, gate in enumerate(c.gates):
        if index < stop and gate.kind in ("MEASURE", "RESET"):
            continue
        out.add(gate)
    return out
