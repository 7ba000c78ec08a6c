"""
Four-spin-orbital PPP model of ethylene.

Spin orbitals (1u, 2u, 1d, 2d) map to qubits 0..3; under Jordan-Wigner the
hopping part becomes XX+YY pairs and the interactions become ZZ couplings.
The constant shift c_tot is reporting-only: it is a global phase in every circuit.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy import linalg

from ..circuit import Circuit
from ..circuit import gates as g
from ..circuit.compile import sum_exp_gates
from ..const import (DEGENERATE_TOL, MEAN_FIELD_ANGLE, PPP_ALPHA, PPP_BETA1, PPP_BETA2, PPP_C_TOT,
                     SECTOR_11_LABELS)
from ..errors import DegenerateStateError, SplitQPEError
from ..qpe.builders import TimeStep
from ..pauli import DenseState, PauliSum, commutator, eigensystem, expectation, to_matrix, vacuum_energy
from ..sim import evolve

logger = logging.getLogger(__name__)

N_QUBITS = 4


@dataclass(frozen=True)
class PPPParams:
    alpha: float = PPP_ALPHA
    beta1: float = PPP_BETA1
    beta2: float = PPP_BETA2
    c_tot: float = PPP_C_TOT


@dataclass(frozen=True)
class TrotterSchedule:
    """
    Bias-corrected symmetric splitting exp(-i s1 H1) exp(-i s2 H2) exp(-i s1 H1)
    - tau: step time (1/Ha)
    - s1: tau/2 + lam * tau**3
    - s2: tau, so the vacuum phase comes out exact
    - lam: bias correction (Ha^2)
    - m: phase bits the schedule is paired with
    """
    tau: float
    s1: float
    s2: float
    lam: float
    m: int

    @property
    def resolution(self) -> float:
        return math.pi / (2 ** self.m * self.tau)


def build_ppp(params: PPPParams = PPPParams()) -> Tuple[PauliSum, PauliSum]:
    a, b1, b2 = params.alpha, params.beta1, params.beta2
    h1 = PauliSum.from_pairs([
        (a, "X0 X1"), (a, "Y0 Y1"),
        (a, "X2 X3"), (a, "Y2 Y3"),
    ])
    h2 = PauliSum.from_pairs([
        (b1, "Z0 Z3"), (b1, "Z1 Z2"),
        (b2, "Z0 Z2"), (b2, "Z1 Z3"),
    ])
    return h1, h2


def hamiltonian(params: PPPParams = PPPParams()) -> PauliSum:
    h1, h2 = build_ppp(params)
    return h1 + h2


def ansatz_circuit(theta: float) -> Circuit:
    """
    (cos t/sqrt2)(|1010>+|0101>) + (sin t/sqrt2)(|0110>+|1001>)
    """
    return Circuit(N_QUBITS, gates=[
        g.h(0),
        g.ry(2, 2 * theta),
        g.cx(0, 2),
        g.cx(0, 1),
        g.cx(2, 3),
        g.x(1),
        g.x(3),
    ])


def ansatz_state(theta: float) -> DenseState:
    return evolve(ansatz_circuit(theta))


def mean_field_state() -> DenseState:
    return ansatz_state(MEAN_FIELD_ANGLE)


def vacuum_state() -> DenseState:
    return DenseState.zeros(N_QUBITS)


def triplet_state() -> DenseState:
    # S=1, M_S=0 combination of the two open-shell determinants
    return DenseState.from_kets({"0110": 1.0, "1001": -1.0})


def optimal_angle(params: PPPParams = PPPParams()) -> float:
    """
    Ansatz angle of the exact singlet ground state, tan(2t) = 2 alpha / (beta2 - beta1), 0 < t <= pi
    """
    return 0.5 * (math.atan2(2 * params.alpha, params.beta2 - params.beta1) + math.pi)


def ground_state(params: PPPParams = PPPParams()) -> Tuple[float, DenseState]:
    energy, state = eigensystem(hamiltonian(params), N_QUBITS)[0]
    return energy, state


def energies(params: PPPParams = PPPParams()) -> Dict[str, float]:
    h = hamiltonian(params)
    spectrum = eigensystem(h, N_QUBITS)
    e_s0 = spectrum[0][0]
    e_t0 = expectation(h, triplet_state())
    return {
        "E_S0": e_s0,
        "E_S0_MF": expectation(h, mean_field_state()),
        "E_T0": e_t0,
        "E_vac": vacuum_energy(h),
        "Delta_ST": e_t0 - e_s0,
    }


def error_hamiltonian(params: PPPParams = PPPParams()) -> PauliSum:
    """
    Leading symmetric-splitting error term (1/24)[H1,[H1,H2]] - (1/12)[H2,[H2,H1]]
    """
    h1, h2 = build_ppp(params)
    return commutator(h1, commutator(h1, h2)).scale(1 / 24) - commutator(h2, commutator(h2, h1)).scale(1 / 12)


def lambda_correction(psi: DenseState, params: PPPParams = PPPParams()) -> float:
    h1, _ = build_ppp(params)
    denominator = expectation(h1, psi)
    if abs(denominator) <= DEGENERATE_TOL:
        raise DegenerateStateError(f"[lambda_correction] <H1> = {denominator:.3e}; "
                                   f"the state has no hopping component")
    numerator = expectation(error_hamiltonian(params), psi)
    lam = -0.5 * numerator / denominator
    logger.debug("[lambda_correction] <dH>=%.9g <H1>=%.9g lambda=%.9g", numerator, denominator, lam)
    return lam


def schedule(tau: float, m: int, lam: float = 0.0) -> TrotterSchedule:
    if tau <= 0:
        raise SplitQPEError(f"[schedule] tau must be positive, got {tau}")
    if m < 1:
        raise SplitQPEError(f"[schedule] M must be >= 1, got {m}")
    return TrotterSchedule(tau=tau, s1=tau / 2 + lam * tau ** 3, s2=tau, lam=lam, m=m)


def trotter_step_circuit(sched: TrotterSchedule, params: PPPParams = PPPParams(),
                         control: Optional[int] = None) -> Circuit:
    """
    One step on qubits 0..3; with `control` (normally 4) every exponential is controlled
    """
    h1, h2 = build_ppp(params)
    n = N_QUBITS if control is None else max(N_QUBITS, control + 1)
    gates = sum_exp_gates(h1, sched.s1, control) + sum_exp_gates(h2, sched.s2, control) \
        + sum_exp_gates(h1, sched.s1, control)
    return Circuit(n, gates=gates)


def ethylene_step(sched: TrotterSchedule, params: PPPParams = PPPParams()) -> TimeStep:
    return TimeStep(trotter_step_circuit(sched, params), trotter_step_circuit(sched, params, control=N_QUBITS))


def trotter_unitary(sched: TrotterSchedule, params: PPPParams = PPPParams()) -> np.ndarray:
    h1, h2 = build_ppp(params)
    half = linalg.expm(-1j * sched.s1 * to_matrix(h1, N_QUBITS))
    middle = linalg.expm(-1j * sched.s2 * to_matrix(h2, N_QUBITS))
    return half @ middle @ half


def exact_unitary(tau: float, params: PPPParams = PPPParams()) -> np.ndarray:
    return linalg.expm(-1j * tau * to_matrix(hamiltonian(params), N_QUBITS))


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2 * math.pi) - math.pi


def ground_phase_error(sched: TrotterSchedule, params: PPPParams = PPPParams()) -> float:
    """
    |phase of the Trotter eigenvalue nearest exp(-i tau E0) + tau E0|, in radians
    """
    e0, _ = ground_state(params)
    target = -sched.tau * e0
    phases = np.angle(np.linalg.eigvals(trotter_unitary(sched, params)))
    return min(abs(_wrap(p - target)) for p in phases)


def singlet_basis() -> np.ndarray:
    """
    Columns |a> = (|1010>+|0101>)/sqrt2 and |b> = (|0110>+|1001>)/sqrt2
    """
    a = DenseState.from_kets({SECTOR_11_LABELS[0]: 1, SECTOR_11_LABELS[1]: 1})
    b = DenseState.from_kets({SECTOR_11_LABELS[2]: 1, SECTOR_11_LABELS[3]: 1})
    return np.stack([a.amplitudes, b.amplitudes], axis=1)


def trotter_eigen_angle(sched: TrotterSchedule, params: PPPParams = PPPParams()) -> float:
    """
    Ansatz angle whose state is an eigenvector of the Trotter product (the ground-like one).
    The singlet pair spans an invariant subspace and the product is complex symmetric,
    so the eigenvector is real up to a phase.
    """
    basis = singlet_basis()
    block = basis.conj().T @ trotter_unitary(sched, params) @ basis
    _, vectors = np.linalg.eig(block)
    theta_star = optimal_angle(params)
    target = np.array([math.cos(theta_star), math.sin(theta_star)])
    best = max(range(2), key=lambda k: abs(np.vdot(target, vectors[:, k])))
    v = vectors[:, best]
    pivot = int(np.argmax(np.abs(v)))
    v = (v * abs(v[pivot]) / v[pivot]).real
    return math.atan2(v[1], v[0])
