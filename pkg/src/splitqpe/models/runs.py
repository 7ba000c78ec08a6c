"""
Ethylene phase-estimation runs: one description -> schedule, compiled step and circuit.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..circuit import Circuit
from ..const import MEAN_FIELD_ANGLE
from ..errors import ConfigError
from ..pauli import expectation
from ..qpe import VariantPolicy, canonical_qpe, cu_qpe, reference_theta, se_qpe
from ..qpe.builders import TimeStep
from ..sim import phase_marginal
from .ethylene import (N_QUBITS, PPPParams, TrotterSchedule, ansatz_circuit, ansatz_state,
                       ethylene_step, hamiltonian, lambda_correction, schedule)

logger = logging.getLogger(__name__)

QPE = "qpe"
SE = "se"
CU = "cu"
RUN_METHODS = (QPE, SE, CU)


@dataclass(frozen=True)
class EthyleneRun:
    """
    - method: "qpe", "se" or "cu"
    - policy: per-bit "c"/"g" string for SE-QPE, all gadgets when None
    - theta: input ansatz angle, mean-field when None
    - bias_correction: take lambda from the input state instead of 0
    """
    method: str = SE
    m: int = 5
    tau: float = 10.0
    policy: Optional[str] = None
    cat: bool = False
    measure_reset: bool = False
    theta: Optional[float] = None
    bias_correction: bool = True
    params: PPPParams = PPPParams()

    def __post_init__(self):
        if self.method not in RUN_METHODS:
            raise ConfigError(f"[EthyleneRun] method must be one of {RUN_METHODS}, got {self.method!r}")

    @property
    def input_angle(self) -> float:
        return MEAN_FIELD_ANGLE if self.theta is None else self.theta

    def variant_policy(self) -> VariantPolicy:
        if self.policy is None:
            return VariantPolicy.uniform(self.m, cat=self.cat, measure_reset=self.measure_reset)
        return VariantPolicy.parse(self.policy, self.cat, self.measure_reset)

    def schedule(self) -> TrotterSchedule:
        lam = lambda_correction(ansatz_state(self.input_angle), self.params) if self.bias_correction else 0.0
        return schedule(self.tau, self.m, lam)

    def step(self) -> TimeStep:
        return ethylene_step(self.schedule(), self.params)

    def reference_energy(self) -> float:
        """
        Energy used for branch selection: the input state's expectation value
        """
        return expectation(hamiltonian(self.params), ansatz_state(self.input_angle))


def build_circuit(run: EthyleneRun, prepare_phase: bool = True) -> Circuit:
    step = run.step()
    psi_prep = ansatz_circuit(run.input_angle)
    theta_ref = reference_theta(hamiltonian(run.params), run.tau)
    if run.method == QPE:
        c = canonical_qpe(run.m, step, psi_prep, prepare_phase)
    elif run.method == CU:
        c = cu_qpe(run.m, step, psi_prep, theta_ref, prepare_phase)
    else:
        c = se_qpe(run.m, step, psi_prep, Circuit(N_QUBITS), run.variant_policy(), theta_ref, prepare_phase)
    logger.info("[build_circuit] %s M=%d tau=%g -> %d qubits", run.method, run.m, run.tau, c.n_qubits)
    return c


def exact_marginal(run: EthyleneRun) -> np.ndarray:
    return phase_marginal(build_circuit(run))
