from .ethylene import (PPPParams, TrotterSchedule, ansatz_circuit, ansatz_state, build_ppp, energies, ethylene_step,
                       hamiltonian, lambda_correction, optimal_angle, schedule, trotter_step_circuit)
from .runs import CU, QPE, RUN_METHODS, SE, EthyleneRun, build_circuit, exact_marginal
