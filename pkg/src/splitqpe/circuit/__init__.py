from .circuit import Circuit, Register, compose, identity
from .compile import (controlled_pauli_exp, givens, inverse_qft, pauli_exp, readout_gates,
                      sum_exp_gates)
from .gates import Gate
from .metrics import GATE_CLASSES, CircuitGraphBuilder, count, depth, summary
