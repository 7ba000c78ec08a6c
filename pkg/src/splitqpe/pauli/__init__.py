from .algebra import PauliString, PauliSum, commutator, multiply, nested_commutator, vacuum_energy
from .dense import (DenseState, apply, eigensystem, equal_up_to_phase, exp_matrix, expectation,
                    index_to_label, label_to_index, to_matrix)
