from .builders import (QPELayout, ReferencePhase, TimeStep, VariantPolicy, canonical_qpe, cu_qpe, qubit_budget,
                       reference_theta, se_qpe)
from .gadgets import GadgetSpec, cswap_gadget
