import math

# ethylene PPP parameters (Ha), spin-orbital order (1u, 2u, 1d, 2d)
PPP_ALPHA = -0.055557
PPP_BETA1 = 0.067525
PPP_BETA2 = 0.104616
PPP_C_TOT = -0.347936

MEAN_FIELD_ANGLE = math.pi / 4
GROUND_ANGLE = 0.94648805

# ket labels of the (1,1) two-excitation sector, character k is qubit k
SECTOR_11_LABELS = ["1010", "0101", "0110", "1001"]

# size caps
DENSE_QUBIT_CAP = 14
STATEVECTOR_QUBIT_CAP = 24
UNITARY_QUBIT_CAP = 10

# numerical tolerances
COEFF_CUTOFF = 1e-15
HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10
DEGENERATE_TOL = 1e-12
DETERMINISTIC_TOL = 1e-12

# gate kinds
SINGLE_QUBIT_KINDS = ["H", "X", "S", "SDG", "RZ", "RY", "PHASE"]
ROTATION_KINDS = ["RZ", "RY", "PHASE"]
GATE_ARITY = {
    "H": 1,
    "X": 1,
    "S": 1,
    "SDG": 1,
    "RZ": 1,
    "RY": 1,
    "PHASE": 1,
    "CX": 2,
    "CCX": 3,
    "CSWAP": 3,
    "MEASURE": 1,
    "RESET": 1,
    "BARRIER": 0,
}

# decomposition constants used by the metrics, (cx, rz, t, cx_layers, t_layers)
CSWAP_CX = 7
CSWAP_T = 7
CSWAP_T_DEPTH = 4
CCX_CX = 6
CCX_T = 7
CCX_T_DEPTH = 3
CONTROLLED_COSTS = {
    "H": (1, 2),
    "X": (1, 0),
    "S": (2, 3),
    "SDG": (2, 3),
    "RZ": (2, 2),
    "RY": (2, 2),
    "PHASE": (2, 3),
}
# CX-equivalent weight of multi-qubit gates for the noise channel
NOISE_WEIGHT = {
    "CX": 1,
    "CCX": CCX_CX,
    "CSWAP": CSWAP_CX,
}
CONTROLLED_NOISE_WEIGHT = 2

# register names
REG_PHASE = "phase"
REG_SYSTEM_A = "systemA"
REG_SYSTEM_B = "systemB"
REG_FANOUT = "fanout"
CREG_PHASE = "phase"
CREG_ED_PREFIX = "ed"

# resource scan defaults
EPS_CHEM = 1.6e-3
TS_XI = 1.7
TS_DELTA_REF = 0.01630
TS_N_REF = 12
TS_TAU_REF = 1.0
TROTTER_ORDER = 2
MAX_BREAKEVEN_BIT = 62

OUTPUT_DIR_ENV = "SPLITQPE_OUTPUT_DIR"
