"""
Analytic costs of the double-factorized Trotter building blocks under all-to-all connectivity.

Rotation-based rows carry T entries t_eps per synthesized rotation; the CSWAP layer
pairs carry the fixed Clifford+T cost of the CSWAP decomposition (T-count 7, T-depth 4).
"""
from typing import Dict

from ..const import CSWAP_CX, CSWAP_T, CSWAP_T_DEPTH
from ..costs import CostVector
from ..errors import ResourceModelError

W = "W"
U0 = "U0"
UL = "Ul"
CU0 = "cU0"
CUL = "cUl"
CSWAP_SERIAL = "cswap_serial"
CSWAP_CAT = "cswap_cat"

PRIMITIVES = (W, U0, UL, CU0, CUL, CSWAP_SERIAL, CSWAP_CAT)


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n > 1 else 0


def check_even(n: int, where: str):
    if n < 2 or n % 2:
        raise ResourceModelError(f"[{where}] N must be even and >= 2, got {n}")


def givens_network(n: int) -> CostVector:
    # N(N-1)/2 nearest-neighbour Givens rotations in 2N-3 parallel layers
    if n < 2:
        return CostVector()
    return CostVector(cx_count=n * (n - 1), rz_count=n * (n - 1),
                      cx_depth=4 * n - 6, rz_depth=2 * n - 3)


def spin_block_w(n: int) -> CostVector:
    """
    Basis rotation acting separately on the two spin sectors of N/2 orbitals each
    """
    half = givens_network(n // 2)
    return CostVector(cx_count=2 * half.cx_count, rz_count=2 * half.rz_count,
                      cx_depth=half.cx_depth, rz_depth=half.rz_depth)


def cswap_pair(n: int, cat: bool = False) -> CostVector:
    """
    Both CSWAP cascades of one gadget; with cat the N CSWAPs run in parallel behind a fan-out tree
    """
    swaps = 2 * n
    if not cat:
        return CostVector(cx_count=CSWAP_CX * swaps, t_count=CSWAP_T * swaps,
                          cx_depth=CSWAP_CX * swaps, t_depth=CSWAP_T_DEPTH * swaps)
    return CostVector(cx_count=CSWAP_CX * swaps + 2 * (n - 1), t_count=CSWAP_T * swaps,
                      cx_depth=2 * CSWAP_CX + 2 * ceil_log2(n), t_depth=2 * CSWAP_T_DEPTH)


def primitive_costs(n: int, spin_block: bool = False, t_eps: float = 1.0) -> Dict[str, CostVector]:
    check_even(n, "primitive_costs")
    w = spin_block_w(n) if spin_block else givens_network(n)
    rows = {
        W: w,
        U0: CostVector(rz_count=n, rz_depth=1),
        UL: CostVector(cx_count=n * (n - 1), rz_count=n * (n - 1) // 2,
                       cx_depth=2 * (n - 1), rz_depth=n - 1),
        CU0: CostVector(cx_count=2 * n, rz_count=2 * n, cx_depth=2 * n, rz_depth=2),
        CUL: CostVector(cx_count=2 * n * (n - 1), rz_count=n * (n - 1),
                        cx_depth=(n + 2) * (n - 1), rz_depth=2 * (n - 1)),
    }
    table = {name: cost.with_t(t_eps) for name, cost in rows.items()}
    table[CSWAP_SERIAL] = cswap_pair(n, cat=False)
    table[CSWAP_CAT] = cswap_pair(n, cat=True)
    return table
