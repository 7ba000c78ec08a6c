"""
Compiled versions of the building blocks, for checking the analytic table against
the gate-level metric. Angles are arbitrary non-zero placeholders; only structure matters.
"""
import logging
from typing import List, Tuple

from ..circuit import Circuit, Register
from ..circuit import gates as g
from ..circuit.compile import givens_gates
from ..circuit.gates import Gate
from ..qpe.gadgets import fanout_gates, swap_controls
from .primitives import check_even

logger = logging.getLogger(__name__)

ANGLE = 0.1


def round_robin(n: int) -> List[List[Tuple[int, int]]]:
    """
    N-1 perfect matchings covering every pair once (circle method), qubit N-1 fixed.
    Pairs are (low, high) so the fixed qubit is always the rotation target.
    """
    check_even(n, "round_robin")
    rounds = []
    for r in range(n - 1):
        pairs = [(r, n - 1)]
        for k in range(1, n // 2):
            a, b = (r + k) % (n - 1), (r - k) % (n - 1)
            pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
    return rounds


def givens_triangle(qubits: List[int]) -> List[Gate]:
    """
    Sweep s rotates (p, p+1) for p = n-2 down to s; emitted by layer 2s + n-2-p
    """
    n = len(qubits)
    layered = []
    for s in range(n - 1):
        for p in range(n - 2, s - 1, -1):
            layered.append((2 * s + n - 2 - p, p))
    out = []
    for _, p in sorted(layered):
        local = givens_gates(p, ANGLE)
        out += [gate.remap({p: qubits[p], p + 1: qubits[p + 1]}) for gate in local]
    return out


def w_rotation(n: int) -> Circuit:
    return Circuit(n, gates=givens_triangle(list(range(n))))


def spin_block_w(n: int) -> Circuit:
    check_even(n, "spin_block_w")
    half = n // 2
    return Circuit(n, gates=givens_triangle(list(range(half))) + givens_triangle(list(range(half, n))))


def u0_kernel(n: int) -> Circuit:
    return Circuit(n, gates=[g.rz(q, ANGLE) for q in range(n)])


def ul_kernel(n: int) -> Circuit:
    # exp(-i t Z_i Z_j) = CX(i,j) Rz_j(2t) CX(i,j), one matching per layer pair
    c = Circuit(n)
    for pairs in round_robin(n):
        c.extend(g.cx(i, j) for i, j in pairs)
        c.extend(g.rz(j, ANGLE) for _, j in pairs)
        c.extend(g.cx(i, j) for i, j in pairs)
    return c


def cu0_kernel(n: int) -> Circuit:
    """
    Control on qubit n; exp(-i t |1><1|_a Z_i) = Rz_i(t) CX(a,i) Rz_i(-t) CX(a,i)
    """
    a = n
    c = Circuit(n + 1)
    for q in range(n):
        c.extend([g.cx(a, q), g.rz(q, -ANGLE), g.cx(a, q), g.rz(q, ANGLE)])
    return c


def cul_kernel(n: int) -> Circuit:
    """
    Control on qubit n; per matching the parity CXs run in parallel around the serial control section
    """
    a = n
    c = Circuit(n + 1)
    for pairs in round_robin(n):
        c.extend(g.cx(i, j) for i, j in pairs)
        for _, j in pairs:
            c.extend([g.cx(a, j), g.rz(j, -ANGLE), g.cx(a, j), g.rz(j, ANGLE)])
        c.extend(g.cx(i, j) for i, j in pairs)
    return c


def cswap_pair(n: int, cat: bool = False) -> Circuit:
    """
    CSWAP cascade and its mirror between two N-qubit lanes; control on qubit 0
    """
    lane_a = Register("systemA", 1, n)
    lane_b = Register("systemB", 1 + n, n)
    fanout = Register("fanout", 1 + 2 * n, n - 1) if cat and n > 1 else None
    n_qubits = 1 + 2 * n + (fanout.size if fanout is not None else 0)
    spread = fanout_gates(0, fanout) if fanout is not None else []
    controls = swap_controls(0, n, fanout)
    cascade = [g.cswap(controls[i], lane_a[i], lane_b[i]) for i in range(n)]
    return Circuit(n_qubits, gates=spread + cascade + cascade[::-1] + spread[::-1])


COMPILED = {
    "W": w_rotation,
    "U0": u0_kernel,
    "Ul": ul_kernel,
    "cU0": cu0_kernel,
    "cUl": cul_kernel,
}
