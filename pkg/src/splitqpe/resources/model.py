"""
Per-step composition, per-bit block costs, totals, gain ratios and breakeven bits.

For a phase register of M bits (K = 2^M - 1 applications of U in total):

    QPE     block j: counts 2^j R c          depths 2^j r d
    SE-QPE  block j: counts 2^j c + c_swap   depths 2^(j-1) d + d_swap (j > 0), d + d_swap (j = 0)

where c, d are the uncontrolled per-U costs and R, r the control overhead ratios.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from ..circuit import metrics
from ..const import MAX_BREAKEVEN_BIT
from ..costs import COUNT_METRICS, DEPTH_METRICS, METRICS, CostVector, total
from ..errors import ResourceModelError
from ..models.ethylene import PPPParams, ethylene_step, schedule
from ..qpe.gadgets import GadgetSpec, cswap_gadget
from . import primitives as prim

logger = logging.getLogger(__name__)

QPE = "QPE"
SE_QPE = "SE-QPE"
CAT_SE_QPE = "cat-SE-QPE"
METHODS = (QPE, SE_QPE, CAT_SE_QPE)


@dataclass(frozen=True)
class StepCosts:
    """
    - plain: cost of one U
    - controlled: cost of one controlled U
    """
    plain: CostVector
    controlled: CostVector

    def ratio(self, metric: str) -> float:
        base = self.plain.get(metric)
        if base == 0:
            raise ResourceModelError(f"[StepCosts] {metric} of the uncontrolled step is zero")
        return self.controlled.get(metric) / base

    def scaled_by(self, factor: int) -> "StepCosts":
        return StepCosts(self.plain * factor, self.controlled * factor)


def _check_order(order: int):
    if order not in (1, 2):
        raise ResourceModelError(f"Trotter order must be 1 or 2, got {order}")


def _check_l(l: int):
    if l < 1:
        raise ResourceModelError(f"at least one retained factor is needed, got L={l}")


def step_cost(order: int, n: int, l: int, controlled: bool = False, spin_block: bool = False,
              t_eps: float = 1.0) -> CostVector:
    """
    U1 = (L+2) W + U0 + L U_l,  U2 = 2(L+1) W + 2 U0 + (2L-1) U_l;
    controlled steps keep W uncontrolled and control only the diagonal kernels
    """
    _check_order(order)
    _check_l(l)
    table = prim.primitive_costs(n, spin_block, t_eps)
    u0 = table[prim.CU0] if controlled else table[prim.U0]
    ul = table[prim.CUL] if controlled else table[prim.UL]
    if order == 1:
        return total(table[prim.W] * (l + 2), u0, ul * l)
    return total(table[prim.W] * (2 * (l + 1)), u0 * 2, ul * (2 * l - 1))


def step_costs(order: int, n: int, l: int, spin_block: bool = False, t_eps: float = 1.0) -> StepCosts:
    return StepCosts(step_cost(order, n, l, False, spin_block, t_eps),
                     step_cost(order, n, l, True, spin_block, t_eps))


def closed_form_step(order: int, n: int, l: int, controlled: bool = False, t_eps: float = 1.0) -> CostVector:
    """
    Per-step polynomials in N and L for the dense basis rotation
    """
    _check_order(order)
    _check_l(l)
    prim.check_even(n, "closed_form_step")
    N, L = n, l
    if order == 1 and not controlled:
        cx, cx_d = 2 * L * N * N + 2 * N * N - 2 * L * N - 2 * N, 6 * L * N + 8 * N - 8 * L - 12
        rz, rz_d = 3 * L * N * (N - 1) // 2 + 2 * N * N - N, 3 * L * N + 4 * N - 4 * L - 5
    elif order == 1:
        cx, cx_d = 3 * L * N * N + 2 * N * N - 3 * L * N, L * N * N + 5 * L * N + 10 * N - 8 * L - 12
        rz, rz_d = 2 * L * N * N + 2 * N * N - 2 * L * N, 4 * L * N + 4 * N - 5 * L - 4
    elif not controlled:
        cx, cx_d = 4 * L * N * N + N * N - 4 * L * N - N, 12 * L * N + 6 * N - 16 * L - 10
        rz, rz_d = 3 * L * N * (N - 1) + N * (3 * N + 1) // 2, 6 * L * N + 3 * N - 8 * L - 3
    else:
        cx = 6 * L * N * N - 6 * L * N + 4 * N
        cx_d = 2 * L * N * N - N * N + 10 * L * N + 11 * N - 16 * L - 10
        rz, rz_d = 4 * L * N * N + N * N - 4 * L * N + 3 * N, 8 * L * N - 10 * L + 2 * N
    return CostVector(cx_count=cx, rz_count=rz, cx_depth=cx_d, rz_depth=rz_d).with_t(t_eps)


def overhead_ratios(n: int, l: int, order: int = 1, spin_block: bool = False) -> Dict[str, float]:
    """
    R_CX, R_Rz (counts) and r_CX, r_Rz (depths) of the controlled over the plain step
    """
    if l <= n:
        logger.warning("[overhead_ratios] L=%d <= N=%d is outside the leading-order regime", l, n)
    costs = step_costs(order, n, l, spin_block)
    return {
        "R_CX": costs.ratio("cx_count"),
        "R_Rz": costs.ratio("rz_count"),
        "r_CX": costs.ratio("cx_depth"),
        "r_Rz": costs.ratio("rz_depth"),
    }


def block_cost(j: int, method: str, step: StepCosts, swap: Optional[CostVector] = None) -> CostVector:
    if j < 0:
        raise ResourceModelError(f"[block_cost] bit index must be >= 0, got {j}")
    if method not in METHODS:
        raise ResourceModelError(f"[block_cost] unknown method {method!r}, expected one of {METHODS}")
    if method == QPE:
        return step.controlled * (2 ** j)
    if swap is None:
        raise ResourceModelError(f"[block_cost] {method} needs the CSWAP pair cost")
    values = {}
    for m in COUNT_METRICS:
        values[m] = (2 ** j) * step.plain.get(m) + swap.get(m)
    for m in DEPTH_METRICS:
        lanes = step.plain.get(m) if j == 0 else (2 ** (j - 1)) * step.plain.get(m)
        values[m] = lanes + swap.get(m)
    return CostVector(**values)


def breakeven_bit(step: StepCosts, swap: CostVector, metric: str) -> Optional[int]:
    """
    Smallest j at which the gadget block is strictly cheaper than the controlled block, None if never
    """
    c, cc, s = step.plain.get(metric), step.controlled.get(metric), swap.get(metric)
    if metric in COUNT_METRICS:
        if cc <= c:
            return None
        for j in range(MAX_BREAKEVEN_BIT + 1):
            if (2 ** j) * (cc - c) > s:
                return j
        return None
    if (cc - c) > s:
        return 0
    for j in range(1, MAX_BREAKEVEN_BIT + 1):
        if (2 ** (j - 1)) * (2 * cc - c) > s:
            return j
    return None


def policy_totals(m: int, step: StepCosts, swap: CostVector, policy: str) -> CostVector:
    """
    Exact totals of a per-bit policy string ("c" controlled, "g" gadget), e.g. "ccggg"
    """
    if len(policy) != m or set(policy) - {"c", "g"}:
        raise ResourceModelError(f"[policy_totals] policy {policy!r} does not describe {m} bits")
    return total(*(block_cost(j, QPE if ch == "c" else SE_QPE, step, swap) for j, ch in enumerate(policy)))


def gain_formulas(m: int, step: StepCosts, swap: CostVector) -> Dict[str, float]:
    """
    g_count = (1/R)(1 + (M/K) c_swap/c),  g_depth = (1/2r)(1 + 1/K + (2M/K) d_swap/d)
    """
    k = 2 ** m - 1
    gains = {}
    for metric in COUNT_METRICS:
        c = step.plain.get(metric)
        if c == 0:
            continue
        gains[metric] = (1 + (m / k) * swap.get(metric) / c) / step.ratio(metric)
    for metric in DEPTH_METRICS:
        d = step.plain.get(metric)
        if d == 0:
            continue
        gains[metric] = (1 + 1 / k + (2 * m / k) * swap.get(metric) / d) / (2 * step.ratio(metric))
    return gains


def totals_and_gains(m: int, step: StepCosts, swap: CostVector) -> Dict:
    """
    Exact per-bit sums for QPE and SE-QPE, their quotients, and the closed-form gain ratios
    """
    if m < 1:
        raise ResourceModelError(f"[totals_and_gains] M must be >= 1, got {m}")
    qpe = total(*(block_cost(j, QPE, step) for j in range(m)))
    se = total(*(block_cost(j, SE_QPE, step, swap) for j in range(m)))
    exact = {metric: se.get(metric) / qpe.get(metric) for metric in METRICS if qpe.get(metric)}
    return {
        "M": m,
        "K": 2 ** m - 1,
        QPE: qpe,
        SE_QPE: se,
        "gains": exact,
        "gains_closed_form": gain_formulas(m, step, swap),
    }


def ethylene_crossover(max_j: int = 5, t_eps: float = 1.0) -> List[Dict]:
    """
    Per-bit CX count and depth of controlled blocks against serial and cat gadgets,
    measured on the compiled ethylene step (tau = 10, M = max_j + 1)
    """
    step = ethylene_step(schedule(10.0, max_j + 1), PPPParams())
    rows = []
    for j in range(max_j + 1):
        controlled = metrics.summary(step.controlled.repeat(2 ** j), t_eps)
        if j == 0:
            ua, ub = step.power(0), step.power(1)
        else:
            ua = ub = step.power(2 ** (j - 1))
        serial = metrics.summary(cswap_gadget(GadgetSpec(ua, ub)), t_eps)
        cat = metrics.summary(cswap_gadget(GadgetSpec(ua, ub, use_cat=True)), t_eps)
        rows.append({
            "j": j,
            "qpe_cx_count": controlled.cx_count,
            "se_cx_count": serial.cx_count,
            "cat_cx_count": cat.cx_count,
            "qpe_cx_depth": controlled.cx_depth,
            "se_cx_depth": serial.cx_depth,
            "cat_cx_depth": cat.cx_depth,
        })
    return rows
