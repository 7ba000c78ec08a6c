"""
CSWAP interference gadget S_U.

    S_U = |0><0| (x) (U_A^dag (x) U_B) + e^{2 pi i theta} |1><1| (x) (U_B (x) U_A^dag)

Lane A carries the system state, lane B the reference. With the cat option the
control is copied onto a fan-out register so that every CSWAP of the cascade has
its own control; with measure/reset the reference and fan-out qubits are read out
and returned to the reference state after the block.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

from ..circuit import Circuit, Register
from ..circuit import gates as g
from ..circuit.gates import Gate
from ..const import CREG_ED_PREFIX, REG_FANOUT, REG_SYSTEM_A, REG_SYSTEM_B
from ..errors import CircuitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GadgetSpec:
    """
    - ua: U_A on N qubits, applied inverted to lane A
    - ub: U_B on N qubits, applied to lane B
    - theta: phase on the control, in turns
    - use_cat: fan the control out over N-1 ancillas
    - measure_reset: read out and reset reference and fan-out after the block
    """
    ua: Circuit
    ub: Circuit
    theta: float = 0.0
    use_cat: bool = False
    measure_reset: bool = False

    def __post_init__(self):
        if self.ua.n_qubits != self.ub.n_qubits:
            raise CircuitError(f"[GadgetSpec] U_A acts on {self.ua.n_qubits} qubits, U_B on {self.ub.n_qubits}")
        if self.ua.has_measurements() or self.ub.has_measurements():
            raise CircuitError("[GadgetSpec] U_A and U_B must be measurement free")

    @property
    def n(self) -> int:
        return self.ua.n_qubits

    @property
    def ed_size(self) -> int:
        return self.n + (self.n - 1 if self.use_cat else 0)


def _on(c: Circuit, reg: Register) -> List[Gate]:
    mapping = {k: reg.start + k for k in range(c.n_qubits)}
    return [gate.remap(mapping) for gate in c.gates]


def fanout_gates(control: int, fanout: Register) -> List[Gate]:
    """
    Doubling CX tree copying `control` onto the fan-out register, depth ceil(log2(size+1))
    """
    holders = [control]
    remaining = fanout.indices
    out = []
    while remaining:
        fresh = []
        for h in holders:
            if not remaining:
                break
            t = remaining.pop(0)
            out.append(g.cx(h, t))
            fresh.append(t)
        holders += fresh
    return out


def swap_controls(control: int, n: int, fanout: Optional[Register]) -> List[int]:
    if fanout is None:
        return [control] * n
    return [control] + fanout.indices


def gadget_gates(spec: GadgetSpec, control: int, lane_a: Register, lane_b: Register,
                 fanout: Optional[Register] = None, ed: Optional[Register] = None,
                 ref_prep: Optional[Circuit] = None) -> List[Gate]:
    n = spec.n
    if lane_a.size != n or lane_b.size != n:
        raise CircuitError(f"[cswap_gadget] lanes {lane_a.size}/{lane_b.size} do not match N={n}")
    if control in lane_a.indices or control in lane_b.indices:
        raise CircuitError(f"[cswap_gadget] control {control} lies in a system register")
    if spec.use_cat and n > 1 and (fanout is None or fanout.size != n - 1):
        raise CircuitError(f"[cswap_gadget] cat option needs a fan-out register of {n - 1} qubits")
    if spec.measure_reset and (ed is None or ed.size != spec.ed_size):
        raise CircuitError(f"[cswap_gadget] measure/reset needs {spec.ed_size} classical bits")

    fan = fanout if spec.use_cat and n > 1 else None
    spread = fanout_gates(control, fan) if fan is not None else []
    controls = swap_controls(control, n, fan)
    cascade = [g.cswap(controls[i], lane_a[i], lane_b[i]) for i in range(n)]

    touched = [control] + lane_a.indices + lane_b.indices + (fan.indices if fan is not None else [])
    out = [g.barrier(*touched)]
    out += spread + cascade
    out += _on(spec.ua.inverse(), lane_a) + _on(spec.ub, lane_b)
    out.append(g.phase(control, spec.theta))
    out += cascade[::-1] + spread[::-1]
    out.append(g.barrier(*touched))
    if spec.measure_reset:
        out += _measure_reset(lane_b, fan, ed, ref_prep)
    return out


def _measure_reset(lane_b: Register, fan: Optional[Register], ed: Register,
                   ref_prep: Optional[Circuit]) -> List[Gate]:
    out = []
    if ref_prep is not None:
        out += _on(ref_prep.inverse(), lane_b)
    checked = lane_b.indices + (fan.indices if fan is not None else [])
    out += [g.measure(q, ed[k]) for k, q in enumerate(checked)]
    out += [g.reset(q) for q in checked]
    if ref_prep is not None:
        out += _on(ref_prep, lane_b)
    return out


def cswap_gadget(spec: GadgetSpec) -> Circuit:
    """
    Stand-alone gadget: control on qubit 0, lane A on 1..N, lane B on N+1..2N,
    fan-out after (cat option), classical register "ed" (measure/reset option)
    """
    n = spec.n
    lane_a = Register(REG_SYSTEM_A, 1, n)
    lane_b = Register(REG_SYSTEM_B, 1 + n, n)
    qregs = [Register("control", 0, 1), lane_a, lane_b]
    fanout = None
    if spec.use_cat and n > 1:
        fanout = Register(REG_FANOUT, 1 + 2 * n, n - 1)
        qregs.append(fanout)
    ed = Register(CREG_ED_PREFIX, 0, spec.ed_size) if spec.measure_reset else None
    n_qubits = 1 + 2 * n + (n - 1 if fanout is not None else 0)
    c = Circuit(n_qubits, ed.size if ed else 0, qregs, [ed] if ed else [])
    c.extend(gadget_gates(spec, 0, lane_a, lane_b, fanout, ed))
    logger.debug("[cswap_gadget] N=%d cat=%s mr=%s, %d gates", n, spec.use_cat, spec.measure_reset, len(c))
    return c
