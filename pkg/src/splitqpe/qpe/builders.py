import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from ..circuit import Circuit, Register
from ..circuit import gates as g
from ..circuit.compile import inverse_qft_gates, readout_gates
from ..circuit.gates import Gate
from ..const import CREG_ED_PREFIX, CREG_PHASE, REG_FANOUT, REG_PHASE, REG_SYSTEM_A, REG_SYSTEM_B
from ..errors import CircuitError, ConfigError
from ..pauli import PauliSum, vacuum_energy
from .gadgets import GadgetSpec, gadget_gates

logger = logging.getLogger(__name__)

CONTROLLED = "c"
GADGET = "g"


@dataclass(frozen=True)
class TimeStep:
    """
    One application of U(tau), in two compiled forms
    - step: U(tau) on N qubits
    - controlled: controlled-U(tau) on N+1 qubits, control on qubit N
    """
    step: Circuit
    controlled: Circuit

    def __post_init__(self):
        if self.controlled.n_qubits != self.step.n_qubits + 1:
            raise CircuitError(f"[TimeStep] controlled step has {self.controlled.n_qubits} qubits, "
                               f"expected {self.step.n_qubits + 1}")

    @classmethod
    def from_circuit(cls, step: Circuit) -> "TimeStep":
        """
        Derive the controlled form by adding a control to every gate
        """
        n = step.n_qubits
        widened = step.remap({k: k for k in range(n)}, n + 1)
        return cls(step, widened.controlled(n))

    @property
    def n(self) -> int:
        return self.step.n_qubits

    def power(self, times: int) -> Circuit:
        return self.step.repeat(times)


@dataclass(frozen=True)
class ReferencePhase:
    """
    Vacuum phase of one step, theta = (-tau E_vac / 2pi) mod 1 (turns)
    """
    theta: float
    e_vac: float
    tau: float

    def for_bit(self, j: int) -> float:
        return _turns((2 ** j) * self.theta)


def _turns(value: float) -> float:
    value = value % 1.0
    return 0.0 if value >= 1.0 else value


def reference_theta(h: PauliSum, tau: float) -> ReferencePhase:
    if tau <= 0:
        raise CircuitError(f"[reference_theta] tau must be positive, got {tau}")
    e_vac = vacuum_energy(h)
    return ReferencePhase(_turns(-tau * e_vac / (2 * math.pi)), e_vac, tau)


@dataclass(frozen=True)
class VariantPolicy:
    """
    Per-bit block choice for SE-QPE
    - choices: "c" (controlled steps) or "g" (gadget) for j = 0..M-1
    - cat: fan the gadget control out over N-1 ancillas
    - measure_reset: read out and reset the reference after every gadget
    """
    choices: str
    cat: bool = False
    measure_reset: bool = False

    def __post_init__(self):
        bad = set(self.choices) - {CONTROLLED, GADGET}
        if bad or not self.choices:
            raise ConfigError(f"[VariantPolicy] policy {self.choices!r} must be a non-empty string over 'c'/'g'")

    @classmethod
    def parse(cls, text: str, cat: bool = False, measure_reset: bool = False) -> "VariantPolicy":
        return cls(text.strip().lower(), cat, measure_reset)

    @classmethod
    def uniform(cls, m: int, choice: str = GADGET, cat: bool = False, measure_reset: bool = False) -> "VariantPolicy":
        return cls(choice * m, cat, measure_reset)

    @property
    def m(self) -> int:
        return len(self.choices)

    def choice(self, j: int) -> str:
        return self.choices[j]

    def gadget_bits(self) -> List[int]:
        return [j for j, ch in enumerate(self.choices) if ch == GADGET]

    @property
    def label(self) -> str:
        suffix = ("+cat" if self.cat else "") + ("+mr" if self.measure_reset else "")
        return self.choices + suffix


@dataclass
class QPELayout:
    """
    Register layout of a built phase-estimation circuit
    - phase: phase register, qubit j controls U^(2^j)
    - system_a: system lane (holds psi)
    - system_b: reference lane (SE-QPE only)
    - fanout: cat ancillas (cat SE-QPE only)
    - ed: error-detection classical registers in circuit order
    """
    m: int
    n: int
    phase: Register
    system_a: Register
    system_b: Optional[Register] = None
    fanout: Optional[Register] = None
    ed: List[Register] = field(default_factory=list)

    @property
    def n_qubits(self) -> int:
        regs = [self.phase, self.system_a, self.system_b, self.fanout]
        return sum(r.size for r in regs if r is not None)

    @property
    def qregs(self) -> List[Register]:
        return [r for r in (self.phase, self.system_a, self.system_b, self.fanout) if r is not None]

    @classmethod
    def of(cls, c: Circuit) -> "QPELayout":
        phase = c.qreg(REG_PHASE)
        system_a = c.qreg(REG_SYSTEM_A)
        return cls(phase.size, system_a.size, phase, system_a,
                   c.qreg(REG_SYSTEM_B) if c.has_qreg(REG_SYSTEM_B) else None,
                   c.qreg(REG_FANOUT) if c.has_qreg(REG_FANOUT) else None,
                   [r for r in c.cregs if r.name.startswith(CREG_ED_PREFIX)])


def qubit_budget(n: int, m: int, policy: Optional[VariantPolicy] = None) -> int:
    """
    N+M for canonical and compute-uncompute QPE, 2N+M for SE-QPE, plus N-1 fan-out qubits with cat
    """
    if policy is None:
        return n + m
    extra = n - 1 if policy.cat and policy.gadget_bits() and n > 1 else 0
    return 2 * n + m + extra


def _on(c: Circuit, reg: Register) -> List[Gate]:
    return [gate.remap({k: reg.start + k for k in range(c.n_qubits)}) for gate in c.gates]


def _controlled_power(step: TimeStep, times: int, control: int, system: Register) -> List[Gate]:
    mapping = {k: system.start + k for k in range(step.n)}
    mapping[step.n] = control
    block = [gate.remap(mapping) for gate in step.controlled.gates]
    return block * times


def _check(m: int, step: TimeStep, *preps: Optional[Circuit]):
    if m < 1:
        raise CircuitError(f"M must be >= 1, got {m}")
    for prep in preps:
        if prep is not None and prep.n_qubits != step.n:
            raise CircuitError(f"state preparation acts on {prep.n_qubits} qubits, step on {step.n}")


def _finish(c: Circuit, phase: Register):
    c.extend(inverse_qft_gates(phase.indices))
    c.extend(readout_gates(phase.indices, c.creg(CREG_PHASE).start))


def canonical_qpe(m: int, step: TimeStep, psi_prep: Circuit, prepare_phase: bool = True) -> Circuit:
    """
    Textbook QPE: phase qubit j controls U(tau)^(2^j), built from the controlled step
    """
    _check(m, step, psi_prep)
    n = step.n
    phase = Register(REG_PHASE, 0, m)
    system = Register(REG_SYSTEM_A, m, n)
    c = Circuit(m + n, m, [phase, system], [Register(CREG_PHASE, 0, m)])
    c.extend(_on(psi_prep, system))
    if prepare_phase:
        c.extend(g.h(q) for q in phase.indices)
    for j in range(m):
        c.extend(_controlled_power(step, 2 ** j, phase[j], system))
    _finish(c, phase)
    logger.info("[canonical_qpe] M=%d N=%d, %d gates", m, n, len(c))
    return c


def gadget_spec_for_bit(step: TimeStep, j: int, theta_ref: ReferencePhase, policy: VariantPolicy) -> GadgetSpec:
    """
    Balanced split U_A = U_B = U^(2^(j-1)) for j >= 1; at j = 0 the unbalanced U_A = I, U_B = U
    """
    if j == 0:
        ua, ub = Circuit(step.n), step.power(1)
    else:
        ua = ub = step.power(2 ** (j - 1))
    return GadgetSpec(ua, ub, theta_ref.for_bit(j), policy.cat, policy.measure_reset)


def se_qpe(m: int, step: TimeStep, psi_prep: Circuit, ref_prep: Circuit, policy: VariantPolicy,
           theta_ref: ReferencePhase, prepare_phase: bool = True) -> Circuit:
    """
    Split-evolution QPE. Bits marked "g" use the CSWAP gadget against the reference
    lane, bits marked "c" use the controlled step. Reference and fan-out checks land in
    "ed_r{j}" registers after every gadget (measure/reset) or in one final "ed" register.
    """
    _check(m, step, psi_prep, ref_prep)
    if policy.m != m:
        raise ConfigError(f"[se_qpe] policy {policy.choices!r} covers {policy.m} bits, M={m}")
    n = step.n
    gadget_bits = policy.gadget_bits()
    phase = Register(REG_PHASE, 0, m)
    lane_a = Register(REG_SYSTEM_A, m, n)
    lane_b = Register(REG_SYSTEM_B, m + n, n)
    qregs = [phase, lane_a, lane_b]
    fanout = None
    if policy.cat and gadget_bits and n > 1:
        fanout = Register(REG_FANOUT, m + 2 * n, n - 1)
        qregs.append(fanout)
    ed_size = n + (fanout.size if fanout is not None else 0)

    cregs = [Register(CREG_PHASE, 0, m)]
    ed_by_bit = {}
    if policy.measure_reset:
        for j in gadget_bits:
            reg = Register(f"{CREG_ED_PREFIX}_r{j}", cregs[-1].start + cregs[-1].size, ed_size)
            ed_by_bit[j] = reg
            cregs.append(reg)
    elif gadget_bits:
        cregs.append(Register(CREG_ED_PREFIX, m, ed_size))
    n_cbits = cregs[-1].start + cregs[-1].size
    n_qubits = sum(r.size for r in qregs)

    c = Circuit(n_qubits, n_cbits, qregs, cregs)
    c.extend(_on(psi_prep, lane_a))
    c.extend(_on(ref_prep, lane_b))
    if prepare_phase:
        c.extend(g.h(q) for q in phase.indices)
    ref = ref_prep if ref_prep.gates else None
    for j in range(m):
        if policy.choice(j) == CONTROLLED:
            c.extend(_controlled_power(step, 2 ** j, phase[j], lane_a))
        else:
            spec = gadget_spec_for_bit(step, j, theta_ref, policy)
            c.extend(gadget_gates(spec, phase[j], lane_a, lane_b, fanout, ed_by_bit.get(j), ref))
    final_check = gadget_bits and not policy.measure_reset
    if final_check and ref is not None:
        c.extend(_on(ref.inverse(), lane_b))
    _finish(c, phase)
    if final_check:
        ed = c.creg(CREG_ED_PREFIX)
        checked = lane_b.indices + (fanout.indices if fanout is not None else [])
        c.extend(g.measure(q, ed[k]) for k, q in enumerate(checked))
    logger.info("[se_qpe] M=%d N=%d policy=%s, %d qubits, %d gates", m, n, policy.label, n_qubits, len(c))
    return c


def cu_qpe(m: int, step: TimeStep, psi_prep: Circuit, theta_ref: ReferencePhase,
           prepare_phase: bool = True) -> Circuit:
    """
    Compute-uncompute QPE: the system stays in the vacuum, and each bit applies
    controlled-U_psi, U(tau)^(2^j), controlled-U_psi^dag and P(2^j Theta) on the control.
    Matches canonical QPE only when psi is an eigenstate of U(tau).
    """
    _check(m, step, psi_prep)
    n = step.n
    phase = Register(REG_PHASE, 0, m)
    system = Register(REG_SYSTEM_A, m, n)
    c = Circuit(m + n, m, [phase, system], [Register(CREG_PHASE, 0, m)])
    if prepare_phase:
        c.extend(g.h(q) for q in phase.indices)
    widened = psi_prep.remap({k: k for k in range(n)}, n + 1)
    prep_c = widened.controlled(n)
    unprep_c = widened.inverse().controlled(n)
    for j in range(m):
        mapping = {k: system.start + k for k in range(n)}
        mapping[n] = phase[j]
        c.extend(gate.remap(mapping) for gate in prep_c.gates)
        c.extend(_on(step.power(2 ** j), system))
        c.extend(gate.remap(mapping) for gate in unprep_c.gates)
        c.add(g.phase(phase[j], theta_ref.for_bit(j)))
    _finish(c, phase)
    logger.info("[cu_qpe] M=%d N=%d, %d gates", m, n, len(c))
    return c


def layout_summary(c: Circuit) -> dict:
    layout = QPELayout.of(c)
    return {
        "M": layout.m,
        "N": layout.n,
        "qubits": c.n_qubits,
        "registers": {r.name: [r.start, r.size] for r in layout.qregs},
        "ed_registers": [r.name for r in layout.ed],
    }


def bitwise_policies(m: int) -> Sequence[str]:
    """
    The M+1 threshold policies c..cg..g, from all-controlled to all-gadget
    """
    return [CONTROLLED * k + GADGET * (m - k) for k in range(m, -1, -1)]
