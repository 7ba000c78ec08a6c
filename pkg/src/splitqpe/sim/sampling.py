import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..circuit import Circuit
from ..const import CONTROLLED_NOISE_WEIGHT, DETERMINISTIC_TOL, NOISE_WEIGHT
from ..errors import CircuitError
from . import kernels
from .statevector import NoiseConfig, ShotRecord, check_size, ed_registers, record_from_cbits, terminal_start

logger = logging.getLogger(__name__)


def shot_generator(seed: int, shot: int) -> np.random.Generator:
    """
    Counter-based stream of one shot; independent of how shots are scheduled
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shot])))


def noise_weight(gate) -> int:
    if gate.control is not None:
        return CONTROLLED_NOISE_WEIGHT
    return NOISE_WEIGHT.get(gate.kind, 0)


@dataclass
class _Checkpoint:
    index: int
    psi: np.ndarray
    cbits: np.ndarray


@dataclass
class _Reference:
    """
    Noiseless prefix shared by every shot
    - random_from: first gate whose outcome needs randomness (terminal start if none)
    - checkpoints: states before selected gate indices, ascending
    - cdf: cumulative readout distribution when random_from is the terminal block
    """
    random_from: int
    checkpoints: List[_Checkpoint] = field(default_factory=list)
    cbits: Optional[np.ndarray] = None
    cdf: Optional[np.ndarray] = None


class TrajectorySampler:
    """
    Per-shot trajectory simulation with mid-circuit MEASURE/RESET, a depolarising
    channel after multi-qubit gates and readout flips.

    Every shot draws from its own generator in a fixed order: gate errors, readout
    flips, then measurement outcomes. Deterministic measurements consume no randomness,
    so resuming a shot from a shared noiseless checkpoint gives the same result as
    simulating it from the start.
    """

    def __init__(self, circuit: Circuit, noise: Optional[NoiseConfig] = None, checkpoint_every: int = 32):
        check_size(circuit)
        self.circuit = circuit
        self.noise = noise if noise is not None and noise.active else None
        self.checkpoint_every = max(1, checkpoint_every)
        self.n = circuit.n_qubits
        self.gates = circuit.gates
        self.stop = terminal_start(circuit)
        self.noisy_gates = [i for i in range(self.stop) if noise_weight(self.gates[i]) > 0]
        self.measured_cbits = sorted({g.cbit for g in self.gates if g.kind == "MEASURE"})
        self.terminal_reads = [(g.qubits[0], g.cbit) for g in self.gates[self.stop:] if g.kind == "MEASURE"]
        if self.noise is not None:
            weights = np.array([noise_weight(self.gates[i]) for i in self.noisy_gates], dtype=float)
            self.fail_probs = 1 - (1 - self.noise.p2) ** weights
        self._reference: Optional[_Reference] = None

    # noiseless prefix

    def _build_reference(self) -> _Reference:
        n = self.n
        psi = kernels.zero_state(n)
        cbits = np.zeros(self.circuit.n_cbits, dtype=np.int8)
        checkpoints = []
        for index in range(self.stop):
            if index % self.checkpoint_every == 0:
                checkpoints.append(_Checkpoint(index, psi.copy(), cbits.copy()))
            gate = self.gates[index]
            if gate.kind in ("MEASURE", "RESET"):
                p1 = kernels.prob_one(psi, gate.qubits[0], n)
                if DETERMINISTIC_TOL < p1 < 1 - DETERMINISTIC_TOL:
                    checkpoints.append(_Checkpoint(index, psi.copy(), cbits.copy()))
                    logger.debug("[TrajectorySampler::_build_reference] random outcome at gate %d", index)
                    return _Reference(index, checkpoints)
                self._collapse(psi, cbits, gate, int(p1 >= 0.5), p1)
            else:
                kernels.apply_gate(psi, gate, n)
        checkpoints.append(_Checkpoint(self.stop, psi.copy(), cbits.copy()))
        return _Reference(self.stop, checkpoints, cbits, self._cdf(psi))

    @property
    def reference(self) -> _Reference:
        if self._reference is None:
            self._reference = self._build_reference()
        return self._reference

    # one trajectory

    def _collapse(self, psi: np.ndarray, cbits: np.ndarray, gate, outcome: int, p1: float):
        q = gate.qubits[0]
        kernels.project(psi, q, self.n, outcome, p1 if outcome else 1 - p1)
        if gate.kind == "MEASURE":
            cbits[gate.cbit] = outcome
        elif outcome:
            kernels.apply_x(psi, q, self.n)

    def _measure(self, psi, cbits, gate, rng: np.random.Generator):
        p1 = kernels.prob_one(psi, gate.qubits[0], self.n)
        if p1 <= DETERMINISTIC_TOL:
            outcome = 0
        elif p1 >= 1 - DETERMINISTIC_TOL:
            outcome = 1
        else:
            outcome = int(rng.random() < p1)
        self._collapse(psi, cbits, gate, outcome, p1)

    @staticmethod
    def _cdf(psi: np.ndarray) -> np.ndarray:
        cdf = np.cumsum(np.abs(psi.reshape(-1)) ** 2)
        return cdf / cdf[-1]

    def _read_terminal(self, cdf: np.ndarray, cbits: np.ndarray, rng: np.random.Generator):
        if not self.terminal_reads:
            return
        index = int(np.searchsorted(cdf, rng.random(), side="right"))
        index = min(index, cdf.size - 1)
        for qubit, cbit in self.terminal_reads:
            cbits[cbit] = (index >> qubit) & 1

    def _draw_errors(self, rng: np.random.Generator) -> Dict[int, List[Tuple[int, str]]]:
        if self.noise is None or self.noise.p2 == 0 or not self.noisy_gates:
            return {}
        hits = np.flatnonzero(rng.random(len(self.noisy_gates)) < self.fail_probs)
        errors = {}
        for k in hits:
            index = self.noisy_gates[k]
            qubits = self.gates[index].all_qubits
            code = int(rng.integers(1, 4 ** len(qubits)))
            errors[index] = [(q, kernels.PAULI_DIGITS[(code >> (2 * m)) & 3])
                             for m, q in enumerate(qubits) if (code >> (2 * m)) & 3]
        return errors

    def run_shot(self, seed: int, shot: int) -> ShotRecord:
        rng = shot_generator(seed, shot)
        errors = self._draw_errors(rng)
        flips = None
        if self.noise is not None and self.noise.pm > 0:
            flips = rng.random(len(self.measured_cbits)) < self.noise.pm
        ref = self.reference
        first_error = min(errors) if errors else math.inf
        if first_error >= self.stop and ref.random_from == self.stop:
            cbits = ref.cbits.copy()
            self._read_terminal(ref.cdf, cbits, rng)
        else:
            cbits = self._resume(min(first_error, ref.random_from), errors, rng)
        if flips is not None:
            for cbit, flip in zip(self.measured_cbits, flips):
                if flip:
                    cbits[cbit] ^= 1
        return record_from_cbits(self.circuit, cbits, shot)

    def _resume(self, start: int, errors, rng: np.random.Generator) -> np.ndarray:
        checkpoint = None
        for cp in self.reference.checkpoints:
            if cp.index <= start:
                checkpoint = cp
        psi, cbits = checkpoint.psi.copy(), checkpoint.cbits.copy()
        for index in range(checkpoint.index, self.stop):
            gate = self.gates[index]
            if gate.kind in ("MEASURE", "RESET"):
                self._measure(psi, cbits, gate, rng)
                continue
            kernels.apply_gate(psi, gate, self.n)
            for qubit, letter in errors.get(index, ()):
                kernels.apply_pauli(psi, qubit, letter, self.n)
        self._read_terminal(self._cdf(psi), cbits, rng)
        return cbits


def sample(c: Circuit, shots: int, noise: Optional[NoiseConfig] = None,
           seed: Optional[int] = None) -> List[ShotRecord]:
    if shots < 1:
        raise CircuitError(f"[sample] shots must be >= 1, got {shots}")
    if seed is None:
        seed = noise.seed if noise is not None else 0
    sampler = TrajectorySampler(c, noise)
    records = [sampler.run_shot(seed, shot) for shot in range(shots)]
    logger.info("[sample] %d shots, %d flagged", shots, sum(r.flagged for r in records))
    return records


@dataclass(frozen=True)
class FilterStats:
    """
    Post-selection summary
    - raw_peak / filtered_peak: modal phase-bitstring share before / after filtering
    - retention: retained fraction of shots
    - empty: True when every shot was flagged (filtered_peak is then None)
    """
    raw_peak: float
    filtered_peak: Optional[float]
    retention: float
    raw_modal: int
    filtered_modal: Optional[int]

    @property
    def empty(self) -> bool:
        return self.filtered_peak is None


def _modal(records: List[ShotRecord]) -> Tuple[int, float]:
    counts: Dict[int, int] = {}
    for r in records:
        counts[r.value] = counts.get(r.value, 0) + 1
    best = min(counts, key=lambda v: (-counts[v], v))
    return best, counts[best] / len(records)


def filter_records(records: List[ShotRecord]) -> Tuple[List[ShotRecord], FilterStats]:
    """
    Keep shots whose reference / fan-out checks all returned zero
    """
    if not records:
        raise CircuitError("[filter_records] no shots to filter")
    retained = [r for r in records if not r.flagged]
    raw_modal, raw_peak = _modal(records)
    if not retained:
        logger.warning("[filter_records] every shot was flagged, nothing retained")
        return [], FilterStats(raw_peak, None, 0.0, raw_modal, None)
    filtered_modal, filtered_peak = _modal(retained)
    return retained, FilterStats(raw_peak, filtered_peak, len(retained) / len(records),
                                 raw_modal, filtered_modal)


def round_failure_fractions(records: List[ShotRecord], c: Circuit) -> List[float]:
    """
    Fraction of shots with a nonzero bit in each error-detection register, in circuit order
    """
    if not records:
        raise CircuitError("[round_failure_fractions] no shots")
    fractions = []
    offset = 0
    for reg in ed_registers(c):
        bad = sum(1 for r in records if "1" in r.ed_bits[offset:offset + reg.size])
        fractions.append(bad / len(records))
        offset += reg.size
    return fractions


def rounds_nondecreasing(fractions: List[float], shots: int, sigmas: float = 3.0) -> bool:
    """
    True when no round's failure fraction dips below the previous one by more than
    `sigmas` binomial standard errors
    """
    for a, b in zip(fractions, fractions[1:]):
        sigma = math.sqrt(max(a * (1 - a), 1 / shots) / shots)
        if b < a - sigmas * sigma:
            return False
    return True


def band_scores(records: List[ShotRecord], expected: np.ndarray) -> np.ndarray:
    """
    |observed - expected| per phase value, in multinomial standard errors
    sigma_k = sqrt(max(p_k (1 - p_k), 1/N) / N)
    """
    if not records:
        raise CircuitError("[band_scores] no shots")
    p = np.asarray(expected, dtype=float)
    shots = len(records)
    counts = np.bincount([r.value for r in records], minlength=p.size)
    if counts.size != p.size:
        raise CircuitError(f"[band_scores] phase value {counts.size - 1} outside {p.size} bins")
    sigma = np.sqrt(np.maximum(p * (1 - p), 1 / shots) / shots)
    return np.abs(counts / shots - p) / sigma
