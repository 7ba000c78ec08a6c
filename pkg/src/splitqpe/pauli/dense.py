"""
Dense-matrix oracle for small registers.

Conventions shared by the whole package:
- little-endian: qubit 0 is the least significant bit of a basis index
- |0> is the +1 eigenstate of Z
- ket labels such as "1010" list qubit 0 first
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import linalg

from ..const import DENSE_QUBIT_CAP, HERMITIAN_TOL, NORM_TOL
from ..errors import DenseCapError, SplitQPEError
from .algebra import PauliString, PauliSum

logger = logging.getLogger(__name__)


def _check_cap(n: int, where: str):
    if n > DENSE_QUBIT_CAP:
        raise DenseCapError(f"[{where}] {n} qubits exceeds the dense cap of {DENSE_QUBIT_CAP}")
    if n < 0:
        raise SplitQPEError(f"[{where}] negative qubit count {n}")


def _masks(term: PauliString) -> Tuple[int, int, int]:
    x_mask = z_mask = n_y = 0
    for qubit, letter in term.ops:
        if letter in ("X", "Y"):
            x_mask |= 1 << qubit
        if letter in ("Z", "Y"):
            z_mask |= 1 << qubit
        if letter == "Y":
            n_y += 1
    return x_mask, z_mask, n_y


def _term_action(term: PauliString, index: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    For output basis indices `index`, return (source indices, factors) with
    (P v)[index] = factors * v[source].
    """
    x_mask, z_mask, n_y = _masks(term)
    source = index ^ x_mask
    parity = np.bitwise_count(source & z_mask).astype(np.int64) & 1
    signs = 1 - 2 * parity
    return source, term.coeff * (1j ** n_y) * signs


@dataclass(frozen=True)
class DenseState:
    """
    Normalised statevector
    - amplitudes: complex vector of length 2**n
    - n: qubit count
    """
    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 1 << self.n:
            raise SplitQPEError(f"[DenseState] {amps.size} amplitudes for {self.n} qubits")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zeros(cls, n: int) -> "DenseState":
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        return cls(amps, n)

    @classmethod
    def from_bitstring(cls, label: str) -> "DenseState":
        return cls.from_kets({label: 1.0})

    @classmethod
    def from_kets(cls, kets: dict) -> "DenseState":
        """
        Superposition of labelled kets, normalised, e.g. {"1010": 1, "0101": 1}
        """
        labels = list(kets)
        n = len(labels[0])
        amps = np.zeros(1 << n, dtype=complex)
        for label, amp in kets.items():
            if len(label) != n or set(label) - {"0", "1"}:
                raise SplitQPEError(f"[DenseState::from_kets] bad ket label {label!r}")
            amps[label_to_index(label)] += amp
        return cls(amps / np.linalg.norm(amps), n)

    @classmethod
    def from_vector(cls, vector, normalize: bool = False) -> "DenseState":
        vec = np.asarray(vector, dtype=complex).reshape(-1)
        n = int(vec.size).bit_length() - 1
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(vec, n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1) <= tol

    def overlap(self, other: "DenseState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def amplitude(self, label: str) -> complex:
        return complex(self.amplitudes[label_to_index(label)])


def label_to_index(label: str) -> int:
    return sum(1 << k for k, bit in enumerate(label) if bit == "1")


def index_to_label(index: int, n: int) -> str:
    return "".join("1" if (index >> k) & 1 else "0" for k in range(n))


def to_matrix(h: PauliSum, n: int) -> np.ndarray:
    _check_cap(n, "to_matrix")
    if h.num_qubits() > n:
        raise SplitQPEError(f"[to_matrix] operator touches qubit {h.num_qubits() - 1} >= {n}")
    dim = 1 << n
    index = np.arange(dim)
    matrix = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        source, factors = _term_action(term, index)
        matrix[index, source] += factors
    return matrix


def apply(h: PauliSum, state: DenseState) -> np.ndarray:
    """
    h|state> as a raw vector (not renormalised)
    """
    _check_cap(state.n, "apply")
    index = np.arange(1 << state.n)
    out = np.zeros(1 << state.n, dtype=complex)
    for term in h.terms:
        source, factors = _term_action(term, index)
        out += factors * state.amplitudes[source]
    return out


def eigensystem(h: PauliSum, n: int) -> List[Tuple[float, DenseState]]:
    h.require_hermitian("eigensystem")
    matrix = to_matrix(h, n)
    energies, vectors = linalg.eigh(matrix)
    logger.debug("[eigensystem] %d eigenpairs, lowest %.9f", len(energies), energies[0])
    return [(float(e), DenseState(vectors[:, k], n)) for k, e in enumerate(energies)]


def expectation(h: PauliSum, state: DenseState) -> float:
    h.require_hermitian("expectation")
    if not state.is_normalized():
        raise SplitQPEError(f"[expectation] state norm {state.norm():.12f} is not 1")
    value = np.vdot(state.amplitudes, apply(h, state))
    if abs(value.imag) > NORM_TOL:
        raise SplitQPEError(f"[expectation] imaginary residue {value.imag:.3e}")
    return float(value.real)


def exp_matrix(h: PauliSum, n: int, t: float) -> np.ndarray:
    """
    exp(-i t h) as a dense matrix
    """
    return linalg.expm(-1j * t * to_matrix(h, n))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    """
    True when a = e^{i g} b for some global phase g
    """
    if a.shape != b.shape:
        return False
    flat_a, flat_b = a.reshape(-1), b.reshape(-1)
    pivot = int(np.argmax(np.abs(flat_b)))
    if abs(flat_b[pivot]) < tol:
        return bool(np.allclose(flat_a, 0, atol=tol))
    phase = flat_a[pivot] / flat_b[pivot]
    if abs(abs(phase) - 1) > 1e-8:
        return False
    return bool(np.allclose(flat_a, phase * flat_b, atol=tol, rtol=0))
