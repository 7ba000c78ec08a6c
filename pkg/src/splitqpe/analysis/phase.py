"""
Phase readout post-processing: bitstring -> energy with branch selection,
peak statistics and distribution comparisons.

A readout value x on M bits is the phase phi = x / 2^M of exp(-i tau E), so

    E^(b) = -(2 pi / tau)(phi + b),    resolution pi / (2^M tau)
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from ..errors import DistributionError
from ..sim.export import empirical_distribution
from ..sim.sampling import filter_records
from ..sim.statevector import ShotRecord

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class EnergyEstimate:
    phi: float
    branch: int
    energy: float
    resolution: float


def resolution(m: int, tau: float) -> float:
    return math.pi / (2 ** m * tau)


def phase_to_energy(x: int, m: int, tau: float, branch: int = 0) -> EnergyEstimate:
    if not 0 <= x < 2 ** m:
        raise DistributionError(f"[phase_to_energy] readout {x} outside [0, {2 ** m})")
    if tau <= 0:
        raise DistributionError(f"[phase_to_energy] tau must be positive, got {tau}")
    phi = x / 2 ** m
    energy = -(2 * math.pi / tau) * (phi + branch)
    return EnergyEstimate(phi, branch, energy, resolution(m, tau))


def select_branch(e_ref: float, tau: float, phi: float) -> int:
    """
    b = floor(-E_ref tau / 2pi - phi + 1/2), the branch whose energy is closest to e_ref
    """
    if tau <= 0:
        raise DistributionError(f"[select_branch] tau must be positive, got {tau}")
    return math.floor(-e_ref * tau / (2 * math.pi) - phi + 0.5)


def energy_to_phase(energy: float, tau: float) -> float:
    return (-energy * tau / (2 * math.pi)) % 1.0


def nearest_grid_index(phi: float, m: int) -> int:
    return int(round(phi * 2 ** m)) % (2 ** m)


@dataclass(frozen=True)
class PeakStats:
    """
    - modal: most frequent readout value (lowest value on ties)
    - modal_share: its probability
    - window_share: probability within one grid bin of the target phase (None without a target)
    """
    modal: int
    modal_share: float
    window_share: Optional[float] = None


def _as_distribution(data: Union[np.ndarray, Sequence[ShotRecord]], m: Optional[int]) -> Tuple[np.ndarray, int]:
    if isinstance(data, np.ndarray):
        if data.size == 0:
            raise DistributionError("[peak_stats] empty distribution")
        return data, int(data.size).bit_length() - 1
    if not data:
        raise DistributionError("[peak_stats] no shots")
    m = len(data[0].phase_bits) if m is None else m
    return empirical_distribution(list(data), m), m


def peak_stats(data: Union[np.ndarray, Sequence[ShotRecord]], target_phi: Optional[float] = None,
               m: Optional[int] = None) -> PeakStats:
    """
    Modal readout and its share; with target_phi, the share of the 3-bin window around it
    """
    probs, m = _as_distribution(data, m)
    modal = int(np.argmax(probs))
    window = None
    if target_phi is not None:
        centre = nearest_grid_index(target_phi, m)
        window = float(sum(probs[(centre + d) % probs.size] for d in (-1, 0, 1)))
    return PeakStats(modal, float(probs[modal]), window)


def _check_normalized(p: np.ndarray, name: str):
    total = float(np.sum(p))
    if abs(total - 1) > NORMALIZATION_TOL:
        raise DistributionError(f"[distribution_distance] {name} sums to {total:.12f}")
    if np.any(p < -NORMALIZATION_TOL):
        raise DistributionError(f"[distribution_distance] {name} has negative entries")


def distribution_distance(p: np.ndarray, q: np.ndarray) -> float:
    """
    Total-variation distance (1/2) sum |p - q|
    """
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DistributionError(f"[distribution_distance] support sizes differ: {p.shape} vs {q.shape}")
    _check_normalized(p, "p")
    _check_normalized(q, "q")
    return 0.5 * float(np.abs(p - q).sum())


def eigenphases(u: np.ndarray, psi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenphases (turns in [0, 1)) of a unitary and the weights |<v_k|psi>|^2 of psi on its eigenvectors.
    The complex Schur form of a normal matrix is diagonal with a unitary basis, so degenerate
    eigenvalues still give orthonormal eigenvectors.
    """
    t, z = linalg.schur(u, output="complex")
    phases = (np.angle(np.diag(t)) / (2 * math.pi)) % 1.0
    weights = np.abs(z.conj().T @ psi) ** 2
    return phases, weights


def ideal_qpe_distribution(phases: Sequence[float], weights: Sequence[float], m: int) -> np.ndarray:
    """
    Readout distribution of textbook QPE with M bits for an input spread over eigenphases (turns)
    """
    dim = 2 ** m
    y = np.arange(dim)
    x = np.arange(dim)
    out = np.zeros(dim)
    for phi, w in zip(phases, weights):
        if w == 0:
            continue
        amps = np.exp(2j * math.pi * np.outer(y, phi - x / dim)).sum(axis=0) / dim
        out += w * np.abs(amps) ** 2
    return out


def stats_summary(m: int, tau: float, e_ref: float, distribution: Optional[np.ndarray] = None,
                  records: Optional[List[ShotRecord]] = None) -> Dict:
    """
    Modal readout, raw/filtered shares, retention and the energy of the modal value.
    Exactly one of `distribution` and `records` is given.
    """
    if (distribution is None) == (records is None):
        raise DistributionError("[stats_summary] pass either a distribution or shot records")
    if distribution is not None:
        raw = peak_stats(distribution)
        modal, share_raw, share_filtered, retention = raw.modal, raw.modal_share, raw.modal_share, 1.0
    else:
        _, fstats = filter_records(records)
        share_raw, share_filtered, retention = fstats.raw_peak, fstats.filtered_peak, fstats.retention
        modal = fstats.raw_modal if fstats.empty else fstats.filtered_modal
    phi = modal / 2 ** m
    estimate = phase_to_energy(modal, m, tau, select_branch(e_ref, tau, phi))
    logger.info("[stats_summary] modal %d -> E = %.6f Ha", modal, estimate.energy)
    return {
        "modal": modal,
        "modal_bits": format(modal, f"0{m}b"),
        "modal_share_raw": share_raw,
        "modal_share_filtered": share_filtered,
        "retention": retention,
        "branch": estimate.branch,
        "energy": estimate.energy,
        "resolution": estimate.resolution,
    }
