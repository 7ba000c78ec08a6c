"""
Resource scan over a double-factorized Hamiltonian:

    truncate to L factors -> tau = pi / Lambda_L -> M grid bits -> Trotter number
    -> per-rotation T cost -> QPE and SE-QPE totals and gains
"""
import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..const import EPS_CHEM, TROTTER_ORDER, TS_DELTA_REF, TS_N_REF, TS_TAU_REF, TS_XI
from ..costs import METRICS, CostVector, total
from ..errors import ResourceModelError
from . import primitives as prim
from .model import QPE, SE_QPE, StepCosts, block_cost, gain_formulas, step_costs

logger = logging.getLogger(__name__)


@dataclass
class DFSpec:
    """
    Double-factorized coefficients
    - n: spin orbitals
    - alphas: one-body Z coefficients, N values (Ha)
    - betas: L symmetric N x N matrices; only i > j entries are used (Ha)
    - spin_block: basis rotations act separately on the two spin sectors
    """
    n: int
    alphas: List[float]
    betas: List[List[List[float]]]
    spin_block: bool = False

    def __post_init__(self):
        if len(self.alphas) != self.n:
            raise ResourceModelError(f"[DFSpec] {len(self.alphas)} alphas for N={self.n}")
        if not self.betas:
            raise ResourceModelError("[DFSpec] at least one beta factor is required")
        for l, beta in enumerate(self.betas):
            if np.shape(beta) != (self.n, self.n):
                raise ResourceModelError(f"[DFSpec] beta factor {l} has shape {np.shape(beta)}, expected {(self.n, self.n)}")

    @property
    def l(self) -> int:
        return len(self.betas)

    def factor_norms(self) -> np.ndarray:
        """
        sum_{i>j} |beta_ij^(l)| per factor
        """
        tri = np.tril_indices(self.n, k=-1)
        return np.array([np.abs(np.asarray(beta, dtype=float)[tri]).sum() for beta in self.betas])

    def save(self, save_path: str):
        with open(save_path, "w") as f:
            json.dump(asdict(self), f, indent=4)

    @classmethod
    def load(cls, load_path: str) -> "DFSpec":
        with open(load_path, "r") as f:
            data = json.load(f)
        try:
            return cls(int(data["n"]), list(data["alphas"]), list(data["betas"]), bool(data.get("spin_block", False)))
        except KeyError as e:
            raise ResourceModelError(f"[DFSpec::load] missing field {e} in {load_path}")


@dataclass
class ScanConfig:
    """
    - eps_chem: total error budget, split evenly over truncation, Trotter, synthesis and grid
    - xi, delta_ref, n_ref, tau_ref: Trotter-number heuristic and its calibration point
    - trotter_order: 1 or 2
    - swap: "cat" or "serial" CSWAP layers for SE-QPE
    """
    eps_chem: float = EPS_CHEM
    xi: float = TS_XI
    delta_ref: float = TS_DELTA_REF
    n_ref: int = TS_N_REF
    tau_ref: float = TS_TAU_REF
    trotter_order: int = TROTTER_ORDER
    swap: str = "cat"

    def __post_init__(self):
        if self.eps_chem <= 0 or self.delta_ref <= 0 or self.tau_ref <= 0:
            raise ResourceModelError("[ScanConfig] error budgets and calibration values must be positive")
        if self.swap not in ("cat", "serial"):
            raise ResourceModelError(f"[ScanConfig] swap must be 'cat' or 'serial', got {self.swap!r}")

    @property
    def eps_part(self) -> float:
        return self.eps_chem / 4

    eps_trunc = eps_ts = eps_synth = eps_grid = eps_part


def lambda_norm(spec: DFSpec, l_retained: Optional[int] = None) -> float:
    """
    Lambda_L = sum_i |alpha_i| + sum_{l <= L} sum_{i>j} |beta_ij^(l)|
    """
    l_retained = spec.l if l_retained is None else l_retained
    if not 0 <= l_retained <= spec.l:
        raise ResourceModelError(f"[lambda_norm] L={l_retained} outside [0, {spec.l}]")
    return float(np.abs(spec.alphas).sum() + spec.factor_norms()[:l_retained].sum())


def truncate(spec: DFSpec, eps_trunc: float) -> int:
    """
    Smallest L >= 1 whose discarded norm is at most eps_trunc
    """
    full = lambda_norm(spec)
    for l in range(1, spec.l + 1):
        if full - lambda_norm(spec, l) <= eps_trunc:
            return l
    raise ResourceModelError(f"[truncate] no L meets the truncation budget {eps_trunc}")


def c_ts(cfg: ScanConfig) -> float:
    return math.sqrt(cfg.delta_ref / cfg.tau_ref ** 3) / cfg.n_ref ** cfg.xi


def grid_bits(tau: float, eps_grid: float) -> int:
    return math.ceil(math.log2(math.pi / (eps_grid * tau))) + 1


def trotter_number(tau: float, n: int, cfg: ScanConfig) -> int:
    return math.ceil(c_ts(cfg) * tau * n ** cfg.xi / math.sqrt(cfg.eps_ts))


def t_eps_for(eps_rot: float) -> int:
    """
    T gates per synthesized rotation at precision eps_rot
    """
    if not 0 < eps_rot < 1:
        raise ResourceModelError(f"[t_eps_for] rotation precision must lie in (0, 1), got {eps_rot}")
    return math.ceil(3 * math.log2(1 / eps_rot) + 10)


@dataclass
class ResourceReport:
    """
    - totals: method -> CostVector with T entries at that method's t_eps
    - gains: metric -> SE-QPE / QPE
    - gains_closed_form: metric -> g formula value
    - t_eps / eps_rot: per method
    """
    n: int
    l_total: int
    l_retained: int
    lambda_l: float
    tau: float
    m: int
    k: int
    n_trot: int
    swap: str
    totals: Dict[str, CostVector] = field(default_factory=dict)
    gains: Dict[str, float] = field(default_factory=dict)
    gains_closed_form: Dict[str, float] = field(default_factory=dict)
    t_eps: Dict[str, int] = field(default_factory=dict)
    eps_rot: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)

    def save_json(self, save_path: str):
        with open(save_path, "w") as f:
            json.dump(self.to_dict(), f, indent=4, sort_keys=True)

    def rows(self) -> List[Dict]:
        return [{"N": self.n, "method": method, "metric": metric, "value": cost.get(metric)}
                for method, cost in self.totals.items() for metric in METRICS]

    def save_csv(self, save_path: str):
        with open(save_path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=["N", "method", "metric", "value"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.rows())


def _method_totals(m: int, steps: StepCosts, swap: CostVector, method: str) -> CostVector:
    if method == QPE:
        return total(*(block_cost(j, QPE, steps) for j in range(m)))
    return total(*(block_cost(j, SE_QPE, steps, swap) for j in range(m)))


def scan(spec: DFSpec, cfg: ScanConfig = ScanConfig()) -> ResourceReport:
    prim.check_even(spec.n, "scan")
    l_retained = truncate(spec, cfg.eps_trunc)
    lam = lambda_norm(spec, l_retained)
    if lam == 0:
        raise ResourceModelError("[scan] retained coefficient norm is zero")
    tau = math.pi / lam
    m = grid_bits(tau, cfg.eps_grid)
    n_trot = trotter_number(tau, spec.n, cfg)
    report = ResourceReport(spec.n, spec.l, l_retained, lam, tau, m, 2 ** m - 1, n_trot, cfg.swap)

    # rotation counts first (t_eps = 0), then the T entries per method
    base = step_costs(cfg.trotter_order, spec.n, l_retained, spec.spin_block, t_eps=0).scaled_by(n_trot)
    swap = prim.cswap_pair(spec.n, cat=cfg.swap == "cat")
    for method in (QPE, SE_QPE):
        rz_total = _method_totals(m, base, swap, method).rz_count
        eps_rot = tau * cfg.eps_synth / rz_total
        t_eps = t_eps_for(eps_rot)
        steps = step_costs(cfg.trotter_order, spec.n, l_retained, spec.spin_block, t_eps).scaled_by(n_trot)
        report.totals[method] = _method_totals(m, steps, swap, method)
        report.t_eps[method] = t_eps
        report.eps_rot[method] = eps_rot
    qpe, se = report.totals[QPE], report.totals[SE_QPE]
    report.gains = {metric: se.get(metric) / qpe.get(metric) for metric in METRICS if qpe.get(metric)}
    steps = step_costs(cfg.trotter_order, spec.n, l_retained, spec.spin_block,
                       report.t_eps[SE_QPE]).scaled_by(n_trot)
    report.gains_closed_form = gain_formulas(m, steps, swap)
    logger.info("[scan] N=%d L=%d/%d tau=%.4g M=%d n_trot=%d", spec.n, l_retained, spec.l, tau, m, n_trot)
    return report


def synthetic_dfspec(n: int, l: int, seed: int = 0, decay: float = 0.8,
                     alpha_scale: float = 0.5, beta_scale: float = 0.1, spin_block: bool = False) -> DFSpec:
    """
    Seeded random coefficients; factor l is scaled by decay**l
    """
    if l < 1:
        raise ResourceModelError(f"[synthetic_dfspec] L must be >= 1, got {l}")
    rng = np.random.default_rng(seed)
    alphas = (alpha_scale * rng.standard_normal(n)).tolist()
    betas = []
    for k in range(l):
        raw = beta_scale * decay ** k * rng.standard_normal((n, n))
        betas.append(((raw + raw.T) / 2).tolist())
    return DFSpec(n, alphas, betas, spin_block)


def sweep(n_values: Sequence[int], l_factor: int = 2, seed: int = 0, cfg: ScanConfig = ScanConfig(),
          spin_block: bool = False) -> List[Dict]:
    """
    One row per (N, method): CX and T counts and depths with the SE-QPE / QPE ratios
    """
    rows = []
    for n in n_values:
        report = scan(synthetic_dfspec(n, l_factor * n, seed, spin_block=spin_block), cfg)
        for method, cost in report.totals.items():
            rows.append({
                "N": n,
                "method": method,
                "L": report.l_retained,
                "M": report.m,
                "n_trot": report.n_trot,
                "cx_count": cost.cx_count,
                "cx_depth": cost.cx_depth,
                "t_count": cost.t_count,
                "t_depth": cost.t_depth,
                "cx_count_ratio": cost.cx_count / report.totals[QPE].cx_count,
                "cx_depth_ratio": cost.cx_depth / report.totals[QPE].cx_depth,
                "t_count_ratio": cost.t_count / report.totals[QPE].t_count,
                "t_depth_ratio": cost.t_depth / report.totals[QPE].t_depth,
            })
    return rows
