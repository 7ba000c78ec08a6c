"""
Acceptance suite. Each check is registered under a descriptive ID and returns
(passed, detail); `run_checks` executes the selected ones in registration order.
"""
import filecmp
import logging
import os
import tempfile
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from ..analysis import distribution_distance, peak_stats, phase_to_energy, resolution
from ..circuit import metrics
from ..errors import AcceptanceError, ConfigError
from ..models import CU, QPE, SE, EthyleneRun, build_circuit, energies, exact_marginal, lambda_correction, schedule
from ..models.ethylene import ground_state, mean_field_state, trotter_eigen_angle
from ..resources import closed_form_step, ethylene_crossover, primitive_costs, step_cost, step_costs, totals_and_gains
from ..resources import kernels
from ..resources import primitives as prim
from ..resources.scan import ScanConfig, c_ts
from ..sim import NoiseConfig, band_scores, filter_records, round_failure_fractions, rounds_nondecreasing, sample
from .commands import cmd_simulate
from .config import SimulateConfig, VerifyConfig

logger = logging.getLogger(__name__)

E_GS = -0.234282
E_VAC = 0.344282
E_T0 = -0.074182
DELTA_ST = 0.160100
ENERGY_TOL = 1e-6
MEAN_FIELD_OVERLAP = 0.97427
LAMBDA_MF = 0.00091716
S1_TAU10 = 5.917162
S1_TAU8 = 4.469587
C_TS = 0.00187
TVD_TOL = 1e-9

Check = Callable[["VerifyContext"], Tuple[bool, str]]


@dataclass(frozen=True)
class CheckSpec:
    id: str
    description: str
    run: Check


@dataclass(frozen=True)
class CheckResult:
    id: str
    passed: bool
    detail: str


@dataclass
class VerifyContext:
    cfg: VerifyConfig

    @property
    def params(self):
        return self.cfg.params()

    def shots(self, full: int, quick: int) -> int:
        return quick if self.cfg.quick else full

    def run(self, **kwargs) -> EthyleneRun:
        return EthyleneRun(params=self.params, **kwargs)


CHECKS: Dict[str, CheckSpec] = {}


def check(check_id: str, description: str):
    def register(fn: Check) -> Check:
        CHECKS[check_id] = CheckSpec(check_id, description, fn)
        return fn
    return register


def _close(value: float, target: float, tol: float) -> bool:
    return abs(value - target) <= tol


@check("ground-energies", "exact ground, vacuum and triplet energies and the singlet-triplet gap")
def _ground_energies(ctx: VerifyContext) -> Tuple[bool, str]:
    e = energies(ctx.params)
    got = [e["E_S0"], e["E_vac"], e["E_T0"], e["Delta_ST"]]
    want = [E_GS, E_VAC, E_T0, DELTA_ST]
    ok = all(_close(a, b, ENERGY_TOL) for a, b in zip(got, want))
    return ok, "E_S0={:.6f} E_vac={:.6f} E_T0={:.6f} gap={:.6f}".format(*got)


@check("mean-field-overlap", "ground-state weight of the mean-field ansatz")
def _mean_field_overlap(ctx: VerifyContext) -> Tuple[bool, str]:
    _, s0 = ground_state(ctx.params)
    overlap = abs(s0.overlap(mean_field_state())) ** 2
    return _close(overlap, MEAN_FIELD_OVERLAP, 1e-4), f"|<S0|MF>|^2={overlap:.5f}"


@check("lambda-correction", "bias correction from the mean-field state and the corrected half-step times")
def _lambda_correction(ctx: VerifyContext) -> Tuple[bool, str]:
    lam = lambda_correction(mean_field_state(), ctx.params)
    s1_10 = schedule(10.0, 5, lam).s1
    s1_8 = schedule(8.0, 6, lam).s1
    ok = abs(lam / LAMBDA_MF - 1) <= 1e-4 and _close(s1_10, S1_TAU10, 1e-5) and _close(s1_8, S1_TAU8, 1e-5)
    return ok, f"lambda={lam:.8f} s1(10)={s1_10:.6f} s1(8)={s1_8:.6f}"


@check("noiseless-modal-energy", "modal bitstring, energy and resolution of noiseless split-evolution QPE")
def _noiseless_modal_energy(ctx: VerifyContext) -> Tuple[bool, str]:
    details, ok = [], True
    for m, tau, x_want, e_want, res_want in ((5, 10.0, 12, -0.235619, 9.817477e-3),
                                              (6, 8.0, 19, -0.233165, 6.135923e-3)):
        run = ctx.run(method=SE, m=m, tau=tau)
        stats = peak_stats(exact_marginal(run))
        estimate = phase_to_energy(stats.modal, m, tau)
        ok &= stats.modal == x_want and _close(estimate.energy, e_want, ENERGY_TOL)
        ok &= _close(resolution(m, tau), res_want, 1e-9)
        details.append(f"M={m}: x={stats.modal} E={estimate.energy:.6f}")
    return ok, "; ".join(details)


@check("substitution-equivalence", "gadget variants reproduce the canonical QPE readout distribution")
def _substitution_equivalence(ctx: VerifyContext) -> Tuple[bool, str]:
    worst = 0.0
    cases = ((5, 10.0),) if ctx.cfg.quick else ((5, 10.0), (6, 8.0))
    for m, tau in cases:
        reference = exact_marginal(ctx.run(method=QPE, m=m, tau=tau))
        mixed = "cc" + "g" * (m - 2)
        variants = [dict(), dict(cat=True), dict(measure_reset=True), dict(cat=True, measure_reset=True),
                    dict(policy=mixed)]
        for extra in variants:
            p = exact_marginal(ctx.run(method=SE, m=m, tau=tau, **extra))
            worst = max(worst, distribution_distance(reference, p))
    return worst <= TVD_TOL, f"max TVD={worst:.2e}"


@check("cu-qpe-inequivalence", "compute-uncompute QPE differs off-eigenstate and agrees on an eigenstate")
def _cu_qpe_inequivalence(ctx: VerifyContext) -> Tuple[bool, str]:
    base = dict(m=6, tau=8.0, bias_correction=False)
    off = dict(base, theta=0.2)
    qpe = exact_marginal(ctx.run(method=QPE, **off))
    tvd_cu = distribution_distance(qpe, exact_marginal(ctx.run(method=CU, **off)))
    tvd_se = distribution_distance(qpe, exact_marginal(ctx.run(method=SE, **off)))
    theta_star = trotter_eigen_angle(schedule(8.0, 6), ctx.params)
    on = dict(base, theta=theta_star)
    tvd_eig = distribution_distance(exact_marginal(ctx.run(method=QPE, **on)),
                                    exact_marginal(ctx.run(method=CU, **on)))
    ok = tvd_cu > 0.1 and tvd_se < TVD_TOL and tvd_eig < TVD_TOL
    return ok, f"TVD(QPE,CU)={tvd_cu:.3f} TVD(QPE,SE)={tvd_se:.1e} eigenstate TVD={tvd_eig:.1e}"


@check("cost-model-closed-forms", "per-step cost composition equals the closed-form polynomials")
def _cost_model_closed_forms(ctx: VerifyContext) -> Tuple[bool, str]:
    mismatches = []
    for n in (4, 6, 8, 12):
        for l in (5, 10, 20):
            for order in (1, 2):
                for controlled in (False, True):
                    if step_cost(order, n, l, controlled) != closed_form_step(order, n, l, controlled):
                        mismatches.append(f"n={n} l={l} order={order} controlled={controlled}")
    return not mismatches, "all 48 cases equal" if not mismatches else "; ".join(mismatches)


@check("compiled-primitives", "compiled kernels match the analytic table at N=6")
def _compiled_primitives(ctx: VerifyContext) -> Tuple[bool, str]:
    n = 6
    table = primitive_costs(n)
    compiled = {name: metrics.summary(build(n)) for name, build in kernels.COMPILED.items()}
    compiled[prim.CSWAP_SERIAL] = metrics.summary(kernels.cswap_pair(n))
    compiled[prim.CSWAP_CAT] = metrics.summary(kernels.cswap_pair(n, cat=True))
    uncontrolled = (prim.W, prim.U0, prim.UL, prim.CSWAP_SERIAL, prim.CSWAP_CAT)
    bad = []
    for name, got in compiled.items():
        want = table[name]
        counts_ok = got.cx_count == want.cx_count and got.rz_count == want.rz_count
        if name in uncontrolled:
            depths_ok = got.cx_depth == want.cx_depth and got.rz_depth == want.rz_depth
        else:
            depths_ok = got.cx_depth <= want.cx_depth and got.rz_depth <= want.rz_depth
        if not (counts_ok and depths_ok):
            bad.append(name)
    return not bad, "all primitives agree" if not bad else f"mismatch: {', '.join(bad)}"


ASYMPTOTES = {
    False: {"cx_count": lambda n: 2 / 3, "rz_count": lambda n: 3 / 4, "rz_depth": lambda n: 3 / 8,
            "cx_depth": lambda n: 3 / n},
    True: {"cx_count": lambda n: 3 / 5, "rz_count": lambda n: 2 / 3, "rz_depth": lambda n: 1 / 3,
           "cx_depth": lambda n: 2 / n},
}


def asymptotic_gains(spin_block: bool, n: int, m: int = 20) -> Dict[str, float]:
    gains = totals_and_gains(m, step_costs(2, n, 2 * n, spin_block), prim.cswap_pair(n, cat=True))["gains"]
    return {metric: gains[metric] for metric in ASYMPTOTES[spin_block]}


@check("asymptotic-gains", "large-N gain ratios approach their leading-order limits")
def _asymptotic_gains(ctx: VerifyContext) -> Tuple[bool, str]:
    details, ok = [], True
    for spin_block in (False, True):
        small, large = asymptotic_gains(spin_block, 30), asymptotic_gains(spin_block, 120)
        for metric, limit in ASYMPTOTES[spin_block].items():
            # CX depth converges like (N+5)/6, so it is checked at N=120
            n, got, tol = (120, large[metric], 0.10) if metric == "cx_depth" else (30, small[metric], 0.05)
            rel = abs(got / limit(n) - 1)
            ok &= rel <= tol
            details.append(f"{'sb' if spin_block else 'dense'} {metric}={got:.4f} ({rel:.1%})")
    return ok, "; ".join(details)


@check("trotter-constant", "Trotter-number prefactor from the calibration point")
def _trotter_constant(ctx: VerifyContext) -> Tuple[bool, str]:
    value = c_ts(ScanConfig())
    return abs(value / C_TS - 1) <= 0.02, f"c_TS={value:.6f}"


@check("ethylene-crossover", "gadget blocks beat controlled blocks from bit 2 on, and lose at bits 0 and 1")
def _ethylene_crossover(ctx: VerifyContext) -> Tuple[bool, str]:
    rows = ethylene_crossover(5)
    ok = True
    for row in rows:
        gadget_counts = (row["se_cx_count"], row["cat_cx_count"])
        gadget_depths = (row["se_cx_depth"], row["cat_cx_depth"])
        if row["j"] >= 2:
            ok &= all(v < row["qpe_cx_count"] for v in gadget_counts)
            ok &= all(v < row["qpe_cx_depth"] for v in gadget_depths)
        else:
            ok &= all(v > row["qpe_cx_count"] for v in gadget_counts)
    detail = ", ".join(f"j={r['j']}: {r['qpe_cx_count']}/{r['se_cx_count']}/{r['cat_cx_count']}" for r in rows)
    return ok, f"CX count qpe/serial/cat {detail}"


@check("noise-filtering", "error-detection filtering sharpens the noisy peak; noiseless shots are unflagged "
                          "and follow the exact marginal")
def _noise_filtering(ctx: VerifyContext) -> Tuple[bool, str]:
    run = ctx.run(method=SE, m=5, tau=10.0, cat=True, measure_reset=True)
    c = build_circuit(run)
    shots = ctx.shots(5000, 1000)
    noisy = sample(c, shots, NoiseConfig(p2=0.002, pm=0.002, seed=0))
    _, fstats = filter_records(noisy)
    fractions = round_failure_fractions(noisy, c)
    clean = sample(c, ctx.shots(50000, 2000), NoiseConfig(seed=0))
    clean_ok = not any(r.flagged for r in clean)
    band = float(band_scores(clean, exact_marginal(run)).max())
    sharper = not fstats.empty and fstats.filtered_peak >= fstats.raw_peak
    ok = clean_ok and band <= 4 and sharper and rounds_nondecreasing(fractions, shots)
    rounds = ", ".join(f"{f:.3f}" for f in fractions)
    return ok, (f"raw={fstats.raw_peak:.3f} filtered={fstats.filtered_peak} retention={fstats.retention:.3f} "
                f"rounds=[{rounds}] noiseless flags={'none' if clean_ok else 'present'} band={band:.2f}sigma")


@check("determinism", "identical config and seed give byte-identical outputs")
def _determinism(ctx: VerifyContext) -> Tuple[bool, str]:
    names = ("distribution.csv", "shots.csv", "stats.json")
    with tempfile.TemporaryDirectory() as tmp:
        dirs = [os.path.join(tmp, name) for name in ("a", "b")]
        for d in dirs:
            cmd_simulate(SimulateConfig(out_dir=d, m=3, tau=10.0, cat=True, measure_reset=True,
                                        shots=ctx.shots(500, 200), seed=7, p2=0.005, pm=0.005,
                                        alpha=ctx.cfg.alpha, beta1=ctx.cfg.beta1, beta2=ctx.cfg.beta2))
        same = all(filecmp.cmp(os.path.join(dirs[0], f), os.path.join(dirs[1], f), shallow=False) for f in names)
    return same, "outputs identical" if same else "outputs differ"


def list_checks() -> List[Tuple[str, str]]:
    return [(spec.id, spec.description) for spec in CHECKS.values()]


def run_checks(cfg: VerifyConfig, only: Optional[List[str]] = None) -> List[CheckResult]:
    only = cfg.only_ids() if only is None else only
    if only:
        unknown = [i for i in only if i not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown check IDs: {', '.join(unknown)}")
    ctx = VerifyContext(cfg)
    results = []
    for spec in CHECKS.values():
        if only and spec.id not in only:
            continue
        try:
            passed, detail = spec.run(ctx)
        except Exception as e:
            logger.exception("[run_checks] %s raised", spec.id)
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.info("[run_checks] %s %s", spec.id, "pass" if passed else "FAIL")
        results.append(CheckResult(spec.id, bool(passed), detail))
    return results


def verify(cfg: VerifyConfig) -> List[CheckResult]:
    """
    Run the suite and raise AcceptanceError naming every failed check
    """
    results = run_checks(cfg)
    failed = [r.id for r in results if not r.passed]
    if failed:
        raise AcceptanceError(failed)
    return results
