import csv
import json
import logging
import os
from typing import Dict, List

from ..analysis import energy_to_phase, peak_stats, stats_summary
from ..circuit import metrics
from ..models import build_circuit, energies
from ..qpe.builders import layout_summary
from ..resources import DFSpec, ScanConfig, scan, sweep
from ..sim import NoiseConfig, phase_marginal, round_failure_fractions, sample
from ..sim.export import empirical_distribution, write_distribution_csv, write_shots_csv, write_stats_json
from .config import BuildConfig, ScanCommandConfig, SimulateConfig

logger = logging.getLogger(__name__)

ENERGY_DECIMALS = 6
ENERGY_KEYS = ("energy", "resolution", "e_ref", "e_exact")


def _round_energies(stats: Dict) -> Dict:
    return {k: round(v, ENERGY_DECIMALS) if k in ENERGY_KEYS else v for k, v in stats.items()}


def _print_table(rows: List[List], header: List[str]):
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    print("  ".join(str(h).ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(str(x).ljust(w) for x, w in zip(row, widths)))


def cmd_build(cfg: BuildConfig) -> Dict[str, str]:
    c = build_circuit(cfg.run())
    out = cfg.output_dir()
    circuit_path = os.path.join(out, "circuit.txt")
    metrics_path = os.path.join(out, "metrics.json")
    c.save(circuit_path)
    cost = metrics.summary(c, cfg.t_eps)
    report = {
        "config": cfg.to_dict(),
        "layout": layout_summary(c),
        "census": c.gate_census(),
        "metrics": cost.to_dict(),
    }
    with open(metrics_path, "w") as f:
        json.dump(report, f, indent=4, sort_keys=True)
    _print_table([[cfg.method, cfg.m, c.n_qubits, len(c), cost.cx_count, cost.cx_depth]],
                 ["method", "M", "qubits", "gates", "cx_count", "cx_depth"])
    return {"circuit": circuit_path, "metrics": metrics_path}


def cmd_simulate(cfg: SimulateConfig) -> Dict[str, str]:
    run = cfg.run()
    c = build_circuit(run)
    out = cfg.output_dir()
    paths = {"distribution": os.path.join(out, "distribution.csv"), "stats": os.path.join(out, "stats.json")}
    e_ref = run.reference_energy()
    e_exact = energies(run.params)["E_S0"]
    if cfg.sampled:
        records = sample(c, cfg.shots, NoiseConfig(cfg.p2, cfg.pm, cfg.seed))
        distribution = empirical_distribution(records, cfg.m)
        stats = stats_summary(cfg.m, cfg.tau, e_ref, records=records)
        stats["shots"] = len(records)
        stats["ed_round_failure"] = round_failure_fractions(records, c)
        paths["shots"] = os.path.join(out, "shots.csv")
        write_shots_csv(records, paths["shots"])
    else:
        distribution = phase_marginal(c)
        stats = stats_summary(cfg.m, cfg.tau, e_ref, distribution=distribution)
        stats["shots"] = 0
    stats.update({
        "method": cfg.method,
        "M": cfg.m,
        "tau": cfg.tau,
        "e_ref": e_ref,
        "e_exact": e_exact,
        "target_window_share": peak_stats(distribution, energy_to_phase(e_exact, cfg.tau)).window_share,
    })
    stats = _round_energies(stats)
    write_distribution_csv(distribution, cfg.m, paths["distribution"])
    write_stats_json(stats, paths["stats"])
    _print_table([[cfg.method, cfg.m, cfg.tau, stats["modal_bits"], f"{stats['energy']:.6f}",
                   f"{stats['modal_share_raw']:.4f}", stats["modal_share_filtered"], f"{stats['retention']:.4f}"]],
                 ["method", "M", "tau", "modal", "E (Ha)", "share_raw", "share_filtered", "retention"])
    return paths


def cmd_scan(cfg: ScanCommandConfig) -> Dict[str, str]:
    scan_cfg = ScanConfig(eps_chem=cfg.eps_chem, trotter_order=cfg.trotter_order, swap=cfg.swap)
    out = cfg.output_dir()
    csv_path = os.path.join(out, "scan.csv")
    json_path = os.path.join(out, "scan.json")
    if cfg.dfspec:
        report = scan(DFSpec.load(cfg.dfspec), scan_cfg)
        report.save_csv(csv_path)
        report.save_json(json_path)
        _print_table([[row["method"], row["metric"], row["value"]] for row in report.rows()],
                     ["method", "metric", "value"])
        return {"csv": csv_path, "json": json_path}

    rows = sweep(cfg.n_list(), cfg.l_factor, cfg.seed, scan_cfg, cfg.spin_block)
    with open(csv_path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    with open(json_path, "w") as f:
        json.dump({"config": cfg.to_dict(), "rows": rows}, f, indent=4, sort_keys=True)
    _print_table([[r["N"], r["method"], r["M"], f"{r['cx_count_ratio']:.4f}", f"{r['cx_depth_ratio']:.4f}",
                   f"{r['t_count_ratio']:.4f}", f"{r['t_depth_ratio']:.4f}"] for r in rows],
                 ["N", "method", "M", "cx_count", "cx_depth", "t_count", "t_depth"])
    return {"csv": csv_path, "json": json_path}
