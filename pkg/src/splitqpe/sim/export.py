import csv
import json
from typing import Dict, List

import numpy as np

from .statevector import ShotRecord


def write_shots_csv(records: List[ShotRecord], save_path: str):
    with open(save_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["shot", "phase_bits", "ed_bits"])
        for r in sorted(records, key=lambda rec: rec.shot):
            writer.writerow([r.shot, r.phase_bits, r.ed_bits])


def load_shots_csv(load_path: str) -> List[ShotRecord]:
    with open(load_path, "r", newline="") as f:
        return [ShotRecord(int(row["shot"]), row["phase_bits"], row["ed_bits"]) for row in csv.DictReader(f)]


def write_distribution_csv(probabilities: np.ndarray, m: int, save_path: str):
    with open(save_path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["bitstring", "probability"])
        for x, p in enumerate(probabilities):
            writer.writerow([format(x, f"0{m}b"), f"{p:.12g}"])


def empirical_distribution(records: List[ShotRecord], m: int) -> np.ndarray:
    counts = np.zeros(1 << m)
    for r in records:
        counts[r.value] += 1
    return counts / max(len(records), 1)


def write_stats_json(stats: Dict, save_path: str):
    with open(save_path, "w") as f:
        json.dump(stats, f, indent=4, sort_keys=True)
