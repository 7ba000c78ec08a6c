from .sampling import (FilterStats, TrajectorySampler, band_scores, filter_records, round_failure_fractions,
                       rounds_nondecreasing, sample)
from .statevector import (NoiseConfig, ShotRecord, evolve, phase_marginal, run_deterministic,
                          strip_mid_measurements, unitary)
