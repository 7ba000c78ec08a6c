from .phase import (EnergyEstimate, PeakStats, distribution_distance, eigenphases, energy_to_phase,
                    ideal_qpe_distribution, nearest_grid_index, peak_stats, phase_to_energy, resolution,
                    select_branch, stats_summary)
