import numpy as np
import pytest

from splitqpe.analysis import (distribution_distance, eigenphases, energy_to_phase, ideal_qpe_distribution,
                               nearest_grid_index, peak_stats, phase_to_energy, resolution, select_branch,
                               stats_summary)
from splitqpe.errors import DistributionError
from splitqpe.sim import ShotRecord


@pytest.mark.parametrize("x,m,tau,energy,delta", [
    (12, 5, 10.0, -0.235619, 9.817477e-3),
    (19, 6, 8.0, -0.233165, 6.135923e-3),
])
def test_readout_energy(x, m, tau, energy, delta):
    estimate = phase_to_energy(x, m, tau)
    assert estimate.energy == pytest.approx(energy, abs=1e-6)
    assert estimate.resolution == pytest.approx(delta, abs=1e-9)
    assert resolution(m, tau) == estimate.resolution


def test_readout_range():
    with pytest.raises(DistributionError):
        phase_to_energy(32, 5, 10.0)
    with pytest.raises(DistributionError):
        phase_to_energy(1, 5, 0.0)


def test_branch_recovers_energy_beyond_one_period():
    # -E tau / 2pi = 1.59, so the principal branch alone would alias
    tau, m, e_true = 10.0, 8, -1.0
    phi = energy_to_phase(e_true, tau)
    x = nearest_grid_index(phi, m)
    branch = select_branch(-0.9, tau, x / 2 ** m)
    assert branch == 1
    assert phase_to_energy(x, m, tau, branch).energy == pytest.approx(e_true, abs=resolution(m, tau))
    assert abs(phase_to_energy(x, m, tau).energy - e_true) > 0.5


def test_grid_index_wraps():
    assert nearest_grid_index(0.99, 3) == 0
    assert nearest_grid_index(0.375, 5) == 12


class TestPeakStats:
    def test_ties_take_the_lowest_value(self):
        stats = peak_stats(np.array([0.4, 0.1, 0.4, 0.1]))
        assert (stats.modal, stats.modal_share, stats.window_share) == (0, 0.4, None)

    def test_window_wraps(self):
        stats = peak_stats(np.array([0.4, 0.1, 0.4, 0.1]), target_phi=0.0)
        assert stats.window_share == pytest.approx(0.6)

    def test_from_records(self):
        records = [ShotRecord(0, "10"), ShotRecord(1, "10"), ShotRecord(2, "01")]
        stats = peak_stats(records)
        assert stats.modal == 2 and stats.modal_share == pytest.approx(2 / 3)

    def test_empty(self):
        with pytest.raises(DistributionError):
            peak_stats(np.array([]))
        with pytest.raises(DistributionError):
            peak_stats([])


class TestDistributions:
    def test_distance(self):
        assert distribution_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0
        assert distribution_distance(np.array([0.5, 0.5]), np.array([0.5, 0.5])) == 0.0

    def test_distance_errors(self):
        with pytest.raises(DistributionError):
            distribution_distance(np.array([1.0, 0.0]), np.array([1.0, 0.0, 0.0]))
        with pytest.raises(DistributionError):
            distribution_distance(np.array([0.6, 0.6]), np.array([0.5, 0.5]))

    def test_eigenphases(self):
        u = np.diag(np.exp(2j * np.pi * np.array([0.25, 0.5])))
        phases, weights = eigenphases(u, np.array([1.0, 0.0]))
        assert weights[int(np.argmin(np.abs(phases - 0.25)))] == pytest.approx(1.0)
        assert sorted(phases) == pytest.approx([0.25, 0.5])

    def test_ideal_distribution(self):
        on_grid = ideal_qpe_distribution([3 / 8], [1.0], 3)
        assert on_grid[3] == pytest.approx(1.0)
        off_grid = ideal_qpe_distribution([0.3, 0.71], [0.3, 0.7], 4)
        assert off_grid.sum() == pytest.approx(1.0)
        assert int(np.argmax(off_grid)) == 11


class TestSummary:
    def test_from_distribution(self):
        p = np.zeros(32)
        p[12] = 1.0
        stats = stats_summary(5, 10.0, -0.22, distribution=p)
        assert stats["modal_bits"] == "01100"
        assert stats["branch"] == 0
        assert stats["energy"] == pytest.approx(-0.235619, abs=1e-6)
        assert stats["retention"] == 1.0

    def test_from_records(self):
        records = [ShotRecord(0, "01100", "0"), ShotRecord(1, "01100", "0"), ShotRecord(2, "00001", "1")]
        stats = stats_summary(5, 10.0, -0.22, records=records)
        assert stats["modal"] == 12
        assert stats["retention"] == pytest.approx(2 / 3)
        assert stats["modal_share_filtered"] == 1.0

    def test_needs_exactly_one_source(self):
        with pytest.raises(DistributionError):
            stats_summary(5, 10.0, -0.22)
