import math

import numpy as np
import pytest
from scipy import linalg

from splitqpe.const import GROUND_ANGLE
from splitqpe.errors import DegenerateStateError, SplitQPEError
from splitqpe.models import (PPPParams, ansatz_state, energies, ethylene_step, hamiltonian, lambda_correction,
                             optimal_angle, schedule, trotter_step_circuit)
from splitqpe.models.ethylene import (exact_unitary, ground_phase_error, ground_state, mean_field_state,
                                      trotter_eigen_angle, trotter_unitary, vacuum_state)
from splitqpe.pauli import equal_up_to_phase, expectation
from splitqpe.sim import unitary

LAMBDA_MF = 0.00091716


def test_reference_energies():
    e = energies()
    assert e["E_S0"] == pytest.approx(-0.234282, abs=1e-6)
    assert e["E_vac"] == pytest.approx(0.344282, abs=1e-6)
    assert e["E_T0"] == pytest.approx(-0.074182, abs=1e-6)
    assert e["E_S0_MF"] == pytest.approx(4 * PPPParams().alpha, abs=1e-9)
    assert e["Delta_ST"] == pytest.approx(0.160100, abs=1e-6)


def test_coefficients():
    h = hamiltonian()
    assert h.coefficient("X0 X1") == pytest.approx(-0.055557)
    assert h.coefficient("Z0 Z3") == pytest.approx(0.067525)
    assert h.coefficient("Z1 Z3") == pytest.approx(0.104616)
    assert len(h) == 8


def test_mean_field_overlap():
    _, s0 = ground_state()
    overlap = abs(s0.overlap(mean_field_state()))
    assert overlap == pytest.approx(0.987053, abs=1e-4)
    assert overlap ** 2 == pytest.approx(0.97427, abs=1e-4)


def test_optimal_angle_gives_ground_state():
    theta = optimal_angle()
    assert theta == pytest.approx(GROUND_ANGLE, abs=1e-6)
    e0, s0 = ground_state()
    psi = ansatz_state(theta)
    assert expectation(hamiltonian(), psi) == pytest.approx(e0, abs=1e-10)
    assert equal_up_to_phase(psi.amplitudes, s0.amplitudes)


def test_exact_unitary_on_ground_state():
    e0, s0 = ground_state()
    u = exact_unitary(3.0)
    assert np.allclose(u @ s0.amplitudes, np.exp(-3.0j * e0) * s0.amplitudes)


def test_lambda_from_mean_field():
    lam = lambda_correction(mean_field_state())
    assert lam == pytest.approx(LAMBDA_MF, rel=1e-4)
    assert schedule(10.0, 5, lam).s1 == pytest.approx(5.917162, abs=1e-5)
    assert schedule(8.0, 6, lam).s1 == pytest.approx(4.469587, abs=1e-5)


def test_lambda_needs_hopping():
    with pytest.raises(DegenerateStateError):
        lambda_correction(vacuum_state())


def test_schedule():
    sched = schedule(10.0, 5)
    assert (sched.s1, sched.s2, sched.lam) == (5.0, 10.0, 0.0)
    assert sched.resolution == pytest.approx(9.817477e-3, abs=1e-9)
    for tau, m in ((0.0, 5), (-1.0, 5), (1.0, 0)):
        with pytest.raises(SplitQPEError):
            schedule(tau, m)


def test_step_circuit_matches_product():
    sched = schedule(2.0, 4, 0.003)
    assert np.allclose(unitary(trotter_step_circuit(sched)), trotter_unitary(sched))


def test_controlled_step():
    sched = schedule(1.5, 4)
    step = ethylene_step(sched)
    assert step.n == 4
    expected = linalg.block_diag(np.eye(16), trotter_unitary(sched))
    assert np.allclose(unitary(step.controlled), expected)


def test_trotter_error_is_third_order():
    coarse = ground_phase_error(schedule(0.4, 5))
    fine = ground_phase_error(schedule(0.2, 5))
    assert 6 < coarse / fine < 10


def test_bias_correction_reduces_error():
    _, s0 = ground_state()
    lam = lambda_correction(s0)
    assert ground_phase_error(schedule(1.0, 5, lam)) < 0.1 * ground_phase_error(schedule(1.0, 5))


def test_trotter_eigen_angle():
    sched = schedule(8.0, 6)
    theta = trotter_eigen_angle(sched)
    psi = ansatz_state(theta).amplitudes
    assert equal_up_to_phase(trotter_unitary(sched) @ psi, psi)
    assert math.isfinite(theta)


def _fitted_order(lam: float) -> float:
    taus = np.array([1.0, 2.0, 4.0])
    errors = [ground_phase_error(schedule(tau, 5, lam)) for tau in taus]
    return np.polyfit(np.log(taus), np.log(errors), 1)[0]


def test_bias_correction_raises_error_order():
    _, s0 = ground_state()
    assert _fitted_order(lambda_correction(s0)) >= 3.5
    assert 2.7 < _fitted_order(0.0) < 3.4
