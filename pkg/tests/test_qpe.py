import numpy as np
import pytest

from splitqpe.analysis import distribution_distance, eigenphases, ideal_qpe_distribution
from splitqpe.circuit import Circuit
from splitqpe.circuit import gates as g
from splitqpe.errors import CircuitError, ConfigError
from splitqpe.models import (CU, QPE, SE, EthyleneRun, ansatz_state, build_circuit, exact_marginal, hamiltonian,
                             schedule)
from splitqpe.models.ethylene import trotter_eigen_angle, trotter_unitary
from splitqpe.qpe import (GadgetSpec, QPELayout, ReferencePhase, TimeStep, VariantPolicy, canonical_qpe, cswap_gadget,
                          qubit_budget, reference_theta)
from splitqpe.qpe.builders import bitwise_policies, gadget_spec_for_bit, layout_summary, se_qpe
from splitqpe.sim import phase_marginal, sample, unitary

TVD_TOL = 1e-9


def _expected_gadget(ua: np.ndarray, ub: np.ndarray, theta: float) -> np.ndarray:
    # control on qubit 0, lane A above it, lane B on top
    p0 = np.diag([1, 0])
    p1 = np.diag([0, 1])
    return np.kron(ub, np.kron(ua.conj().T, p0)) + np.exp(2j * np.pi * theta) * np.kron(ua.conj().T, np.kron(ub, p1))


class TestGadget:
    @pytest.mark.parametrize("use_cat", [False, True])
    def test_gadget_unitary(self, make_random_circuit, use_cat):
        ua, ub = make_random_circuit(n=3, depth=12), make_random_circuit(n=3, depth=12)
        spec = GadgetSpec(ua, ub, theta=0.3, use_cat=use_cat)
        full = unitary(cswap_gadget(spec))
        # fan-out qubit starts and ends in |0>
        block = full[:128, :128]
        assert np.allclose(block, _expected_gadget(unitary(ua), unitary(ub), 0.3))

    def test_lane_size_mismatch(self):
        with pytest.raises(CircuitError):
            GadgetSpec(Circuit(2), Circuit(3))

    def test_measure_reset_layout(self):
        spec = GadgetSpec(Circuit(3), Circuit(3), use_cat=True, measure_reset=True)
        c = cswap_gadget(spec)
        assert spec.ed_size == 5
        assert c.n_qubits == 1 + 6 + 2
        assert c.n_cbits == 5
        assert c.gate_census()["CSWAP"] == 6

    def test_bit_split(self, se_run_m5):
        step = se_run_m5.step()
        theta_ref = reference_theta(hamiltonian(), 10.0)
        policy = VariantPolicy.uniform(5)
        first = gadget_spec_for_bit(step, 0, theta_ref, policy)
        assert len(first.ua) == 0 and len(first.ub) == len(step.step)
        third = gadget_spec_for_bit(step, 2, theta_ref, policy)
        assert len(third.ua) == len(third.ub) == 2 * len(step.step)
        assert third.theta == pytest.approx((4 * theta_ref.theta) % 1.0)


class TestPolicy:
    @pytest.mark.parametrize("text", ["", "cx", "ggq"])
    def test_rejects_bad_policy(self, text):
        with pytest.raises(ConfigError):
            VariantPolicy.parse(text)

    def test_policy_must_cover_every_bit(self):
        run = EthyleneRun(m=5, policy="ggg")
        with pytest.raises(ConfigError):
            build_circuit(run)

    def test_label_and_bits(self):
        policy = VariantPolicy.parse(" CCggG ", cat=True, measure_reset=True)
        assert policy.gadget_bits() == [2, 3, 4]
        assert policy.label == "ccggg+cat+mr"

    def test_bitwise_policies(self):
        assert list(bitwise_policies(3)) == ["ccc", "ccg", "cgg", "ggg"]

    def test_unknown_method(self):
        with pytest.raises(ConfigError):
            EthyleneRun(method="kitaev")


class TestLayout:
    def test_qubit_counts(self):
        assert build_circuit(EthyleneRun(method=QPE)).n_qubits == 9
        assert build_circuit(EthyleneRun(method=CU)).n_qubits == 9
        assert build_circuit(EthyleneRun(method=SE)).n_qubits == 13
        assert build_circuit(EthyleneRun(method=SE, cat=True)).n_qubits == 16
        assert qubit_budget(4, 5) == 9
        assert qubit_budget(4, 5, VariantPolicy.uniform(5, cat=True)) == 16
        assert qubit_budget(4, 5, VariantPolicy.uniform(5, "c", cat=True)) == 13

    def test_measure_reset_registers(self):
        c = build_circuit(EthyleneRun(method=SE, policy="ccggg", cat=True, measure_reset=True))
        layout = QPELayout.of(c)
        assert [r.name for r in layout.ed] == ["ed_r2", "ed_r3", "ed_r4"]
        assert all(r.size == 7 for r in layout.ed)
        assert layout.fanout.size == 3
        summary = layout_summary(c)
        assert summary["qubits"] == 16 and summary["M"] == 5

    def test_single_final_check(self):
        c = build_circuit(EthyleneRun(method=SE))
        assert [r.name for r in QPELayout.of(c).ed] == ["ed"]

    def test_prep_size_mismatch(self, se_run_m5):
        step = se_run_m5.step()
        with pytest.raises(CircuitError):
            se_qpe(5, step, Circuit(3), Circuit(4), VariantPolicy.uniform(5), reference_theta(hamiltonian(), 10.0))

    def test_time_step_from_circuit(self, se_run_m5):
        step = se_run_m5.step()
        derived = TimeStep.from_circuit(step.step)
        assert np.allclose(unitary(derived.controlled), unitary(step.controlled))


class TestEquivalence:
    def test_canonical_matches_ideal(self):
        run = EthyleneRun(method=QPE, m=5, tau=10.0)
        u = trotter_unitary(run.schedule(), run.params)
        phases, weights = eigenphases(u, ansatz_state(run.input_angle).amplitudes)
        expected = ideal_qpe_distribution(phases, weights, 5)
        assert distribution_distance(exact_marginal(run), expected) <= 1e-8

    def test_grid_phase_reads_out_exactly(self):
        # Phase(3/8) with |1> as eigenvector: three bits read x = 3 with certainty
        step = TimeStep.from_circuit(Circuit(1, gates=[g.phase(0, 3 / 8)]))
        prep = Circuit(1, gates=[g.x(0)])
        circuits = [
            canonical_qpe(3, step, prep),
            se_qpe(3, step, prep, Circuit(1), VariantPolicy.uniform(3), ReferencePhase(0.0, 0.0, 1.0)),
        ]
        for c in circuits:
            p = phase_marginal(c)
            assert p[3] == pytest.approx(1.0, abs=1e-12)
            assert {r.phase_bits for r in sample(c, 20, seed=4)} == {"011"}
        assert ideal_qpe_distribution([3 / 8], [1.0], 3)[3] == pytest.approx(1.0)

    @pytest.mark.parametrize("extra", [
        dict(),
        dict(cat=True),
        dict(measure_reset=True),
        dict(cat=True, measure_reset=True),
        dict(policy="ccggg"),
        dict(policy="gcgcg", cat=True, measure_reset=True),
    ])
    def test_split_evolution_matches_canonical(self, extra):
        reference = exact_marginal(EthyleneRun(method=QPE, m=5, tau=10.0))
        p = exact_marginal(EthyleneRun(method=SE, m=5, tau=10.0, **extra))
        assert distribution_distance(reference, p) <= TVD_TOL

    @pytest.mark.slow
    @pytest.mark.parametrize("extra", [
        dict(cat=True, measure_reset=True),
        dict(policy="ccgggg"),
        dict(policy="ccgggg", cat=True, measure_reset=True),
    ])
    def test_split_evolution_matches_canonical_m6(self, extra):
        reference = exact_marginal(EthyleneRun(method=QPE, m=6, tau=8.0))
        p = exact_marginal(EthyleneRun(method=SE, m=6, tau=8.0, **extra))
        assert distribution_distance(reference, p) <= TVD_TOL

    def test_compute_uncompute_off_eigenstate(self):
        off = dict(m=6, tau=8.0, bias_correction=False, theta=0.2)
        qpe = exact_marginal(EthyleneRun(method=QPE, **off))
        assert distribution_distance(qpe, exact_marginal(EthyleneRun(method=CU, **off))) > 0.1
        assert distribution_distance(qpe, exact_marginal(EthyleneRun(method=SE, **off))) <= TVD_TOL

    def test_compute_uncompute_on_eigenstate(self):
        theta = trotter_eigen_angle(schedule(8.0, 6))
        on = dict(m=6, tau=8.0, bias_correction=False, theta=theta)
        qpe = exact_marginal(EthyleneRun(method=QPE, **on))
        assert distribution_distance(qpe, exact_marginal(EthyleneRun(method=CU, **on))) <= TVD_TOL
