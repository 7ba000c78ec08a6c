import logging

import pytest

from splitqpe.circuit import metrics
from splitqpe.costs import CostVector, total
from splitqpe.errors import ResourceModelError
from splitqpe.resources import (DFSpec, ScanConfig, block_cost, breakeven_bit, closed_form_step, ethylene_crossover,
                                lambda_norm, overhead_ratios, policy_totals, primitive_costs, scan, step_cost,
                                step_costs, sweep, synthetic_dfspec, totals_and_gains)
from splitqpe.resources import kernels
from splitqpe.resources import primitives as prim
from splitqpe.resources.model import QPE, SE_QPE, StepCosts
from splitqpe.resources.scan import c_ts, t_eps_for


class TestCostVector:
    def test_arithmetic(self):
        a = CostVector(cx_count=2, cx_depth=1)
        assert a + a * 2 == CostVector(cx_count=6, cx_depth=3)
        assert total() == CostVector()

    def test_rejects_negative(self):
        with pytest.raises(ResourceModelError):
            CostVector(cx_count=-1)

    def test_with_t(self):
        want = CostVector(rz_count=3, t_count=30, rz_depth=2, t_depth=20)
        assert CostVector(rz_count=3, rz_depth=2).with_t(10) == want

    def test_unknown_metric(self):
        with pytest.raises(ResourceModelError):
            CostVector().get("cz_count")


class TestPrimitives:
    def test_cswap_pairs(self):
        table = primitive_costs(4)
        serial, cat = table[prim.CSWAP_SERIAL], table[prim.CSWAP_CAT]
        assert (serial.cx_count, serial.t_count, serial.cx_depth, serial.t_depth) == (56, 56, 56, 32)
        assert (cat.cx_count, cat.t_count, cat.cx_depth, cat.t_depth) == (62, 56, 18, 8)

    def test_needs_even_n(self):
        with pytest.raises(ResourceModelError):
            primitive_costs(5)

    @pytest.mark.parametrize("name", list(kernels.COMPILED))
    def test_compiled_kernels(self, name):
        n = 6
        want = primitive_costs(n)[name]
        got = metrics.summary(kernels.COMPILED[name](n))
        assert (got.cx_count, got.rz_count) == (want.cx_count, want.rz_count)
        if name in (prim.W, prim.U0, prim.UL):
            assert (got.cx_depth, got.rz_depth) == (want.cx_depth, want.rz_depth)
        else:
            assert got.cx_depth <= want.cx_depth and got.rz_depth <= want.rz_depth

    @pytest.mark.parametrize("cat", [False, True])
    def test_compiled_cswap_pair(self, cat):
        want = prim.cswap_pair(6, cat)
        got = metrics.summary(kernels.cswap_pair(6, cat))
        assert (got.cx_count, got.cx_depth, got.t_count, got.t_depth) == \
            (want.cx_count, want.cx_depth, want.t_count, want.t_depth)


class TestStepModel:
    @pytest.mark.parametrize("order", [1, 2])
    @pytest.mark.parametrize("controlled", [False, True])
    @pytest.mark.parametrize("n,l", [(4, 5), (6, 10), (12, 20)])
    def test_closed_forms(self, order, controlled, n, l):
        assert step_cost(order, n, l, controlled) == closed_form_step(order, n, l, controlled)

    def test_bad_order_and_l(self):
        with pytest.raises(ResourceModelError):
            step_cost(3, 4, 5)
        with pytest.raises(ResourceModelError):
            step_cost(1, 4, 0)

    def test_overhead_ratios_small_model(self):
        ratios = overhead_ratios(4, 5)
        assert ratios["R_CX"] == pytest.approx(212 / 144, rel=1e-12)
        assert ratios["R_Rz"] == pytest.approx(152 / 118, rel=1e-12)
        assert ratios["r_CX"] == pytest.approx(168 / 100, rel=1e-12)
        assert ratios["r_Rz"] == pytest.approx(67 / 51, rel=1e-12)

    def test_overhead_ratios_large_model(self):
        n = 30
        ratios = overhead_ratios(n, 120)
        assert ratios["R_CX"] == pytest.approx(315000 / 210540, rel=1e-12)
        assert ratios["R_Rz"] == pytest.approx(210600 / 158370, rel=1e-12)
        assert ratios["r_CX"] == pytest.approx(125328 / 20868, rel=1e-12)
        assert ratios["r_Rz"] == pytest.approx(13916 / 10435, rel=1e-12)
        assert ratios["R_CX"] == pytest.approx(3 / 2, rel=0.05)
        assert ratios["R_Rz"] == pytest.approx(4 / 3, rel=0.05)
        assert ratios["r_Rz"] == pytest.approx(4 / 3, rel=0.05)
        # r_CX tracks (N + 5) / 6; at N = 30 it sits about 20 % above N / 6
        assert ratios["r_CX"] == pytest.approx((n + 5) / 6, rel=0.05)
        assert 0.15 < ratios["r_CX"] / (n / 6) - 1 < 0.25

    def test_overhead_ratios_warn_outside_regime(self, caplog):
        with caplog.at_level(logging.WARNING, logger="splitqpe.resources.model"):
            ratios = overhead_ratios(8, 4)
        assert "leading-order" in caplog.text
        assert ratios["R_CX"] > 1


class TestBlocks:
    step = step_costs(2, 8, 16)
    swap = prim.cswap_pair(8, cat=True)

    def test_block_errors(self):
        with pytest.raises(ResourceModelError):
            block_cost(-1, QPE, self.step)
        with pytest.raises(ResourceModelError):
            block_cost(0, "kitaev", self.step)
        with pytest.raises(ResourceModelError):
            block_cost(0, SE_QPE, self.step)

    def test_gadget_depth_halves_lanes(self):
        b = block_cost(3, SE_QPE, self.step, self.swap)
        assert b.cx_depth == 4 * self.step.plain.cx_depth + self.swap.cx_depth
        assert b.cx_count == 8 * self.step.plain.cx_count + self.swap.cx_count

    def test_policy_totals(self):
        qpe = total(*(block_cost(j, QPE, self.step) for j in range(4)))
        assert policy_totals(4, self.step, self.swap, "cccc") == qpe
        mixed = policy_totals(4, self.step, self.swap, "ccgg")
        assert mixed == total(block_cost(0, QPE, self.step), block_cost(1, QPE, self.step),
                              block_cost(2, SE_QPE, self.step, self.swap), block_cost(3, SE_QPE, self.step, self.swap))
        with pytest.raises(ResourceModelError):
            policy_totals(4, self.step, self.swap, "ccg")

    def test_closed_form_gains_are_exact(self):
        result = totals_and_gains(7, self.step, self.swap)
        assert result["K"] == 127
        for metric, value in result["gains_closed_form"].items():
            assert value == pytest.approx(result["gains"][metric], rel=1e-12)

    def test_small_model_totals(self):
        step, swap = step_costs(1, 6, 10), prim.cswap_pair(6, cat=True)
        assert (step.plain.cx_count, step.controlled.cx_count, swap.cx_count) == (660, 972, 94)
        result = totals_and_gains(5, step, swap)
        assert result[QPE].cx_count == 31 * 972 == 30132
        assert result[SE_QPE].cx_count == 31 * 660 + 5 * 94 == 20930
        assert result["gains"]["cx_count"] == pytest.approx(0.6946, abs=1e-4)
        assert policy_totals(5, step, swap, "ccccc") == result[QPE]
        assert policy_totals(5, step, swap, "ggggg") == result[SE_QPE]

    @pytest.mark.parametrize("metric", ["cx_count", "cx_depth", "rz_count", "rz_depth", "t_count", "t_depth"])
    def test_breakeven_matches_block_scan(self, metric):
        step, swap = step_costs(1, 6, 10), prim.cswap_pair(6, cat=False)
        scanned = next((j for j in range(30)
                        if block_cost(j, SE_QPE, step, swap).get(metric) < block_cost(j, QPE, step).get(metric)), None)
        assert breakeven_bit(step, swap, metric) == scanned
        if metric in ("cx_count", "cx_depth"):
            assert scanned == 0

    def test_breakeven(self):
        plain, controlled = CostVector(cx_count=24, cx_depth=12), CostVector(cx_count=48, cx_depth=36)
        costs = StepCosts(plain, controlled)
        swap = CostVector(cx_count=56, cx_depth=56)
        assert breakeven_bit(costs, swap, "cx_count") == 2
        assert breakeven_bit(costs, swap, "cx_depth") == 1
        assert breakeven_bit(StepCosts(controlled, plain), swap, "cx_count") is None


class TestAsymptotics:
    @pytest.mark.parametrize("spin_block,want", [
        (False, {"cx_count": 2 / 3, "rz_count": 3 / 4, "rz_depth": 3 / 8}),
        (True, {"cx_count": 3 / 5, "rz_count": 2 / 3, "rz_depth": 1 / 3}),
    ])
    def test_large_n_gains(self, spin_block, want):
        n = 30
        gains = totals_and_gains(20, step_costs(2, n, 2 * n, spin_block), prim.cswap_pair(n, cat=True))["gains"]
        for metric, value in want.items():
            assert gains[metric] == pytest.approx(value, rel=0.05)

    @pytest.mark.parametrize("spin_block,scale", [(False, 3), (True, 2)])
    def test_cx_depth_gain_falls_as_one_over_n(self, spin_block, scale):
        n = 120
        gains = totals_and_gains(20, step_costs(2, n, 2 * n, spin_block), prim.cswap_pair(n, cat=True))["gains"]
        assert gains["cx_depth"] == pytest.approx(scale / n, rel=0.1)

    def test_cx_depth_gain_at_thirty_orbitals(self):
        # exact per-bit sums: (2^19 d + 20 d_swap) / (K d_c) with d = 20810, d_c = 124460, d_swap = 24
        n = 30
        gains = totals_and_gains(20, step_costs(2, n, 2 * n), prim.cswap_pair(n, cat=True))["gains"]
        assert gains["cx_depth"] == pytest.approx(0.0836012, rel=1e-5)
        assert gains["cx_depth"] == pytest.approx(3 / (n + 5), rel=0.03)
        assert 0.10 < 1 - gains["cx_depth"] / (3 / n) < 0.20


class TestScan:
    def test_trotter_constant(self):
        assert c_ts(ScanConfig()) == pytest.approx(0.001868, abs=1e-5)

    def test_rotation_cost(self):
        assert t_eps_for(1e-3) == 40
        assert t_eps_for(1e-10) == 110
        with pytest.raises(ResourceModelError):
            t_eps_for(0)

    def test_dfspec_validation(self):
        with pytest.raises(ResourceModelError):
            DFSpec(2, [0.1], [[[0, 0], [0, 0]]])
        with pytest.raises(ResourceModelError):
            DFSpec(2, [0.1, 0.2], [])
        with pytest.raises(ResourceModelError):
            DFSpec(2, [0.1, 0.2], [[[0, 0, 0]]])

    def test_dfspec_file(self, tmp_path):
        spec = synthetic_dfspec(4, 3, seed=2)
        path = tmp_path / "df.json"
        spec.save(str(path))
        assert DFSpec.load(str(path)) == spec
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 2}')
        with pytest.raises(ResourceModelError):
            DFSpec.load(str(bad))

    def test_lambda_norm(self):
        spec = DFSpec(2, [0.5, -0.25], [[[0, 0.1], [0.1, 0]], [[0, -0.2], [-0.2, 0]]])
        assert lambda_norm(spec) == pytest.approx(1.05)
        assert lambda_norm(spec, 1) == pytest.approx(0.85)
        with pytest.raises(ResourceModelError):
            lambda_norm(spec, 3)

    def test_scan_report(self, tmp_path):
        report = scan(synthetic_dfspec(8, 16, seed=1))
        assert report.k == 2 ** report.m - 1
        assert report.tau == pytest.approx(3.141592653589793 / report.lambda_l)
        assert set(report.totals) == {QPE, SE_QPE}
        for metric in ("cx_count", "cx_depth"):
            assert report.gains[metric] == pytest.approx(report.gains_closed_form[metric], rel=1e-12)
        path = tmp_path / "scan.csv"
        report.save_csv(str(path))
        assert len(path.read_text().splitlines()) == 1 + 2 * 6

    def test_scan_needs_even_n(self):
        with pytest.raises(ResourceModelError):
            scan(synthetic_dfspec(5, 4))

    def test_scan_config(self):
        with pytest.raises(ResourceModelError):
            ScanConfig(swap="ring")
        with pytest.raises(ResourceModelError):
            ScanConfig(eps_chem=0)

    @pytest.mark.slow
    def test_sweep_approaches_two_thirds(self):
        rows = sweep([30])
        se = next(r for r in rows if r["method"] == SE_QPE)
        assert se["cx_count_ratio"] == pytest.approx(2 / 3, rel=0.05)


class TestCrossover:
    def test_ethylene_crossover(self):
        rows = ethylene_crossover(3)
        assert [r["j"] for r in rows] == [0, 1, 2, 3]
        assert [r["qpe_cx_count"] for r in rows] == [48, 96, 192, 384]
        assert [r["se_cx_count"] for r in rows] == [80, 104, 152, 248]
        assert [r["cat_cx_count"] - r["se_cx_count"] for r in rows] == [6, 6, 6, 6]
        assert rows[2]["se_cx_depth"] == 80
        assert rows[2]["qpe_cx_depth"] >= 96
        wins = [r["se_cx_count"] < r["qpe_cx_count"] for r in rows]
        assert wins == [False, False, True, True]
