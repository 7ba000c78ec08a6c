from .model import (StepCosts, block_cost, breakeven_bit, closed_form_step, ethylene_crossover, overhead_ratios,
                    policy_totals, step_cost, step_costs, totals_and_gains)
from .primitives import primitive_costs
from .scan import DFSpec, ResourceReport, ScanConfig, lambda_norm, scan, synthetic_dfspec, sweep
