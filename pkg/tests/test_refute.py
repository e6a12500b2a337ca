"""Robustness checks: random-common-cause, placebo-treatment, and
data-subset refuters."""

from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

import dgp
from writelab import (
    LearnerConfig,
    estimate_baseline,
    estimate_x_learner,
    refute_data_subset,
    refute_placebo,
    refute_random_common_cause,
)
from writelab.errors import EstimationError
from writelab.refute import RefutationReport

RIDGE = LearnerConfig(kind="ridge", seed=7)

ALL_REFUTERS = (refute_random_common_cause, refute_placebo, refute_data_subset)


@pytest.fixture(scope="module")
def tau55():
    data, _ = dgp.synthetic_dataset(n=500, seed=55, tau=1.5)
    return data, estimate_x_learner(data, RIDGE)


@pytest.fixture(scope="module")
def small_fit():
    data, _ = dgp.synthetic_dataset(n=150, seed=41, tau=1.0)
    return data, estimate_x_learner(data, RIDGE)


class TestReport:
    def report(self, **overrides):
        base = dict(
            kind="rcc",
            new_effect=1.0,
            p_value=0.5,
            simulations=100,
            seed=0,
            simulated_effects=(1.0, 1.1),
        )
        base.update(overrides)
        return RefutationReport(**base)

    def test_valid(self):
        assert self.report().passed

    def test_unknown_kind(self):
        with pytest.raises(EstimationError, match="kind"):
            self.report(kind="bogus")

    def test_minimum_simulations(self):
        with pytest.raises(EstimationError, match="50"):
            self.report(simulations=49)

    def test_p_value_range(self):
        with pytest.raises(EstimationError, match="p-value"):
            self.report(p_value=1.5)
        with pytest.raises(EstimationError, match="p-value"):
            self.report(p_value=-0.1)

    def test_passed_is_strictly_above_threshold(self):
        assert self.report(p_value=0.06).passed is True
        assert self.report(p_value=0.05).passed is False
        assert self.report(p_value=0.04).passed is False


class TestKnownEffect:
    """A correct estimate on a known-effect dataset survives all three checks."""

    def test_random_common_cause(self, tau55):
        data, result = tau55
        report = refute_random_common_cause(data, result, simulations=50, seed=11)
        assert report.kind == "rcc"
        assert report.simulations == 50
        assert len(report.simulated_effects) == 50
        assert abs(report.new_effect - 1.5) < 0.2
        assert report.p_value > 0.05
        assert report.passed

    def test_placebo(self, tau55):
        data, result = tau55
        report = refute_placebo(data, result, simulations=50, seed=11)
        assert report.kind == "placebo"
        assert abs(report.new_effect) < 0.05
        assert report.p_value > 0.05
        assert report.passed

    def test_data_subset(self, tau55):
        data, result = tau55
        report = refute_data_subset(data, result, simulations=50, seed=11)
        assert report.kind == "dsr"
        assert 1.3 <= report.new_effect <= 1.7
        assert report.p_value > 0.05
        assert report.passed

    def test_baseline_results_are_refutable_too(self, small_fit):
        data, _ = small_fit
        baseline = estimate_baseline(data, "t-learner", RIDGE)
        report = refute_placebo(data, baseline, simulations=50, seed=2)
        assert len(report.simulated_effects) == 50
        assert abs(report.new_effect) < 0.3


class TestDeterminism:
    @pytest.mark.parametrize("refuter", ALL_REFUTERS)
    def test_same_seed_same_effects(self, small_fit, refuter):
        data, result = small_fit
        a = refuter(data, result, simulations=50, seed=4)
        b = refuter(data, result, simulations=50, seed=4)
        assert a.simulated_effects == b.simulated_effects
        assert (a.new_effect, a.p_value) == (b.new_effect, b.p_value)

    def test_different_seeds_differ(self, small_fit):
        data, result = small_fit
        a = refute_placebo(data, result, simulations=50, seed=4)
        b = refute_placebo(data, result, simulations=50, seed=5)
        assert a.simulated_effects != b.simulated_effects


class TestValidation:
    @pytest.mark.parametrize("refuter", ALL_REFUTERS)
    def test_minimum_simulations(self, small_fit, refuter):
        data, result = small_fit
        with pytest.raises(EstimationError, match="50"):
            refuter(data, result, simulations=49, seed=0)

    @pytest.mark.parametrize("fraction", [0.4, 0.5, 1.0, 1.5])
    def test_subset_fraction_must_be_in_open_interval(self, small_fit, fraction):
        data, result = small_fit
        with pytest.raises(EstimationError, match="fraction"):
            refute_data_subset(data, result, simulations=50, fraction=fraction, seed=0)


class TestDegenerateOutcome:
    def test_placebo_on_constant_outcome_is_exactly_zero(self):
        data, _ = dgp.synthetic_dataset(n=200, seed=40, tau=0.0)
        const = replace(data, y=np.full(data.n_rows, 3.25))
        result = estimate_x_learner(const, RIDGE)
        report = refute_placebo(const, result, simulations=50, seed=3)
        effects = np.array(report.simulated_effects)
        assert np.all(effects == 0.0)
        assert report.new_effect == 0.0
        assert report.p_value == 1.0
        assert report.passed


class TestConvergence:
    """More simulations pull the perturbed-effect mean toward the original
    estimate for the two perturbations that preserve the effect."""

    @pytest.mark.parametrize(
        "refuter", [refute_random_common_cause, refute_data_subset]
    )
    def test_gap_shrinks_from_50_to_200(self, tau55, refuter):
        data, result = tau55
        gap50 = abs(refuter(data, result, simulations=50, seed=11).new_effect - result.ate)
        gap200 = abs(refuter(data, result, simulations=200, seed=11).new_effect - result.ate)
        assert gap200 < gap50
