"""Subgroup ITE direction classification."""

from __future__ import annotations

import numpy as np
import pytest

from writelab import LearnerConfig, classify_trends
from writelab.errors import EstimationError
from writelab.estimate import EstimationResult
from writelab.trends import TREND_COLUMNS, TrendRules

LOOSE = TrendRules(theta=0.6, min_size=1)


def result_for(ite, ate=None):
    values = np.asarray(ite, dtype=float)
    return EstimationResult(
        treatment="T1",
        outcome="Y1",
        method="x-learner",
        ate=float(values.mean()) if ate is None else ate,
        ite=values,
        session_ids=tuple(f"s{i:03d}" for i in range(values.size)),
        learner=LearnerConfig(),
    )


def raw_for(n, **overrides):
    base = {
        "C1": (0,) * n,
        "C2": ("t",) * n,
        "C3": (0,) * n,
        "C4": (0.5,) * n,
        "C5": (0.0,) * n,
    }
    base.update(overrides)
    return base


def rows_for(table, confounder):
    return [row for row in table.rows if row.confounder == confounder]


class TestClassification:
    def test_uniformly_positive_ite_trends_up(self):
        n = 80
        raw = raw_for(n, C1=tuple(i % 2 for i in range(n)), C3=tuple(i % 2 for i in range(n)))
        table = classify_trends(result_for([0.5] * n), raw, TrendRules())
        populated = [row for row in table.rows if row.size >= 30]
        assert populated, "fixture produced no subgroup large enough"
        for row in populated:
            assert row.trend == "up"
            assert row.sign_consistency == 1.0
            assert row.contradicts_ate is False
        empty_high = [
            row for row in rows_for(table, "C4") if row.subgroup == "high"
        ][0]
        assert (empty_high.size, empty_high.trend, empty_high.mean_ite) == (0, "none", 0.0)

    def test_balanced_signs_give_no_trend(self):
        n = 40
        ite = [1.0, -1.0] * (n // 2)
        table = classify_trends(result_for(ite), raw_for(n), LOOSE)
        row = rows_for(table, "C2")[0]
        assert row.trend == "none"
        assert row.sign_consistency == 0.5

    def test_opposed_subgroups_contradict_a_zero_ate(self):
        n = 80
        genre = tuple(i % 2 for i in range(n))
        ite = [1.0 if g == 1 else -1.0 for g in genre]
        result = result_for(ite)
        assert result.ate == 0.0
        table = classify_trends(result, raw_for(n, C1=genre), TrendRules())
        by_subgroup = {row.subgroup: row for row in rows_for(table, "C1")}
        assert by_subgroup["creative"].trend == "up"
        assert by_subgroup["argumentative"].trend == "down"
        assert by_subgroup["creative"].contradicts_ate is True
        assert by_subgroup["argumentative"].contradicts_ate is True

    def test_small_subgroups_report_support_but_no_trend(self):
        n = 20
        table = classify_trends(result_for([0.5] * n), raw_for(n), TrendRules())
        row = rows_for(table, "C2")[0]
        assert row.trend == "none"
        assert row.size == n
        assert row.mean_ite == 0.5
        assert row.sign_consistency == 1.0

    def test_negating_ite_flips_direction(self):
        n = 60
        rng = np.random.default_rng(6)
        ite = rng.standard_normal(n) + 1.0
        raw = raw_for(n, C1=tuple(i % 2 for i in range(n)))
        up_table = classify_trends(result_for(ite), raw, LOOSE)
        down_table = classify_trends(result_for(-ite), raw, LOOSE)
        flips = {"up": "down", "down": "up", "none": "none"}
        for before, after in zip(up_table.rows, down_table.rows):
            assert after.trend == flips[before.trend]
            assert after.size == before.size
            assert after.mean_ite == -before.mean_ite

    def test_theta_threshold_is_inclusive(self):
        # 24 of 40 positive: consistency exactly 0.6 and a positive mean.
        ite = [1.0] * 24 + [-0.5] * 16
        result = result_for(ite)
        at_cut = classify_trends(result, raw_for(40), TrendRules(theta=0.6, min_size=1))
        above_cut = classify_trends(result, raw_for(40), TrendRules(theta=0.61, min_size=1))
        assert rows_for(at_cut, "C2")[0].trend == "up"
        assert rows_for(above_cut, "C2")[0].trend == "none"


class TestSubgroupDefinitions:
    def test_numeric_confounders_split_at_median_inclusive(self):
        raw = raw_for(3, C4=(1.0, 1.0, 2.0))
        table = classify_trends(result_for([0.5, 0.7, 0.9]), raw, LOOSE)
        by_subgroup = {row.subgroup: row for row in rows_for(table, "C4")}
        assert by_subgroup["low"].size == 2
        assert by_subgroup["high"].size == 1
        assert by_subgroup["low"].mean_ite == pytest.approx(0.6)
        assert by_subgroup["high"].mean_ite == pytest.approx(0.9)

    def test_topics_enumerate_in_sorted_order(self):
        raw = raw_for(3, C2=("beta", "alpha", "alpha"))
        table = classify_trends(result_for([1.0, 2.0, 3.0]), raw, LOOSE)
        rows = rows_for(table, "C2")
        assert [row.subgroup for row in rows] == ["alpha", "beta"]
        assert [row.size for row in rows] == [2, 1]

    def test_binary_confounder_labels(self):
        table = classify_trends(result_for([0.1, 0.2]), raw_for(2, C1=(0, 1), C3=(1, 0)), LOOSE)
        assert [row.subgroup for row in rows_for(table, "C1")] == [
            "argumentative",
            "creative",
        ]
        assert [row.subgroup for row in rows_for(table, "C3")] == [
            "non-native",
            "native",
        ]

    def test_row_identity_and_count(self):
        raw = raw_for(4, C2=("a", "a", "b", "b"))
        table = classify_trends(result_for([1.0, 1.0, 1.0, 1.0]), raw, LOOSE)
        assert len(table.rows) == 2 + 2 + 2 + 2 + 2
        assert {(row.treatment, row.outcome) for row in table.rows} == {("T1", "Y1")}
        assert [row.confounder for row in table.rows] == [
            "C1", "C1", "C2", "C2", "C3", "C3", "C4", "C4", "C5", "C5"
        ]


class TestValidation:
    def test_rules_ranges(self):
        with pytest.raises(EstimationError, match="theta"):
            TrendRules(theta=0.4)
        with pytest.raises(EstimationError, match="theta"):
            TrendRules(theta=1.1)
        with pytest.raises(EstimationError, match="min_size"):
            TrendRules(min_size=0)
        assert TrendRules(theta=0.5).theta == 0.5
        assert TrendRules(theta=1.0).theta == 1.0

    def test_missing_confounder_values(self):
        raw = raw_for(2)
        del raw["C3"]
        with pytest.raises(EstimationError, match="missing raw values"):
            classify_trends(result_for([0.1, 0.2]), raw, LOOSE)

    def test_length_mismatch(self):
        raw = raw_for(2, C4=(0.5,))
        with pytest.raises(EstimationError, match="expected"):
            classify_trends(result_for([0.1, 0.2]), raw, LOOSE)

    def test_output_columns(self):
        assert TREND_COLUMNS == (
            "treatment",
            "outcome",
            "confounder",
            "subgroup",
            "trend",
            "contradicts_ate",
            "size",
            "mean_ite",
            "sign_consistency",
        )


class TestOnFittedEstimates:
    def test_genre_driven_heterogeneity_recovered(self):
        import dgp
        from writelab import estimate_x_learner

        data, info = dgp.synthetic_dataset(
            n=1200, seed=77, tau=lambda raw: 2.0 * raw["C1"] - 1.0
        )
        result = estimate_x_learner(data, LearnerConfig(kind="ridge", seed=7))
        table = classify_trends(result, data.confounder_raw, TrendRules())
        by_subgroup = {row.subgroup: row for row in rows_for(table, "C1")}
        assert by_subgroup["creative"].trend == "up"
        assert by_subgroup["argumentative"].trend == "down"
