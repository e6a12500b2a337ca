"""Subgroup ITE trend classification across confounder-defined subgroups."""

from __future__ import annotations

from dataclasses import dataclass
from statistics import median
from typing import Mapping, Sequence

import numpy as np

from .errors import EstimationError
from .estimate import EstimationResult
from .graph import CONFOUNDERS

TREND_COLUMNS = (
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


@dataclass(frozen=True)
class TrendRules:
    """Explicit subgroup-trend rule: a direction needs at least `theta`
    sign-consistency and `min_size` sessions."""

    theta: float = 0.6
    min_size: int = 30

    def __post_init__(self) -> None:
        if not 0.5 <= self.theta <= 1.0:
            raise EstimationError(f"theta must lie in [0.5, 1.0], got {self.theta}")
        if self.min_size < 1:
            raise EstimationError(f"min_size must be positive, got {self.min_size}")


@dataclass(frozen=True)
class TrendRow:
    treatment: str
    outcome: str
    confounder: str
    subgroup: str
    trend: str
    contradicts_ate: bool
    size: int
    mean_ite: float
    sign_consistency: float


@dataclass(frozen=True)
class TrendTable:
    rows: tuple[TrendRow, ...]


def _split_label(value: float, cutoff: float) -> str:
    return "low" if value <= cutoff else "high"


def _subgroups_for(
    confounder: str,
    raw_values: Sequence,
) -> list[tuple[str, np.ndarray]]:
    values = list(raw_values)
    n = len(values)
    if confounder == "C1":
        labels = {0: "argumentative", 1: "creative"}
        return [
            (labels[level], np.array([v == level for v in values]))
            for level in (0, 1)
        ]
    if confounder == "C2":
        topics = sorted(set(values))
        return [
            (str(topic), np.array([v == topic for v in values]))
            for topic in topics
        ]
    if confounder == "C3":
        labels = {0: "non-native", 1: "native"}
        return [
            (labels[level], np.array([v == level for v in values]))
            for level in (0, 1)
        ]
    cutoff = median(float(v) for v in values)
    assignments = [_split_label(float(v), cutoff) for v in values]
    return [
        (side, np.array([a == side for a in assignments]))
        for side in ("low", "high")
    ]


def _classify(ite: np.ndarray, rules: TrendRules) -> tuple[str, float]:
    if ite.size == 0:
        return "none", 0.0
    mean = float(ite.mean())
    positive = float((ite > 0).mean())
    negative = float((ite < 0).mean())
    if mean > 0 and positive >= rules.theta:
        return "up", positive
    if mean < 0 and negative >= rules.theta:
        return "down", negative
    return "none", max(positive, negative)


def classify_trends(
    result: EstimationResult,
    confounder_raw: Mapping[str, Sequence],
    rules: TrendRules = TrendRules(),
) -> TrendTable:
    """Classify per-subgroup ITE direction for every confounder.

    Subgroups smaller than the rule minimum report their support but stay
    `none`; a non-none trend whose subgroup mean disagrees in sign with the
    corpus ATE is flagged as contradicting it.
    """
    n = len(result.session_ids)
    ate_sign = np.sign(result.ate)
    rows: list[TrendRow] = []
    for confounder in CONFOUNDERS:
        raw_values = confounder_raw.get(confounder)
        if raw_values is None:
            raise EstimationError(f"missing raw values for confounder {confounder}")
        if len(raw_values) != n:
            raise EstimationError(
                f"raw values for {confounder} have {len(raw_values)} entries, "
                f"expected {n}"
            )
        for subgroup, mask in _subgroups_for(confounder, raw_values):
            ite = result.ite[mask]
            size = int(mask.sum())
            if size < rules.min_size:
                trend, consistency = "none", (
                    _classify(ite, rules)[1] if size else 0.0
                )
            else:
                trend, consistency = _classify(ite, rules)
            mean_ite = float(ite.mean()) if size else 0.0
            contradicts = trend != "none" and np.sign(mean_ite) != ate_sign
            rows.append(
                TrendRow(
                    treatment=result.treatment,
                    outcome=result.outcome,
                    confounder=confounder,
                    subgroup=subgroup,
                    trend=trend,
                    contradicts_ate=bool(contradicts),
                    size=size,
                    mean_ite=mean_ite,
                    sign_consistency=consistency,
                )
            )
    return TrendTable(rows=tuple(rows))
