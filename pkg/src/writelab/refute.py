"""Robustness checks: random common cause, placebo treatment, data subset."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EstimationError
from .estimate import (
    AnalysisDataset,
    EstimationResult,
    estimate_baseline,
    estimate_x_learner,
)
from .util import derive_seed, two_sided_p_value

REFUTER_KINDS = ("rcc", "placebo", "dsr")

MIN_SIMULATIONS = 50

PASS_THRESHOLD = 0.05

_SUBSET_RETRIES = 10


@dataclass(frozen=True)
class RefutationReport:
    """Outcome of one robustness check on one estimate."""

    kind: str
    new_effect: float
    p_value: float
    simulations: int
    seed: int
    simulated_effects: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in REFUTER_KINDS:
            raise EstimationError(f"unknown refuter kind: {self.kind!r}")
        if self.simulations < MIN_SIMULATIONS:
            raise EstimationError(
                f"refutation needs at least {MIN_SIMULATIONS} simulations, "
                f"got {self.simulations}"
            )
        if not 0.0 <= self.p_value <= 1.0:
            raise EstimationError(f"p-value {self.p_value} outside [0, 1]")

    @property
    def passed(self) -> bool:
        return self.p_value > PASS_THRESHOLD


def _estimator_for(result: EstimationResult) -> Callable[[AnalysisDataset], EstimationResult]:
    if result.method == "x-learner":
        return lambda data: estimate_x_learner(data, result.learner)
    return lambda data: estimate_baseline(data, result.method, result.learner)


def _simulated_statistics(effects: np.ndarray) -> tuple[float, float]:
    mean = float(effects.mean())
    sd = float(effects.std(ddof=1)) if effects.size > 1 else 0.0
    return mean, sd


def refute_random_common_cause(
    data: AnalysisDataset,
    result: EstimationResult,
    simulations: int = 100,
    seed: int = 0,
) -> RefutationReport:
    """Append an independent standard-normal covariate and re-estimate.

    A trustworthy estimate should barely move, so the original ATE is tested
    against the simulated effect distribution.
    """
    if simulations < MIN_SIMULATIONS:
        raise EstimationError(
            f"refutation needs at least {MIN_SIMULATIONS} simulations, got {simulations}"
        )
    estimator = _estimator_for(result)
    rng = np.random.default_rng(derive_seed(seed, "rcc", data.treatment, data.outcome))
    effects = []
    for _ in range(simulations):
        noise = rng.standard_normal(data.n_rows)
        augmented = AnalysisDataset(
            treatment=data.treatment,
            outcome=data.outcome,
            session_ids=data.session_ids,
            w=data.w,
            y=data.y,
            x=np.column_stack([data.x, noise]),
            feature_names=data.feature_names + ("random_common_cause",),
            feature_groups={
                **data.feature_groups,
                "random_common_cause": (data.x.shape[1],),
            },
            confounder_raw=data.confounder_raw,
            n_dropped=data.n_dropped,
        )
        effects.append(estimator(augmented).ate)
    effects_arr = np.array(effects)
    mean, sd = _simulated_statistics(effects_arr)
    return RefutationReport(
        kind="rcc",
        new_effect=mean,
        p_value=two_sided_p_value(result.ate, mean, sd),
        simulations=simulations,
        seed=seed,
        simulated_effects=tuple(effects),
    )


def refute_placebo(
    data: AnalysisDataset,
    result: EstimationResult,
    simulations: int = 100,
    seed: int = 0,
) -> RefutationReport:
    """Permute the treatment assignments and re-estimate.

    Permutation severs any real effect, so the simulated effects are tested
    against zero.
    """
    if simulations < MIN_SIMULATIONS:
        raise EstimationError(
            f"refutation needs at least {MIN_SIMULATIONS} simulations, got {simulations}"
        )
    estimator = _estimator_for(result)
    rng = np.random.default_rng(derive_seed(seed, "placebo", data.treatment, data.outcome))
    effects = []
    for _ in range(simulations):
        permuted = AnalysisDataset(
            treatment=data.treatment,
            outcome=data.outcome,
            session_ids=data.session_ids,
            w=rng.permutation(data.w),
            y=data.y,
            x=data.x,
            feature_names=data.feature_names,
            feature_groups=data.feature_groups,
            confounder_raw=data.confounder_raw,
            n_dropped=data.n_dropped,
        )
        effects.append(estimator(permuted).ate)
    effects_arr = np.array(effects)
    mean, sd = _simulated_statistics(effects_arr)
    return RefutationReport(
        kind="placebo",
        new_effect=mean,
        p_value=two_sided_p_value(0.0, mean, sd),
        simulations=simulations,
        seed=seed,
        simulated_effects=tuple(effects),
    )


def refute_data_subset(
    data: AnalysisDataset,
    result: EstimationResult,
    simulations: int = 100,
    fraction: float = 0.8,
    seed: int = 0,
) -> RefutationReport:
    """Re-estimate on random subsets drawn without replacement."""
    if simulations < MIN_SIMULATIONS:
        raise EstimationError(
            f"refutation needs at least {MIN_SIMULATIONS} simulations, got {simulations}"
        )
    if not 0.5 < fraction < 1.0:
        raise EstimationError(
            f"subset fraction must lie strictly between 0.5 and 1.0, got {fraction}"
        )
    estimator = _estimator_for(result)
    rng = np.random.default_rng(derive_seed(seed, "dsr", data.treatment, data.outcome))
    size = int(round(fraction * data.n_rows))
    size = max(1, min(size, data.n_rows))
    effects = []
    for _ in range(simulations):
        subset = None
        for _attempt in range(_SUBSET_RETRIES):
            indices = np.sort(rng.choice(data.n_rows, size=size, replace=False))
            drawn_w = data.w[indices]
            if (drawn_w == 1).any() and (drawn_w == 0).any():
                subset = data.subset(indices)
                break
        if subset is None:
            raise EstimationError(
                f"data-subset refuter lost a treatment group in {_SUBSET_RETRIES} "
                "consecutive draws"
            )
        effects.append(estimator(subset).ate)
    effects_arr = np.array(effects)
    mean, sd = _simulated_statistics(effects_arr)
    return RefutationReport(
        kind="dsr",
        new_effect=mean,
        p_value=two_sided_p_value(result.ate, mean, sd),
        simulations=simulations,
        seed=seed,
        simulated_effects=tuple(effects),
    )
