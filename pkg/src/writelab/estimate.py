"""Treatment-effect estimation: X-learner with S-/T-learner baselines."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .behavior import TREATMENTS, BehaviorProfile
from .errors import EstimationError, ValidationError
from .graph import CONFOUNDERS
from .ingest import SessionMeta
from .learners import REGRESSOR_KINDS, fit_propensity, fit_regressor
from .metrics import OUTCOMES, QualityVector
from .util import derive_seed

ESTIMATOR_METHODS = ("x-learner", "s-learner", "t-learner")

BASELINE_METHODS = ("s-learner", "t-learner")


@dataclass(frozen=True)
class LearnerConfig:
    """Base-learner choices shared by every fit inside one estimation."""

    kind: str = "ridge"
    ridge_lambda: float = 1.0
    rounds: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in REGRESSOR_KINDS:
            raise EstimationError(
                f"unknown base learner {self.kind!r}, expected one of {REGRESSOR_KINDS}"
            )
        if self.ridge_lambda < 0.0:
            raise EstimationError("ridge penalty must be non-negative")
        if self.rounds < 1:
            raise EstimationError("boosting rounds must be positive")


@dataclass(frozen=True, eq=False)
class AnalysisDataset:
    """One (treatment, outcome) pair's modelling table.

    `x` holds the encoded adjustment-set confounders; `feature_groups` maps
    each confounder to its column indices (the topic one-hot block shares one
    group). `confounder_raw` keeps the raw per-session values of all five
    confounders for subgroup reporting and plot coloring.
    """

    treatment: str
    outcome: str
    session_ids: tuple[str, ...]
    w: np.ndarray
    y: np.ndarray
    x: np.ndarray
    feature_names: tuple[str, ...]
    feature_groups: Mapping[str, tuple[int, ...]]
    confounder_raw: Mapping[str, tuple]
    n_dropped: int = 0

    def __post_init__(self) -> None:
        n = len(self.session_ids)
        if self.w.shape != (n,) or self.y.shape != (n,):
            raise EstimationError("treatment and outcome vectors must match row count")
        if self.x.shape[0] != n:
            raise EstimationError("confounder matrix must match row count")
        if self.x.shape[1] != len(self.feature_names):
            raise EstimationError("feature names must match confounder matrix columns")
        if n == 0:
            raise EstimationError("analysis dataset has no rows")
        if not np.isin(self.w, (0, 1)).all():
            raise EstimationError("treatment assignments must be binary")
        if not (self.w == 1).any() or not (self.w == 0).any():
            raise EstimationError(
                f"both treatment groups must be non-empty for {self.treatment}"
            )
        if not np.isfinite(self.y).all() or not np.isfinite(self.x).all():
            raise EstimationError("analysis dataset contains non-finite values")
        grouped = sorted(idx for indices in self.feature_groups.values() for idx in indices)
        if grouped != list(range(self.x.shape[1])):
            raise EstimationError("feature groups must partition the confounder columns")

    @property
    def n_rows(self) -> int:
        return len(self.session_ids)

    def subset(self, indices: Sequence[int]) -> "AnalysisDataset":
        """Row-resampled copy sharing the feature layout (for bootstrap)."""
        idx = np.asarray(indices, dtype=int)
        return AnalysisDataset(
            treatment=self.treatment,
            outcome=self.outcome,
            session_ids=tuple(self.session_ids[i] for i in idx),
            w=self.w[idx],
            y=self.y[idx],
            x=self.x[idx],
            feature_names=self.feature_names,
            feature_groups=self.feature_groups,
            confounder_raw={
                name: tuple(values[i] for i in idx)
                for name, values in self.confounder_raw.items()
            },
            n_dropped=self.n_dropped,
        )


@dataclass(frozen=True, eq=False)
class EstimationResult:
    """ATE/ITE estimates for one (treatment, outcome) pair."""

    treatment: str
    outcome: str
    method: str
    ate: float
    ite: np.ndarray
    session_ids: tuple[str, ...]
    learner: LearnerConfig
    propensity: Optional[np.ndarray] = None
    ci95: Optional[tuple[float, float]] = None
    n_dropped: int = 0
    ite_model: Callable[[np.ndarray], np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.ite.shape != (len(self.session_ids),):
            raise EstimationError("ite vector must have one entry per session")

    def with_ci(self, low: float, high: float) -> "EstimationResult":
        return replace(self, ci95=(low, high))


def canonical_adjustment(adjustment: Iterable[str]) -> tuple[str, ...]:
    """Deduplicate and order an adjustment set along C1..C5."""
    requested = set(adjustment)
    unknown = requested - set(CONFOUNDERS)
    if unknown:
        raise EstimationError(f"unknown confounders in adjustment set: {sorted(unknown)}")
    return tuple(name for name in CONFOUNDERS if name in requested)


def build_analysis_dataset(
    metas: Mapping[str, SessionMeta],
    profiles: Sequence[BehaviorProfile],
    quality: Mapping[str, QualityVector],
    treatment: str,
    outcome: str,
    adjustment: Iterable[str] = CONFOUNDERS,
) -> AnalysisDataset:
    """Assemble the modelling table for one (treatment, outcome) pair.

    Sessions whose binarized treatment is undefined (no accepted suggestions,
    for the acceptance-ratio treatments) are dropped and counted.
    """
    if treatment not in TREATMENTS:
        raise EstimationError(f"unknown treatment {treatment!r}, expected one of {TREATMENTS}")
    if outcome not in OUTCOMES:
        raise EstimationError(f"unknown outcome {outcome!r}, expected one of {OUTCOMES}")
    members = canonical_adjustment(adjustment)

    included: list[tuple[str, int, float, SessionMeta]] = []
    dropped = 0
    for profile in profiles:
        sid = profile.session_id
        meta = metas.get(sid)
        if meta is None:
            raise ValidationError(f"session {sid!r} missing from metadata")
        vector = quality.get(sid)
        if vector is None:
            raise ValidationError(f"session {sid!r} missing from quality table")
        assignment = profile.bin(treatment)
        if assignment is None:
            dropped += 1
            continue
        included.append((sid, assignment, vector.value(outcome), meta))
    if not included:
        raise EstimationError(f"no sessions left for {treatment} after validity filtering")

    session_ids = tuple(item[0] for item in included)
    w = np.array([item[1] for item in included], dtype=int)
    y = np.array([item[2] for item in included], dtype=float)
    included_metas = [item[3] for item in included]

    topics = tuple(sorted({meta.topic for meta in included_metas}))
    columns: list[np.ndarray] = []
    names: list[str] = []
    groups: dict[str, tuple[int, ...]] = {}
    for member in members:
        start = len(names)
        if member == "C1":
            columns.append(np.array([meta.genre for meta in included_metas], dtype=float))
            names.append("C1")
        elif member == "C2":
            for topic in topics:
                columns.append(
                    np.array(
                        [1.0 if meta.topic == topic else 0.0 for meta in included_metas]
                    )
                )
                names.append(f"C2={topic}")
        elif member == "C3":
            columns.append(np.array([meta.native for meta in included_metas], dtype=float))
            names.append("C3")
        elif member == "C4":
            columns.append(
                np.array([meta.temperature for meta in included_metas], dtype=float)
            )
            names.append("C4")
        else:
            columns.append(
                np.array([meta.frequency_penalty for meta in included_metas], dtype=float)
            )
            names.append("C5")
        groups[member] = tuple(range(start, len(names)))

    x = np.column_stack(columns) if columns else np.zeros((len(included), 0))
    confounder_raw = {
        "C1": tuple(meta.genre for meta in included_metas),
        "C2": tuple(meta.topic for meta in included_metas),
        "C3": tuple(meta.native for meta in included_metas),
        "C4": tuple(meta.temperature for meta in included_metas),
        "C5": tuple(meta.frequency_penalty for meta in included_metas),
    }
    return AnalysisDataset(
        treatment=treatment,
        outcome=outcome,
        session_ids=session_ids,
        w=w,
        y=y,
        x=x,
        feature_names=tuple(names),
        feature_groups=groups,
        confounder_raw=confounder_raw,
        n_dropped=dropped,
    )


def _fit(data_x: np.ndarray, targets: np.ndarray, config: LearnerConfig, tag: str) -> object:
    seed = derive_seed(config.seed, "fit", tag)
    return fit_regressor(
        data_x,
        targets,
        kind=config.kind,
        seed=seed,
        ridge_lambda=config.ridge_lambda,
        rounds=config.rounds,
    )


def estimate_x_learner(data: AnalysisDataset, config: LearnerConfig) -> EstimationResult:
    """Crossed metalearner: impute per-group effects, fit effect models,
    and blend them with the estimated propensity."""
    treated = data.w == 1
    control = ~treated
    mu0 = _fit(data.x[control], data.y[control], config, "mu0")
    mu1 = _fit(data.x[treated], data.y[treated], config, "mu1")
    d_treated = data.y[treated] - mu0.predict(data.x[treated])
    d_control = mu1.predict(data.x[control]) - data.y[control]
    tau1 = _fit(data.x[treated], d_treated, config, "tau1")
    tau0 = _fit(data.x[control], d_control, config, "tau0")
    propensity_model = fit_propensity(
        data.x, data.w.astype(float), seed=derive_seed(config.seed, "fit", "propensity")
    )

    def ite_model(features: np.ndarray) -> np.ndarray:
        g = propensity_model.predict_proba(features)
        return g * tau0.predict(features) + (1.0 - g) * tau1.predict(features)

    propensity = propensity_model.predict_proba(data.x)
    ite = propensity * tau0.predict(data.x) + (1.0 - propensity) * tau1.predict(data.x)
    return EstimationResult(
        treatment=data.treatment,
        outcome=data.outcome,
        method="x-learner",
        ate=float(np.mean(ite)),
        ite=ite,
        session_ids=data.session_ids,
        learner=config,
        propensity=propensity,
        n_dropped=data.n_dropped,
        ite_model=ite_model,
    )


def estimate_baseline(
    data: AnalysisDataset,
    kind: str,
    config: LearnerConfig,
) -> EstimationResult:
    """Single-model (s-learner) or per-group (t-learner) baselines."""
    if kind == "s-learner":
        stacked = np.column_stack([data.x, data.w.astype(float)])
        model = _fit(stacked, data.y, config, "s")

        def ite_model(features: np.ndarray) -> np.ndarray:
            ones = np.ones((features.shape[0], 1))
            return model.predict(np.column_stack([features, ones])) - model.predict(
                np.column_stack([features, 0.0 * ones])
            )

    elif kind == "t-learner":
        treated = data.w == 1
        mu0 = _fit(data.x[~treated], data.y[~treated], config, "t-mu0")
        mu1 = _fit(data.x[treated], data.y[treated], config, "t-mu1")

        def ite_model(features: np.ndarray) -> np.ndarray:
            return mu1.predict(features) - mu0.predict(features)

    else:
        raise EstimationError(
            f"unknown baseline {kind!r}, expected one of {BASELINE_METHODS}"
        )

    ite = ite_model(data.x)
    return EstimationResult(
        treatment=data.treatment,
        outcome=data.outcome,
        method=kind,
        ate=float(np.mean(ite)),
        ite=ite,
        session_ids=data.session_ids,
        learner=config,
        n_dropped=data.n_dropped,
        ite_model=ite_model,
    )


class BootstrapInterval(NamedTuple):
    low: float
    high: float
    dropped: int


def bootstrap_ci(
    data: AnalysisDataset,
    estimator: Callable[[AnalysisDataset], EstimationResult],
    replicates: int = 200,
    seed: int = 0,
) -> BootstrapInterval:
    """Percentile 2.5/97.5 interval of the ATE over resampled datasets.

    Replicates whose re-estimation fails are dropped; more than 20% failures
    aborts.
    """
    if replicates < 100:
        raise EstimationError("bootstrap requires at least 100 replicates")
    rng = np.random.default_rng(
        derive_seed(seed, "bootstrap", data.treatment, data.outcome)
    )
    n = data.n_rows
    index_matrix = rng.integers(0, n, size=(replicates, n))
    effects: list[float] = []
    dropped = 0
    for row in index_matrix:
        try:
            effects.append(estimator(data.subset(row)).ate)
        except EstimationError:
            dropped += 1
    if dropped > 0.2 * replicates:
        raise EstimationError(
            f"{dropped} of {replicates} bootstrap replicates failed to estimate"
        )
    low, high = np.percentile(np.array(effects), [2.5, 97.5])
    return BootstrapInterval(low=float(low), high=float(high), dropped=dropped)
