"""Configuration loading and the file-based pipeline stages.

Every stage reads its inputs from the output directory (or the configured
corpus paths) and writes plain CSV intermediates, so each stage can be rerun
independently and the whole pipeline is the concatenation of its stages.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .behavior import (
    TREATMENTS,
    BehaviorProfile,
    binarize_treatments,
    extract_behavior_profile,
    read_behavior_csv,
    write_behavior_csv,
)
from .errors import (
    ConfigError,
    DataError,
    EstimationError,
    UndefinedMetricError,
    WritelabError,
)
from .estimate import (
    AnalysisDataset,
    EstimationResult,
    LearnerConfig,
    bootstrap_ci,
    build_analysis_dataset,
    estimate_x_learner,
)
from .explain import (
    BEESWARM_COLUMNS,
    emit_beeswarm_data,
    render_beeswarm_svg,
    sample_background,
    shapley_attributions,
)
from .graph import CONFOUNDERS, CausalGraph, backdoor_sets, parse_edge_list
from .ingest import (
    METADATA_COLUMNS,
    SessionMeta,
    SpanOrigin,
    load_session_log,
    load_session_metadata,
    reconstruct_document,
    segment_suggestion_episodes,
)
from .learners import REGRESSOR_KINDS
from .lexicons import load_lexicons
from .metrics import (
    OUTCOMES,
    QualityVector,
    compute_quality,
    read_quality_csv,
    write_quality_csv,
)
from .refute import (
    refute_data_subset,
    refute_placebo,
    refute_random_common_cause,
)
from .trends import TREND_COLUMNS, TrendRules, classify_trends
from .util import read_csv_rows, write_csv_atomic, write_text_atomic

STAGES = ("ingest", "metrics", "estimate", "refute", "explain", "report")

SESSIONS_CSV = "sessions.csv"
DOCUMENTS_CSV = "documents.csv"
BEHAVIOR_CSV = "behavior.csv"
QUALITY_CSV = "quality.csv"
IDENTIFICATION_CSV = "identification.csv"
ATE_TABLE_CSV = "ate_table.csv"
TREND_TABLE_CSV = "trend_table.csv"
MANIFEST_JSON = "manifest.json"

DOCUMENT_COLUMNS = (
    "session_id",
    "human_chars",
    "api_verbatim_chars",
    "api_modified_chars",
    "text",
)

IDENTIFICATION_COLUMNS = (
    "treatment",
    "outcome",
    "adjustment_set",
    "n_valid_sets",
    "valid_sets",
)

ATE_TABLE_COLUMNS = (
    "treatment",
    "outcome",
    "ate",
    "ci_low",
    "ci_high",
    "n_sessions",
    "n_dropped",
    "rcc_effect",
    "rcc_p",
    "placebo_effect",
    "placebo_p",
    "dsr_effect",
    "dsr_p",
)


@dataclass(frozen=True)
class PipelineConfig:
    """Validated run configuration with resolved paths."""

    seed: int
    session_dir: Path
    metadata_csv: Path
    output_dir: Path
    lexicon_dir: Optional[Path] = None
    graph_file: Optional[Path] = None
    treatments: tuple[str, ...] = TREATMENTS
    outcomes: tuple[str, ...] = OUTCOMES
    learner_kind: str = "ridge"
    ridge_lambda: float = 1.0
    boosting_rounds: int = 200
    bootstrap_replicates: int = 200
    refuter_simulations: int = 100
    refuter_fraction: float = 0.8
    shap_background: int = 100
    shap_svg: bool = True
    trend_theta: float = 0.6
    trend_min_size: int = 30
    genbit_window: int = 10
    jobs: int = 1

    def learner_config(self) -> LearnerConfig:
        return LearnerConfig(
            kind=self.learner_kind,
            ridge_lambda=self.ridge_lambda,
            rounds=self.boosting_rounds,
            seed=self.seed,
        )

    def trend_rules(self) -> TrendRules:
        return TrendRules(theta=self.trend_theta, min_size=self.trend_min_size)


_TOP_LEVEL_KEYS = {
    "seed",
    "session_dir",
    "metadata_csv",
    "output_dir",
    "lexicon_dir",
    "graph_file",
    "treatments",
    "outcomes",
    "learner",
    "bootstrap",
    "refutation",
    "shap",
    "trends",
    "genbit_window",
    "jobs",
}

_SECTION_KEYS = {
    "learner": {"kind", "ridge_lambda", "rounds"},
    "bootstrap": {"replicates"},
    "refutation": {"simulations", "fraction"},
    "shap": {"background_size", "svg"},
    "trends": {"theta", "min_size"},
}


def _reject_unknown(mapping: Mapping, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} key(s): {', '.join(unknown)}")


def _expect_int(value: object, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _expect_number(value: object, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _expect_str(value: object, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise ConfigError(f"{where} must be a non-empty string, got {value!r}")
    return value


def _expect_bool(value: object, where: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{where} must be true or false, got {value!r}")
    return value


def _expect_labels(
    value: object, universe: tuple[str, ...], where: str
) -> tuple[str, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where} must be a non-empty list")
    unknown = sorted(set(value) - set(universe))
    if unknown:
        raise ConfigError(f"unknown {where} entries: {', '.join(map(str, unknown))}")
    return tuple(label for label in universe if label in set(value))


def load_config(
    config_path: Path | str,
    seed: Optional[int] = None,
    out: Optional[Path | str] = None,
    jobs: Optional[int] = None,
) -> PipelineConfig:
    """Load and validate the JSON run configuration.

    Relative paths resolve against the config file's directory. `seed`,
    `out`, and `jobs` override the file's values. Every referenced input
    path must exist.
    """
    config_path = Path(config_path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(raw, _TOP_LEVEL_KEYS, "config")
    for section, allowed in _SECTION_KEYS.items():
        if section in raw:
            if not isinstance(raw[section], dict):
                raise ConfigError(f"config section {section!r} must be an object")
            _reject_unknown(raw[section], allowed, f"config.{section}")

    base = config_path.resolve().parent

    def resolve(value: object, where: str) -> Path:
        return (base / Path(_expect_str(value, where))).resolve()

    if seed is None:
        if "seed" not in raw:
            raise ConfigError("config must set a seed")
        seed = _expect_int(raw["seed"], "seed")
    if "session_dir" not in raw or "metadata_csv" not in raw:
        raise ConfigError("config must set session_dir and metadata_csv")
    session_dir = resolve(raw["session_dir"], "session_dir")
    metadata_csv = resolve(raw["metadata_csv"], "metadata_csv")
    if out is not None:
        output_dir = Path(out).resolve()
    elif "output_dir" in raw:
        output_dir = resolve(raw["output_dir"], "output_dir")
    else:
        output_dir = (base / "out").resolve()
    lexicon_dir = (
        resolve(raw["lexicon_dir"], "lexicon_dir") if raw.get("lexicon_dir") else None
    )
    graph_file = (
        resolve(raw["graph_file"], "graph_file") if raw.get("graph_file") else None
    )

    learner = raw.get("learner", {})
    bootstrap = raw.get("bootstrap", {})
    refutation = raw.get("refutation", {})
    shap = raw.get("shap", {})
    trend = raw.get("trends", {})

    kind = _expect_str(learner.get("kind", "ridge"), "learner.kind")
    if kind not in REGRESSOR_KINDS:
        raise ConfigError(
            f"learner.kind must be one of {REGRESSOR_KINDS}, got {kind!r}"
        )
    ridge_lambda = _expect_number(learner.get("ridge_lambda", 1.0), "learner.ridge_lambda")
    if ridge_lambda < 0:
        raise ConfigError("learner.ridge_lambda must be non-negative")
    rounds = _expect_int(learner.get("rounds", 200), "learner.rounds")
    if rounds < 1:
        raise ConfigError("learner.rounds must be positive")
    replicates = _expect_int(bootstrap.get("replicates", 200), "bootstrap.replicates")
    if replicates < 100:
        raise ConfigError("bootstrap.replicates must be at least 100")
    simulations = _expect_int(refutation.get("simulations", 100), "refutation.simulations")
    if simulations < 50:
        raise ConfigError("refutation.simulations must be at least 50")
    fraction = _expect_number(refutation.get("fraction", 0.8), "refutation.fraction")
    if not 0.5 < fraction < 1.0:
        raise ConfigError("refutation.fraction must lie strictly between 0.5 and 1.0")
    background = _expect_int(shap.get("background_size", 100), "shap.background_size")
    if background < 1:
        raise ConfigError("shap.background_size must be positive")
    svg = _expect_bool(shap.get("svg", True), "shap.svg")
    theta = _expect_number(trend.get("theta", 0.6), "trends.theta")
    if not 0.5 <= theta <= 1.0:
        raise ConfigError("trends.theta must lie in [0.5, 1.0]")
    min_size = _expect_int(trend.get("min_size", 30), "trends.min_size")
    if min_size < 1:
        raise ConfigError("trends.min_size must be positive")
    genbit_window = _expect_int(raw.get("genbit_window", 10), "genbit_window")
    if genbit_window < 1:
        raise ConfigError("genbit_window must be positive")
    if jobs is None:
        jobs = _expect_int(raw.get("jobs", 1), "jobs")
    if jobs < 1:
        raise ConfigError("jobs must be positive")

    treatments = (
        _expect_labels(raw["treatments"], TREATMENTS, "treatments")
        if "treatments" in raw
        else TREATMENTS
    )
    outcomes = (
        _expect_labels(raw["outcomes"], OUTCOMES, "outcomes")
        if "outcomes" in raw
        else OUTCOMES
    )

    if not session_dir.is_dir():
        raise ConfigError(f"session_dir does not exist: {session_dir}")
    if not metadata_csv.is_file():
        raise ConfigError(f"metadata_csv does not exist: {metadata_csv}")
    if lexicon_dir is not None and not lexicon_dir.is_dir():
        raise ConfigError(f"lexicon_dir does not exist: {lexicon_dir}")
    if graph_file is not None and not graph_file.is_file():
        raise ConfigError(f"graph_file does not exist: {graph_file}")

    return PipelineConfig(
        seed=seed,
        session_dir=session_dir,
        metadata_csv=metadata_csv,
        output_dir=output_dir,
        lexicon_dir=lexicon_dir,
        graph_file=graph_file,
        treatments=treatments,
        outcomes=outcomes,
        learner_kind=kind,
        ridge_lambda=ridge_lambda,
        boosting_rounds=rounds,
        bootstrap_replicates=replicates,
        refuter_simulations=simulations,
        refuter_fraction=fraction,
        shap_background=background,
        shap_svg=svg,
        trend_theta=theta,
        trend_min_size=min_size,
        genbit_window=genbit_window,
        jobs=jobs,
    )


class _StageWriter:
    """Tracks files written by a stage so failures can remove partial output."""

    def __init__(self) -> None:
        self.written: list[Path] = []

    def csv(self, path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
        write_csv_atomic(path, header, rows)
        self.written.append(path)

    def text(self, path: Path, content: str) -> None:
        write_text_atomic(path, content)
        self.written.append(path)

    def track(self, path: Path) -> Path:
        self.written.append(path)
        return path

    def discard_all(self) -> None:
        for path in self.written:
            path.unlink(missing_ok=True)


def _stage(name: str, body: Callable[[PipelineConfig, _StageWriter], dict]):
    def run(config: PipelineConfig) -> dict:
        config.output_dir.mkdir(parents=True, exist_ok=True)
        writer = _StageWriter()
        try:
            return body(config, writer)
        except WritelabError as exc:
            writer.discard_all()
            try:
                wrapped = type(exc)(f"{name} stage: {exc}")
            except TypeError:
                wrapped = WritelabError(f"{name} stage: {exc}")
            raise wrapped from exc

    run.__name__ = f"run_{name}"
    return run


def _require(path: Path, producer: str) -> Path:
    if not path.is_file():
        raise DataError(
            f"required file {path.name} not found in {path.parent}; "
            f"run `writelab {producer}` first"
        )
    return path


# --------------------------------------------------------------------------
# ingest
# --------------------------------------------------------------------------


def _ingest_session(args: tuple[str, str, SessionMeta]) -> tuple[str, str, dict, BehaviorProfile]:
    session_dir, session_id, meta = args
    path = Path(session_dir) / f"{session_id}.jsonl"
    if not path.is_file():
        raise DataError(f"session log not found: {path}")
    log = load_session_log(path, meta)
    document = reconstruct_document(log)
    episodes = segment_suggestion_episodes(log)
    profile = extract_behavior_profile(session_id, episodes)
    chars = {origin.value: 0 for origin in SpanOrigin}
    for span in document.spans:
        chars[span.origin.value] += span.end - span.start
    return session_id, document.text, chars, profile


def _map_jobs(fn: Callable, tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (jobs * 4))))


def _ingest_body(config: PipelineConfig, writer: _StageWriter) -> dict:
    metas = load_session_metadata(config.metadata_csv)
    session_ids = sorted(metas)
    tasks = [(str(config.session_dir), sid, metas[sid]) for sid in session_ids]
    results = _map_jobs(_ingest_session, tasks, config.jobs)

    session_rows = []
    document_rows = []
    profiles = []
    for session_id, text, chars, profile in results:
        meta = metas[session_id]
        session_rows.append(
            (
                session_id,
                meta.genre,
                meta.topic,
                meta.native,
                meta.temperature,
                meta.frequency_penalty,
            )
        )
        document_rows.append(
            (
                session_id,
                chars[SpanOrigin.HUMAN.value],
                chars[SpanOrigin.API_VERBATIM.value],
                chars[SpanOrigin.API_MODIFIED.value],
                text,
            )
        )
        profiles.append(profile)
    profiles = binarize_treatments(profiles)

    writer.csv(config.output_dir / SESSIONS_CSV, METADATA_COLUMNS, session_rows)
    writer.csv(config.output_dir / DOCUMENTS_CSV, DOCUMENT_COLUMNS, document_rows)
    behavior_path = writer.track(config.output_dir / BEHAVIOR_CSV)
    write_behavior_csv(profiles, behavior_path)
    return {"sessions": len(session_ids)}


run_ingest = _stage("ingest", _ingest_body)


# --------------------------------------------------------------------------
# metrics
# --------------------------------------------------------------------------


def _quality_session(args: tuple[str, str, Optional[str], int]) -> tuple[str, QualityVector]:
    session_id, text, lexicon_dir, window = args
    lexicons = load_lexicons(Path(lexicon_dir) if lexicon_dir else None)
    try:
        return session_id, compute_quality(text, lexicons, bias_window=window)
    except UndefinedMetricError as exc:
        raise UndefinedMetricError(f"session {session_id}: {exc}") from exc


def _metrics_body(config: PipelineConfig, writer: _StageWriter) -> dict:
    documents = read_csv_rows(_require(config.output_dir / DOCUMENTS_CSV, "ingest"))
    lexicon_dir = str(config.lexicon_dir) if config.lexicon_dir else None
    tasks = [
        (row["session_id"], row["text"], lexicon_dir, config.genbit_window)
        for row in documents
    ]
    rows = _map_jobs(_quality_session, tasks, config.jobs)
    quality_path = writer.track(config.output_dir / QUALITY_CSV)
    write_quality_csv(rows, quality_path)
    return {"sessions": len(rows)}


run_metrics = _stage("metrics", _metrics_body)


# --------------------------------------------------------------------------
# estimate
# --------------------------------------------------------------------------


def _read_sessions(out_dir: Path) -> dict[str, SessionMeta]:
    rows = read_csv_rows(_require(out_dir / SESSIONS_CSV, "ingest"))
    metas: dict[str, SessionMeta] = {}
    for row in rows:
        metas[row["session_id"]] = SessionMeta(
            genre=int(row["genre"]),
            topic=row["topic"],
            native=int(row["native"]),
            temperature=float(row["temperature"]),
            frequency_penalty=float(row["frequency_penalty"]),
        )
    return metas


def _analysis_graph(config: PipelineConfig, treatment: str, outcome: str) -> tuple[CausalGraph, str, str]:
    """The identification graph for a pair, plus its treatment/outcome node
    names (custom graphs use the literal placeholders T and Y)."""
    from .graph import default_graph

    if config.graph_file is None:
        return default_graph(treatment, outcome), treatment, outcome
    graph = parse_edge_list(config.graph_file.read_text(encoding="utf-8"))
    missing = {"T", "Y"} - set(graph.nodes)
    if missing:
        raise DataError(
            f"custom graph must contain node(s) {sorted(missing)} as the "
            "treatment/outcome placeholders"
        )
    stray = set(graph.nodes) - {"T", "Y"} - set(CONFOUNDERS)
    if stray:
        raise DataError(
            f"custom graph contains unsupported node(s): {sorted(stray)}; "
            f"only T, Y, and {', '.join(CONFOUNDERS)} are recognized"
        )
    return graph, "T", "Y"


def _identify_pairs(
    config: PipelineConfig,
) -> tuple[list[tuple[str, str, tuple[str, ...]]], list[tuple]]:
    assignments = []
    id_rows = []
    for treatment in config.treatments:
        for outcome in config.outcomes:
            graph, t_node, y_node = _analysis_graph(config, treatment, outcome)
            sets = backdoor_sets(graph, t_node, y_node)
            if not sets:
                raise EstimationError(
                    f"no valid back-door adjustment set exists for "
                    f"({treatment}, {outcome})"
                )
            chosen = sets[-1]
            assignments.append((treatment, outcome, chosen))
            id_rows.append(
                (
                    treatment,
                    outcome,
                    " ".join(chosen),
                    len(sets),
                    "|".join(" ".join(s) for s in sets),
                )
            )
    return assignments, id_rows


def _build_pair_dataset(
    config: PipelineConfig,
    treatment: str,
    outcome: str,
    adjustment: tuple[str, ...],
    metas: Mapping[str, SessionMeta],
    profiles: Sequence[BehaviorProfile],
    quality: Mapping[str, QualityVector],
) -> AnalysisDataset:
    return build_analysis_dataset(
        metas, profiles, quality, treatment, outcome, adjustment=adjustment
    )


def _estimate_body(config: PipelineConfig, writer: _StageWriter) -> dict:
    metas = _read_sessions(config.output_dir)
    profiles = read_behavior_csv(_require(config.output_dir / BEHAVIOR_CSV, "ingest"))
    quality = read_quality_csv(_require(config.output_dir / QUALITY_CSV, "metrics"))
    assignments, id_rows = _identify_pairs(config)
    learner = config.learner_config()

    ate_rows = []
    pair_counts = []
    for treatment, outcome, adjustment in assignments:
        data = _build_pair_dataset(
            config, treatment, outcome, adjustment, metas, profiles, quality
        )
        result = estimate_x_learner(data, learner)
        interval = bootstrap_ci(
            data,
            lambda d: estimate_x_learner(d, learner),
            replicates=config.bootstrap_replicates,
            seed=config.seed,
        )
        writer.csv(
            config.output_dir / f"ite_{treatment}_{outcome}.csv",
            ("session_id", "ite", "propensity"),
            [
                (sid, float(result.ite[i]), float(result.propensity[i]))
                for i, sid in enumerate(result.session_ids)
            ],
        )
        ate_rows.append(
            [
                treatment,
                outcome,
                result.ate,
                interval.low,
                interval.high,
                data.n_rows,
                data.n_dropped,
                None,
                None,
                None,
                None,
                None,
                None,
            ]
        )
        pair_counts.append(
            {
                "treatment": treatment,
                "outcome": outcome,
                "n_sessions": data.n_rows,
                "n_dropped": data.n_dropped,
            }
        )
    writer.csv(config.output_dir / IDENTIFICATION_CSV, IDENTIFICATION_COLUMNS, id_rows)
    writer.csv(config.output_dir / ATE_TABLE_CSV, ATE_TABLE_COLUMNS, ate_rows)
    return {"pairs": pair_counts}


run_estimate = _stage("estimate", _estimate_body)


# --------------------------------------------------------------------------
# refute / explain shared re-estimation
# --------------------------------------------------------------------------


def _read_identification(out_dir: Path) -> dict[tuple[str, str], tuple[str, ...]]:
    rows = read_csv_rows(_require(out_dir / IDENTIFICATION_CSV, "estimate"))
    chosen = {}
    for row in rows:
        members = tuple(row["adjustment_set"].split()) if row["adjustment_set"] else ()
        chosen[(row["treatment"], row["outcome"])] = members
    return chosen


def _reestimate_pairs(
    config: PipelineConfig,
) -> list[tuple[AnalysisDataset, EstimationResult]]:
    """Rebuild each pair's dataset and point estimate from the cached
    intermediates; deterministic seeding reproduces the estimate stage."""
    metas = _read_sessions(config.output_dir)
    profiles = read_behavior_csv(_require(config.output_dir / BEHAVIOR_CSV, "ingest"))
    quality = read_quality_csv(_require(config.output_dir / QUALITY_CSV, "metrics"))
    chosen = _read_identification(config.output_dir)
    learner = config.learner_config()
    pairs = []
    for treatment in config.treatments:
        for outcome in config.outcomes:
            if (treatment, outcome) not in chosen:
                raise DataError(
                    f"pair ({treatment}, {outcome}) missing from "
                    f"{IDENTIFICATION_CSV}; run `writelab estimate` first"
                )
            data = _build_pair_dataset(
                config,
                treatment,
                outcome,
                chosen[(treatment, outcome)],
                metas,
                profiles,
                quality,
            )
            pairs.append((data, estimate_x_learner(data, learner)))
    return pairs


def _refute_body(config: PipelineConfig, writer: _StageWriter) -> dict:
    table = read_csv_rows(_require(config.output_dir / ATE_TABLE_CSV, "estimate"))
    by_pair = {(row["treatment"], row["outcome"]): row for row in table}
    passes = 0
    checks = 0
    for data, result in _reestimate_pairs(config):
        key = (result.treatment, result.outcome)
        if key not in by_pair:
            raise DataError(
                f"pair {key} missing from {ATE_TABLE_CSV}; run `writelab estimate` first"
            )
        row = by_pair[key]
        if float(row["ate"]) != result.ate:
            raise DataError(
                f"cached ATE for pair {key} does not match the re-estimate; "
                "rerun `writelab estimate` with the current config"
            )
        rcc = refute_random_common_cause(
            data, result, simulations=config.refuter_simulations, seed=config.seed
        )
        placebo = refute_placebo(
            data, result, simulations=config.refuter_simulations, seed=config.seed
        )
        dsr = refute_data_subset(
            data,
            result,
            simulations=config.refuter_simulations,
            fraction=config.refuter_fraction,
            seed=config.seed,
        )
        row["rcc_effect"] = rcc.new_effect
        row["rcc_p"] = rcc.p_value
        row["placebo_effect"] = placebo.new_effect
        row["placebo_p"] = placebo.p_value
        row["dsr_effect"] = dsr.new_effect
        row["dsr_p"] = dsr.p_value
        checks += 3
        passes += sum(report.passed for report in (rcc, placebo, dsr))
    ordered = []
    for row in table:
        ordered.append(
            [
                row["treatment"],
                row["outcome"],
                float(row["ate"]),
                float(row["ci_low"]),
                float(row["ci_high"]),
                int(row["n_sessions"]),
                int(row["n_dropped"]),
                _as_float_cell(row["rcc_effect"]),
                _as_float_cell(row["rcc_p"]),
                _as_float_cell(row["placebo_effect"]),
                _as_float_cell(row["placebo_p"]),
                _as_float_cell(row["dsr_effect"]),
                _as_float_cell(row["dsr_p"]),
            ]
        )
    writer.csv(config.output_dir / ATE_TABLE_CSV, ATE_TABLE_COLUMNS, ordered)
    return {"checks": checks, "passed": passes}


def _as_float_cell(value: object) -> Optional[float]:
    if value in ("", None):
        return None
    return float(value)


run_refute = _stage("refute", _refute_body)


def _explain_body(config: PipelineConfig, writer: _StageWriter) -> dict:
    emitted = 0
    for data, result in _reestimate_pairs(config):
        background = sample_background(
            data.x, size=config.shap_background, seed=config.seed
        )
        shap = shapley_attributions(
            result.ite_model,
            data.x,
            background,
            data.feature_groups,
            session_ids=data.session_ids,
        )
        rows = emit_beeswarm_data(shap, data.confounder_raw)
        stem = f"beeswarm_{result.treatment}_{result.outcome}"
        writer.csv(config.output_dir / f"{stem}.csv", BEESWARM_COLUMNS, rows)
        if config.shap_svg:
            writer.text(
                config.output_dir / f"{stem}.svg",
                render_beeswarm_svg(shap, data.confounder_raw),
            )
        emitted += 1
    return {"pairs": emitted}


run_explain = _stage("explain", _explain_body)


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------


def _report_body(config: PipelineConfig, writer: _StageWriter) -> dict:
    """Classify subgroup trends from the cached ITE files; no re-fitting."""
    import numpy as np

    metas = _read_sessions(config.output_dir)
    table = read_csv_rows(_require(config.output_dir / ATE_TABLE_CSV, "estimate"))
    by_pair = {(row["treatment"], row["outcome"]): row for row in table}
    rules = config.trend_rules()
    rows = []
    for treatment in config.treatments:
        for outcome in config.outcomes:
            ite_path = _require(
                config.output_dir / f"ite_{treatment}_{outcome}.csv", "estimate"
            )
            ite_rows = read_csv_rows(ite_path)
            if (treatment, outcome) not in by_pair:
                raise DataError(
                    f"pair ({treatment}, {outcome}) missing from {ATE_TABLE_CSV}; "
                    "run `writelab estimate` first"
                )
            session_ids = tuple(row["session_id"] for row in ite_rows)
            ite = np.array([float(row["ite"]) for row in ite_rows])
            result = EstimationResult(
                treatment=treatment,
                outcome=outcome,
                method="x-learner",
                ate=float(by_pair[(treatment, outcome)]["ate"]),
                ite=ite,
                session_ids=session_ids,
                learner=config.learner_config(),
            )
            missing = [sid for sid in session_ids if sid not in metas]
            if missing:
                raise DataError(
                    f"session {missing[0]!r} in {ite_path.name} is absent from "
                    f"{SESSIONS_CSV}"
                )
            confounder_raw = {
                "C1": tuple(metas[sid].genre for sid in session_ids),
                "C2": tuple(metas[sid].topic for sid in session_ids),
                "C3": tuple(metas[sid].native for sid in session_ids),
                "C4": tuple(metas[sid].temperature for sid in session_ids),
                "C5": tuple(metas[sid].frequency_penalty for sid in session_ids),
            }
            trend_table = classify_trends(result, confounder_raw, rules)
            for row in trend_table.rows:
                rows.append(
                    (
                        row.treatment,
                        row.outcome,
                        row.confounder,
                        row.subgroup,
                        row.trend,
                        row.contradicts_ate,
                        row.size,
                        row.mean_ite,
                        row.sign_consistency,
                    )
                )
    writer.csv(config.output_dir / TREND_TABLE_CSV, TREND_COLUMNS, rows)
    return {"rows": len(rows)}


run_report = _stage("report", _report_body)


# --------------------------------------------------------------------------
# full run
# --------------------------------------------------------------------------


def run_pipeline(config: PipelineConfig, config_path: Optional[Path] = None) -> dict:
    """Execute every stage in order and write the run manifest."""
    counts = {
        "ingest": run_ingest(config),
        "metrics": run_metrics(config),
        "estimate": run_estimate(config),
        "refute": run_refute(config),
        "explain": run_explain(config),
        "report": run_report(config),
    }
    manifest = {
        "config_sha256": (
            hashlib.sha256(config_path.read_bytes()).hexdigest()
            if config_path is not None
            else None
        ),
        "seed": config.seed,
        "sessions": counts["ingest"]["sessions"],
        "pairs": counts["estimate"]["pairs"],
        "refutation": counts["refute"],
        "trend_rows": counts["report"]["rows"],
        "outputs": sorted(
            p.name
            for p in config.output_dir.iterdir()
            if p.is_file() and p.name != MANIFEST_JSON
        ),
    }
    write_text_atomic(
        config.output_dir / MANIFEST_JSON,
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
    )
    return manifest
