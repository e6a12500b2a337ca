"""Shared fixtures: the committed fixture corpus, expensive synthetic fits."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "deterministic",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deterministic")

TESTS_DIR = Path(__file__).resolve().parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

CORPUS_DIR = TESTS_DIR / "fixtures" / "corpus"
CORPUS_CONFIG = CORPUS_DIR / "config.json"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def corpus_config() -> Path:
    return CORPUS_CONFIG


@pytest.fixture(scope="session")
def lexicons():
    from writelab import load_lexicons

    return load_lexicons()


@pytest.fixture(scope="session")
def corpus_run(tmp_path_factory):
    """One full pipeline run over the fixture corpus, shared by many tests."""
    from writelab.pipeline import load_config, run_pipeline

    out = tmp_path_factory.mktemp("corpus-run")
    config = load_config(CORPUS_CONFIG, out=str(out))
    manifest = run_pipeline(config, config_path=CORPUS_CONFIG)
    return out, manifest


@pytest.fixture(scope="session")
def tau15_fit():
    """Constant-effect dataset (true effect 1.5) plus a fitted result."""
    import dgp
    from writelab import LearnerConfig, estimate_x_learner

    data, info = dgp.synthetic_dataset(n=2000, seed=102, tau=1.5)
    result = estimate_x_learner(data, LearnerConfig(kind="ridge", seed=7))
    return data, info, result


@pytest.fixture(scope="session")
def null_fit():
    """Zero-effect dataset plus a fitted result."""
    import dgp
    from writelab import LearnerConfig, estimate_x_learner

    data, info = dgp.synthetic_dataset(n=2000, seed=202, tau=0.0)
    result = estimate_x_learner(data, LearnerConfig(kind="ridge", seed=7))
    return data, info, result


@pytest.fixture(scope="session")
def hetero_fit():
    """Heterogeneous dataset: the effect equals the first confounder."""
    import dgp
    from writelab import LearnerConfig, estimate_x_learner

    data, info = dgp.synthetic_dataset(
        n=2000, seed=303, tau=lambda raw: raw["C1"].copy()
    )
    result = estimate_x_learner(data, LearnerConfig(kind="ridge", seed=7))
    return data, info, result
