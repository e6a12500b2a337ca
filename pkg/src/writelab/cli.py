"""Command-line interface: full pipeline runs and single-stage reruns."""

from __future__ import annotations

import sys
import time
from pathlib import Path
from typing import Callable, Optional

import click

from .errors import WritelabError
from .pipeline import (
    PipelineConfig,
    load_config,
    run_estimate,
    run_explain,
    run_ingest,
    run_metrics,
    run_pipeline,
    run_refute,
    run_report,
)


def _common_options(fn: Callable) -> Callable:
    fn = click.option(
        "--jobs",
        type=int,
        default=None,
        help="Max worker processes for per-session work (overrides config).",
    )(fn)
    fn = click.option(
        "--seed", type=int, default=None, help="Random seed (overrides config)."
    )(fn)
    fn = click.option(
        "--out",
        type=click.Path(path_type=Path),
        default=None,
        help="Output directory (overrides config).",
    )(fn)
    fn = click.option(
        "--config",
        "config_path",
        required=True,
        type=click.Path(path_type=Path),
        help="Path to the JSON run configuration.",
    )(fn)
    return fn


@click.group(name="writelab")
def cli() -> None:
    """Batch analytics for GAI-assisted writing session logs.

    `run` executes the full pipeline; the stage subcommands rerun a single
    stage from the cached intermediates in the output directory.
    """


def _execute(
    label: str,
    stage: Callable[[PipelineConfig], dict],
    config_path: Path,
    out: Optional[Path],
    seed: Optional[int],
    jobs: Optional[int],
) -> None:
    config = load_config(config_path, seed=seed, out=out, jobs=jobs)
    started = time.monotonic()
    summary = stage(config)
    elapsed = time.monotonic() - started
    click.echo(f"{label}: {summary} ({elapsed:.1f}s)", err=True)


@cli.command(name="run")
@_common_options
def run_command(config_path: Path, out: Optional[Path], seed: Optional[int], jobs: Optional[int]) -> None:
    """Run every stage: ingest, metrics, estimate, refute, explain, report."""
    config = load_config(config_path, seed=seed, out=out, jobs=jobs)
    started = time.monotonic()
    manifest = run_pipeline(config, config_path=config_path)
    elapsed = time.monotonic() - started
    click.echo(
        f"run: {manifest['sessions']} sessions, {len(manifest['pairs'])} pairs, "
        f"outputs in {config.output_dir} ({elapsed:.1f}s)",
        err=True,
    )


def _stage_command(name: str, stage: Callable[[PipelineConfig], dict], doc: str) -> None:
    @cli.command(name=name, help=doc)
    @_common_options
    def command(config_path: Path, out: Optional[Path], seed: Optional[int], jobs: Optional[int]) -> None:
        _execute(name, stage, config_path, out, seed, jobs)

    command.__name__ = f"{name}_command"


_stage_command(
    "ingest",
    run_ingest,
    "Parse session logs, replay documents, and derive behavioral treatments.",
)
_stage_command(
    "metrics",
    run_metrics,
    "Compute essay-quality outcomes from the reconstructed documents.",
)
_stage_command(
    "estimate",
    run_estimate,
    "Identify adjustment sets and estimate ATE/ITE for every pair.",
)
_stage_command(
    "refute",
    run_refute,
    "Run the three robustness checks and complete the ATE table.",
)
_stage_command(
    "explain",
    run_explain,
    "Compute Shapley attributions and emit beeswarm data.",
)
_stage_command(
    "report",
    run_report,
    "Classify subgroup trends from the cached per-session effects.",
)


def main() -> None:
    """Entry point mapping toolkit errors onto documented exit codes."""
    try:
        cli.main(standalone_mode=False)
    except WritelabError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)


if __name__ == "__main__":
    main()
