"""Options and setup shared by the experiment commands"""

import logging
from pathlib import Path
from typing import Optional

import click
from rich.console import Console

from ratsteer.config import get_settings
from ratsteer.schemas.scenario import Scenario
from ratsteer.core.harness import ExperimentRunner
from .config import parse_config, resolve_out_dir

console = Console()

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def setup_logging(level: Optional[str]) -> None:
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        force=True,
    )


def common_options(f):
    """--config, --seed, --out-dir, --episodes, --jobs, --log-level"""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Scenario JSON file (defaults reproduce the reference deployment)",
        ),
        click.option("--seed", type=click.IntRange(min=0), default=None, help="Run one seed instead of the configured list"),
        click.option(
            "--out-dir",
            type=click.Path(file_okay=False, path_type=Path),
            default=None,
            help="Output directory (RAT_STEER_OUT overrides; default ./results)",
        ),
        click.option("--episodes", type=click.IntRange(min=0), default=None, help="Training episodes per run"),
        click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes (default: one per core)"),
        click.option(
            "--log-level",
            type=click.Choice(LOG_LEVELS, case_sensitive=False),
            default=None,
            help="Logging level",
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def load_scenario(config_path: Optional[Path], episodes: Optional[int]) -> Scenario:
    scenario = parse_config(config_path)
    if episodes is not None:
        experiment = scenario.experiment.model_copy(update={"episodes": episodes})
        scenario = scenario.model_copy(update={"experiment": experiment})
    return scenario


def prepare_runner(
    config_path: Optional[Path],
    seed: Optional[int],
    out_dir: Optional[Path],
    episodes: Optional[int],
    jobs: Optional[int],
    log_level: Optional[str],
) -> ExperimentRunner:
    setup_logging(log_level)
    scenario = load_scenario(config_path, episodes)
    return ExperimentRunner(
        scenario,
        out_dir=resolve_out_dir(out_dir),
        jobs=jobs or get_settings().effective_jobs,
        seeds=[seed] if seed is not None else None,
    )


def fail(error: Exception) -> None:
    """Print an error and abort with a nonzero exit code"""
    console.print(f"\n❌ [red]Error: {error}[/red]")
    raise click.Abort()
