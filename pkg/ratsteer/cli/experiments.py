"""Experiment commands: run, sweeps and traces"""

from pathlib import Path
from typing import List, Optional

import click
from rich.console import Console
from rich.table import Table

from ratsteer.schemas.report import KpiReport
from ratsteer.schemas.scenario import AgentKind
from .common import common_options, fail, prepare_runner
from .config import ConfigError

console = Console()

AGENT_CHOICE = click.Choice([a.value for a in AgentKind], case_sensitive=False)


def _kpi_table(reports: List[KpiReport], title: str) -> Table:
    table = Table(title=title, show_lines=False)
    table.add_column("Agent", style="cyan")
    table.add_column("Load (Mbps)", justify="right")
    table.add_column("Seed", justify="right")
    table.add_column("Throughput (Mbps)", justify="right", style="green")
    table.add_column("Delay (ms)", justify="right", style="yellow")
    table.add_column("Drop rate", justify="right", style="red")
    table.add_column("Objective", justify="right")
    for r in reports:
        table.add_row(
            r.agent,
            f"{r.load_mbps:g}",
            str(r.seed),
            f"{r.avg_system_throughput:.3f}",
            f"{r.network_delay:.3f}",
            f"{r.packet_drop_rate:.4f}",
            f"{r.objective_value:.3f}",
        )
    return table


@click.command("run")
@click.option("--agent", type=AGENT_CHOICE, default=None, help="Steering scheme (default: from config)")
@common_options
def run(agent: Optional[str], config_path, seed, out_dir, episodes, jobs, log_level):
    """
    Train (if learning) and evaluate one agent; writes kpi.csv.

    Example:
        ratsteer run --agent heuristic --seed 7
    """
    try:
        runner = prepare_runner(config_path, seed, out_dir, episodes, jobs, log_level)
        kind = AgentKind(agent.lower()) if agent else runner.scenario.agent
        with console.status(f"Running {kind.value}..."):
            reports = runner.run(kind)
    except (ConfigError, ValueError) as e:
        fail(e)

    console.print(_kpi_table(reports, "Evaluation KPIs"))
    console.print(f"\n✅ [green]Results written to[/green] [cyan]{runner.out_dir}[/cyan]")


@click.command("sweep-threshold")
@common_options
def sweep_threshold(config_path, seed, out_dir, episodes, jobs, log_level):
    """DQN baseline over the threshold x load grid; writes sweep.csv"""
    try:
        runner = prepare_runner(config_path, seed, out_dir, episodes, jobs, log_level)
        with console.status("Sweeping thresholds..."):
            table = runner.threshold_sweep()
    except (ConfigError, ValueError) as e:
        fail(e)

    view = Table(title="DQN throughput by threshold")
    view.add_column("Threshold", justify="right", style="cyan")
    view.add_column("Load (Mbps)", justify="right")
    view.add_column("Throughput (Mbps)", justify="right", style="green")
    view.add_column("Delay (ms)", justify="right", style="yellow")
    view.add_column("Drop rate", justify="right", style="red")
    for row in table.itertuples(index=False):
        view.add_row(
            f"{row.threshold:g}",
            f"{row.load:g}",
            f"{row.throughput_mbps:.3f}",
            f"{row.delay_ms:.3f}",
            f"{row.drop_rate:.4f}",
        )
    console.print(view)
    console.print(f"\n✅ [green]Results written to[/green] [cyan]{runner.out_dir}[/cyan]")


@click.command("sweep-load")
@click.option("--agent", "agents", type=AGENT_CHOICE, multiple=True, help="Agent(s) to compare (default: from config)")
@common_options
def sweep_load(agents, config_path, seed, out_dir, episodes, jobs, log_level):
    """Every agent at every configured load; writes load_sweep.csv"""
    try:
        runner = prepare_runner(config_path, seed, out_dir, episodes, jobs, log_level)
        kinds = [AgentKind(a.lower()) for a in agents] or None
        with console.status("Sweeping loads..."):
            df = runner.load_sweep(agents=kinds)
    except (ConfigError, ValueError) as e:
        fail(e)

    console.print(f"{len(df)} runs")
    console.print(f"\n✅ [green]Results written to[/green] [cyan]{runner.out_dir}[/cyan]")


@click.command("trace")
@click.option("--agent", type=AGENT_CHOICE, default=None, help="Steering scheme (default: from config)")
@click.option("--window", type=click.IntRange(min=1), default=None, help="Controller periods to record")
@common_options
def trace(agent, window, config_path, seed, out_dir, episodes, jobs, log_level):
    """Per-UE queue occupancy, threshold and RAT switches; writes trace.csv"""
    try:
        runner = prepare_runner(config_path, seed, out_dir, episodes, jobs, log_level)
        if agent:
            runner.scenario = runner.scenario.with_agent(AgentKind(agent.lower()))
        with console.status("Tracing..."):
            df = runner.steering_trace(window=window)
    except (ConfigError, ValueError) as e:
        fail(e)

    console.print(
        f"{df['step'].nunique()} periods, {int(df['switched'].sum())} threshold-driven switches, "
        f"{int(df['handover'].sum())} requested handovers, {int(df['overridden'].sum())} threshold overrides"
    )
    console.print(f"\n✅ [green]Trace written to[/green] [cyan]{runner.out_dir}[/cyan]")
