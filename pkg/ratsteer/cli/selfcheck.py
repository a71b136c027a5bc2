"""Invariant self-check command"""

import sys
from typing import Optional

import click
from rich.console import Console
from rich.table import Table

from ratsteer.core.harness import run_selfcheck
from .common import LOG_LEVELS, setup_logging

console = Console()


@click.command("selfcheck")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default="WARNING",
    help="Logging level",
)
def selfcheck(log_level: Optional[str]):
    """Run the invariant suite; exits 0 only when every check passes"""
    setup_logging(log_level)
    with console.status("Running self-checks..."):
        results = run_selfcheck()

    table = Table(title="Self-check")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_column("Detail")
    for r in results:
        table.add_row(r.name, "[green]ok[/green]" if r.passed else "[red]FAILED[/red]", r.detail)
    console.print(table)

    failed = [r for r in results if not r.passed]
    if failed:
        console.print(f"\n❌ [red]{len(failed)} check(s) failed[/red]")
        sys.exit(1)
    console.print("\n✅ [green]All checks passed[/green]")
