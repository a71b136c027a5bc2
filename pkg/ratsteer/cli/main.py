"""
ratsteer CLI - Main entry point

Commands:
- ratsteer run
- ratsteer sweep-threshold
- ratsteer sweep-load
- ratsteer trace
- ratsteer selfcheck
"""

import click
from rich.console import Console

from ratsteer import __version__

console = Console()


@click.group()
@click.version_option(version=__version__)
def cli():
    """ratsteer - Hierarchical RL traffic steering over LTE and NR"""
    pass


# Import subcommands
from .experiments import run, sweep_threshold, sweep_load, trace
from .selfcheck import selfcheck

cli.add_command(run)
cli.add_command(sweep_threshold)
cli.add_command(sweep_load)
cli.add_command(trace)
cli.add_command(selfcheck)


if __name__ == "__main__":
    cli()
