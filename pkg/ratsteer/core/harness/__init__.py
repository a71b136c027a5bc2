"""Experiment orchestration: training, evaluation, sweeps, traces, self-checks"""

from .report import build_report
from .runner import (
    ExperimentRunner,
    RunTask,
    RunResult,
    build_agent,
    execute_run,
    summarize,
    KPI_COLUMNS,
    TRACE_COLUMNS,
)
from .selfcheck import CheckResult, run_selfcheck

__all__ = [
    "build_report",
    "ExperimentRunner",
    "RunTask",
    "RunResult",
    "build_agent",
    "execute_run",
    "summarize",
    "KPI_COLUMNS",
    "TRACE_COLUMNS",
    "CheckResult",
    "run_selfcheck",
]
