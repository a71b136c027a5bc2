"""
Experiment runner.

A run trains the chosen agent (learning agents only) on a world seeded with
the run seed, then evaluates it greedily on a world with the same topology
and arrivals drawn from ``seed + eval_seed_offset``. Independent runs fan out
over a process pool; results are sorted in the parent so output files do not
depend on completion order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd

from ratsteer.schemas.report import KpiReport
from ratsteer.schemas.scenario import AgentKind, Scenario
from ratsteer.utils.tables import write_csv, write_summary
from ratsteer.core.agents import SteeringAgent, build_hrl_agent
from ratsteer.core.agents.hrl import LOG_COLUMNS
from ratsteer.core.baselines import HeuristicAgent, HeuristicWeights, build_dqn_agent
from ratsteer.core.env import SteeringEnv
from ratsteer.core.netsim import NetworkWorld
from .report import build_report

logger = logging.getLogger(__name__)

KPI_COLUMNS = ["agent", "load", "seed", "throughput_mbps", "delay_ms", "drop_rate", "objective"]
SWEEP_COLUMNS = ["threshold", "load", "runs", "throughput_mbps", "delay_ms", "drop_rate", "objective"]
SWEEP_RUN_COLUMNS = ["threshold", "load", "seed", "throughput_mbps", "delay_ms", "drop_rate", "objective"]
TRACE_COLUMNS = ["step", "ue", "rat", "q_lte", "q_nr", "threshold", "switched", "overridden", "handover"]
TRAINING_LOG_COLUMNS = ["agent", "load", "seed", *LOG_COLUMNS]
METRIC_COLUMNS = ["throughput_mbps", "delay_ms", "drop_rate", "objective"]


def build_agent(scenario: Scenario, seed: Optional[int] = None) -> SteeringAgent:
    seed = scenario.seed if seed is None else seed
    if scenario.agent is AgentKind.HRL:
        return build_hrl_agent(scenario, seed)
    if scenario.agent is AgentKind.DQN:
        return build_dqn_agent(scenario, seed)
    return HeuristicAgent(HeuristicWeights.from_config(scenario.baselines))


def _learns(scenario: Scenario) -> bool:
    return scenario.agent is not AgentKind.HEURISTIC


def train_agent(agent: SteeringAgent, scenario: Scenario, seed: int, strict: bool = False) -> List[Dict]:
    """Run the configured training episodes; returns training log rows"""
    experiment = scenario.experiment
    rows: List[Dict] = []
    if not _learns(scenario) or experiment.episodes == 0:
        return rows

    env = SteeringEnv(NetworkWorld(scenario, seed=seed, arrival_seed=seed, strict=strict))
    logger.info(
        f"Training {agent.name} (seed={seed}, load={scenario.traffic.per_ue_load_mbps}): "
        f"{experiment.episodes} x {experiment.episode_periods} periods"
    )
    for episode in range(experiment.episodes):
        env.reset()
        agent.begin_episode(env)
        for _ in range(experiment.episode_periods):
            rows.append(agent.decide_period(env, learn=True).row())
        logger.info(f"{agent.name} episode {episode + 1}/{experiment.episodes}: objective={env.objective_value():.4f}")
    return rows


def evaluation_env(scenario: Scenario, seed: int, strict: bool = False) -> SteeringEnv:
    arrival_seed = seed + scenario.experiment.eval_seed_offset
    return SteeringEnv(NetworkWorld(scenario, seed=seed, arrival_seed=arrival_seed, strict=strict))


def evaluate_agent(agent: SteeringAgent, scenario: Scenario, seed: int, strict: bool = False) -> KpiReport:
    env = evaluation_env(scenario, seed, strict)
    agent.begin_episode(env)
    for _ in range(scenario.experiment.eval_periods):
        agent.decide_period(env, learn=False)
    return build_report(env, agent.name, scenario.traffic.per_ue_load_mbps, seed)


@dataclass(frozen=True)
class RunTask:
    """One independent (scenario, seed) job; the scenario already carries agent and load"""

    scenario: Scenario
    seed: int
    strict: bool = False
    threshold: Optional[float] = None

    @property
    def sort_key(self):
        return (
            self.scenario.agent.value,
            self.threshold if self.threshold is not None else -1.0,
            self.scenario.traffic.per_ue_load_mbps,
            self.seed,
        )


@dataclass
class RunResult:
    task: RunTask
    report: KpiReport
    training_log: List[Dict] = field(default_factory=list)


def execute_run(task: RunTask) -> RunResult:
    """Train then evaluate; module level so worker processes can pickle it"""
    scenario = task.scenario.with_agent(task.scenario.agent, task.seed)
    agent = build_agent(scenario, task.seed)
    log = train_agent(agent, scenario, task.seed, task.strict)
    report = evaluate_agent(agent, scenario, task.seed, task.strict)
    logger.info(
        f"{report.agent} load={report.load_mbps} seed={report.seed}: "
        f"throughput={report.avg_system_throughput:.3f} Mbps, delay={report.network_delay:.3f} ms, "
        f"drop={report.packet_drop_rate:.4f}"
    )
    return RunResult(task=task, report=report, training_log=log)


def summarize(df: pd.DataFrame, group_by: Sequence[str], values: Sequence[str] = METRIC_COLUMNS) -> pd.DataFrame:
    """Mean and sample standard deviation per group (std is NaN for a single run)"""
    grouped = df.groupby(list(group_by), sort=True)[list(values)]
    stats = grouped.agg(["mean", "std"])
    stats.columns = [f"{col}_{stat}" for col, stat in stats.columns]
    stats.insert(0, "runs", grouped.size())
    return stats.reset_index()


class ExperimentRunner:
    """Runs, sweeps and traces for one base scenario"""

    def __init__(
        self,
        scenario: Scenario,
        out_dir: Optional[Path] = None,
        jobs: int = 1,
        seeds: Optional[Sequence[int]] = None,
        strict: bool = False,
    ):
        self.scenario = scenario
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.jobs = max(1, jobs)
        self.seeds = list(seeds) if seeds is not None else list(scenario.experiment.seeds)
        self.strict = strict

    def _execute(self, tasks: Iterable[RunTask]) -> List[RunResult]:
        tasks = list(tasks)
        if self.jobs == 1 or len(tasks) <= 1:
            results = [execute_run(task) for task in tasks]
        else:
            with ProcessPoolExecutor(max_workers=min(self.jobs, len(tasks))) as pool:
                results = list(pool.map(execute_run, tasks))
        return sorted(results, key=lambda r: r.task.sort_key)

    def _path(self, name: str) -> Optional[Path]:
        return self.out_dir / name if self.out_dir is not None else None

    def _kpi_frame(self, results: Sequence[RunResult]) -> pd.DataFrame:
        return pd.DataFrame([r.report.kpi_row() for r in results], columns=KPI_COLUMNS)

    def _write_training_log(self, results: Sequence[RunResult]) -> None:
        rows = [
            {"agent": r.report.agent, "load": r.report.load_mbps, "seed": r.report.seed, **row}
            for r in results
            for row in r.training_log
        ]
        if rows and self.out_dir is not None:
            write_csv(pd.DataFrame(rows), self._path("training_log.csv"), TRAINING_LOG_COLUMNS)

    def run(self, agent: Optional[AgentKind] = None, loads: Optional[Sequence[float]] = None) -> List[KpiReport]:
        """
        Train and evaluate one agent over every seed (and load).

        Writes kpi.csv, kpi_summary.txt and training_log.csv.
        """
        agent = agent or self.scenario.agent
        loads = list(loads) if loads is not None else [self.scenario.traffic.per_ue_load_mbps]
        tasks = [
            RunTask(self.scenario.with_load(load).with_agent(agent), seed, self.strict)
            for load in loads
            for seed in self.seeds
        ]
        results = self._execute(tasks)
        if self.out_dir is not None:
            df = self._kpi_frame(results)
            write_csv(df, self._path("kpi.csv"), KPI_COLUMNS)
            write_summary(summarize(df, ["agent", "load"]), self._path("kpi_summary.txt"), "KPIs (mean / std over seeds)")
            self._write_training_log(results)
        return [r.report for r in results]

    def threshold_sweep(
        self,
        thresholds: Optional[Sequence[float]] = None,
        loads: Optional[Sequence[float]] = None,
    ) -> pd.DataFrame:
        """
        DQN baseline at every (threshold, load) pair.

        Returns one row per pair (means over seeds); per-seed rows go to sweep_runs.csv.
        """
        thresholds = list(thresholds) if thresholds is not None else list(self.scenario.experiment.thresholds)
        loads = list(loads) if loads is not None else list(self.scenario.experiment.loads_mbps)
        tasks = [
            RunTask(self.scenario.with_load(load).with_dqn_threshold(th), seed, self.strict, threshold=th)
            for th in thresholds
            for load in loads
            for seed in self.seeds
        ]
        logger.info(f"Threshold sweep: {len(thresholds)} thresholds x {len(loads)} loads x {len(self.seeds)} seeds")
        results = self._execute(tasks)

        runs = pd.DataFrame(
            [{"threshold": r.task.threshold, **r.report.kpi_row()} for r in results],
        )[SWEEP_RUN_COLUMNS]
        runs = runs.sort_values(["threshold", "load", "seed"], kind="mergesort").reset_index(drop=True)
        grouped = runs.groupby(["threshold", "load"], sort=True)
        table = grouped[METRIC_COLUMNS].mean()
        table.insert(0, "runs", grouped.size())
        table = table.reset_index()[SWEEP_COLUMNS]

        if self.out_dir is not None:
            write_csv(table, self._path("sweep.csv"), SWEEP_COLUMNS)
            write_csv(runs, self._path("sweep_runs.csv"), SWEEP_RUN_COLUMNS)
            pivot = table.pivot(index="threshold", columns="load", values="throughput_mbps").reset_index()
            pivot.columns = ["threshold"] + [f"{c:g} Mbps" for c in pivot.columns[1:]]
            write_summary(pivot, self._path("sweep_summary.txt"), "DQN throughput (Mbps) by threshold and load")
        return table

    def load_sweep(
        self,
        loads: Optional[Sequence[float]] = None,
        agents: Optional[Sequence[AgentKind]] = None,
    ) -> pd.DataFrame:
        """Every agent at every load; one row per (agent, load, seed)"""
        loads = list(loads) if loads is not None else list(self.scenario.experiment.loads_mbps)
        agents = list(agents) if agents is not None else list(self.scenario.experiment.agents)
        tasks = [
            RunTask(self.scenario.with_load(load).with_agent(agent), seed, self.strict)
            for agent in agents
            for load in loads
            for seed in self.seeds
        ]
        logger.info(f"Load sweep: {len(agents)} agents x {len(loads)} loads x {len(self.seeds)} seeds")
        results = self._execute(tasks)
        df = self._kpi_frame(results)

        if self.out_dir is not None:
            write_csv(df, self._path("load_sweep.csv"), KPI_COLUMNS)
            write_summary(
                summarize(df, ["agent", "load"]),
                self._path("load_sweep_summary.txt"),
                "KPIs by agent and load (mean / std over seeds)",
            )
            self._write_training_log(results)
        return df

    def steering_trace(
        self,
        window: Optional[int] = None,
        agent: Optional[SteeringAgent] = None,
        seed: Optional[int] = None,
    ) -> pd.DataFrame:
        """
        Per-period, per-flow record of queue occupancies, the active threshold
        and RAT changes, with any configured load spike applied.

        ``switched`` marks a RAT change forced by the threshold, so the queue
        the flow left was at or above it at decision time. ``handover`` marks a
        RAT change the agent asked for. ``overridden`` marks every deferred
        request, including those where the flow was already on the other RAT.

        A learning agent is trained first unless one is passed in.
        """
        window = window if window is not None else self.scenario.experiment.trace_periods
        seed = self.seeds[0] if seed is None else seed
        scenario = self.scenario.with_agent(self.scenario.agent, seed)
        if agent is None:
            agent = build_agent(scenario, seed)
            train_agent(agent, scenario, seed, self.strict)

        env = evaluation_env(scenario, seed, self.strict)
        agent.begin_episode(env)
        rows = []
        for step in range(window):
            agent.decide_period(env, learn=False)
            outcome = env.last_outcome
            for i, flow in enumerate(env.flows):
                rows.append(
                    {
                        "step": step,
                        "ue": flow.ue_id,
                        "rat": flow.current_rat.value,
                        "q_lte": outcome.occupancy[i, 0],
                        "q_nr": outcome.occupancy[i, 1],
                        "threshold": outcome.threshold,
                        "switched": int(outcome.handovers[i] and outcome.overridden[i]),
                        "overridden": int(outcome.overridden[i]),
                        "handover": int(outcome.handovers[i] and not outcome.overridden[i]),
                    }
                )
        df = pd.DataFrame(rows, columns=TRACE_COLUMNS)
        logger.info(
            f"Trace of {agent.name}: {window} periods, {int(df['switched'].sum())} threshold switches, "
            f"{int(df['handover'].sum())} requested handovers, {int(df['overridden'].sum())} overrides"
        )
        if self.out_dir is not None:
            write_csv(df, self._path("trace.csv"), TRACE_COLUMNS)
        return df
