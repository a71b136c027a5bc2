"""
Invariant suite behind ``ratsteer selfcheck``.

Each check returns a CheckResult instead of raising so the CLI can report
every failure in one pass.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from ratsteer.models.radio import BaseStation, Rat
from ratsteer.models.steering import RewardWeights
from ratsteer.models.traffic import QOS_PROFILES, TrafficFlow, TrafficType
from ratsteer.schemas.scenario import (
    ExperimentConfig,
    QueueConfig,
    Scenario,
    SteeringConfig,
    TopologyConfig,
    TrafficConfig,
)
from ratsteer.core.approximator import TransitionBatch, ValueNet, max_relative_error, numerical_gradients
from ratsteer.core.agents import epsilon_greedy
from ratsteer.core.env import (
    SteeringEnv,
    delay_param,
    extrinsic_reward,
    intrinsic_reward,
    throughput_param,
)
from ratsteer.core.netsim import NetworkWorld
from ratsteer.core.radio import RadioMap, check_link_constraint

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _close(a: float, b: float, tol: float = 1e-12) -> bool:
    return abs(a - b) <= tol


def check_reward_identities() -> CheckResult:
    voice, video, gaming = (QOS_PROFILES[t] for t in (TrafficType.VOICE, TrafficType.VIDEO, TrafficType.GAMING))
    w = RewardWeights(c1=0.5, c2=0.5, handover_penalty=0.25)
    cases = [
        ("delay ratio at budget", delay_param(voice.d_qos_ms, voice), 1.0),
        ("voice delay 200 ms", delay_param(200.0, voice), 0.5),
        ("gaming delay 1 ms clipped", delay_param(1.0, gaming), 10.0),
        ("video throughput 5 Mbps", throughput_param(5.0, video), 0.5),
        ("voice throughput 0.2 Mbps", throughput_param(0.2, voice), 2.0),
        ("reward identity", intrinsic_reward(1.0, 1.0, False, w), 1.0),
        ("reward with handover", intrinsic_reward(0.5, 2.0, True, w), 1.0),
        ("zero reward", intrinsic_reward(0.0, 0.0, False, w), 0.0),
        ("extrinsic mean", extrinsic_reward([0.0, 1.0, 2.0, 3.0]), 1.5),
        ("extrinsic constant", extrinsic_reward([0.7] * 5), 0.7),
    ]
    failed = [f"{name}: {got} != {want}" for name, got, want in cases if not _close(got, want)]
    return CheckResult("reward identities", not failed, "; ".join(failed) or f"{len(cases)} cases")


def _brute_force_rate(radio_map: RadioMap, bs: BaseStation, ue_id: int, active: dict) -> float:
    """Σ_ψ ω·log2(1 + ρg / (ωX0 + Σ_μ ρ_μ ζ_μ g_μ)) written out element by element"""
    total = 0.0
    for rbg in range(bs.num_rbgs):
        interference = 0.0
        for other in radio_map.base_stations:
            if other.id == bs.id or other.carrier_freq != bs.carrier_freq or rbg >= other.num_rbgs:
                continue
            if active.get(other.id, False):
                interference += other.per_rbg_power * radio_map.gain_between(ue_id, other.id)
        signal = bs.per_rbg_power * radio_map.gain_between(ue_id, bs.id)
        sinr = signal / (bs.per_rbg_bandwidth * radio_map.noise_psd + interference)
        total += bs.per_rbg_bandwidth * math.log2(1.0 + sinr)
    return total


def check_capacity_oracle(instances: int = 100, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(instances):
        scenario = Scenario(topology=TopologyConfig(small_cell_count=int(rng.integers(1, 4)), ue_count=int(rng.integers(1, 6))))
        world = NetworkWorld(scenario, seed=int(rng.integers(1 << 30)))
        radio_map = world.radio_map
        ue = world.ues[int(rng.integers(len(world.ues)))]
        bs = radio_map.bs(ue.serving_nr)
        active = {other.id: bool(rng.integers(2)) for other in radio_map.base_stations}
        owners = {
            b.id: np.full(b.num_rbgs, ue.id if b.id == bs.id else (0 if active[b.id] else -1), dtype=int)
            for b in radio_map.base_stations
        }
        vectorised = radio_map.cell_rates(owners)[bs.id]
        oracle = _brute_force_rate(radio_map, bs, ue.id, active)
        worst = max(worst, abs(vectorised - oracle) / max(oracle, 1e-300))
    return CheckResult("capacity oracle", worst <= 1e-9, f"worst relative error {worst:.3e} over {instances} instances")


def check_link_boundary() -> CheckResult:
    flow = TrafficFlow(
        flow_id=0,
        ue_id=0,
        profile=QOS_PROFILES[TrafficType.VIDEO],
        offered_load_mbps=10.0,
        current_rat=Rat.NR,
        bound_bs_id=1,
    )
    at = check_link_constraint([flow], 10e6, 0, 1)
    below = check_link_constraint([flow], 10e6 - 1.0, 0, 1)
    return CheckResult("link constraint boundary", at and not below, f"at capacity={at}, below={below}")


def check_gradients(nets: int = 20, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(nets):
        sizes = [int(rng.integers(1, 5)) for _ in range(int(rng.integers(0, 3)))]
        net = ValueNet(int(rng.integers(2, 6)), int(rng.integers(2, 4)), hidden_layers=sizes, rng=rng)
        batch = int(rng.integers(1, 6))
        states = rng.normal(size=(batch, net.input_size))
        actions = rng.integers(net.output_size, size=batch)
        targets = rng.normal(size=batch)
        _, grad_w, grad_b = net.loss_and_gradients(states, actions, targets)
        num_w, num_b = numerical_gradients(net, states, actions, targets)
        worst = max(worst, max_relative_error(grad_w + grad_b, num_w + num_b))
    return CheckResult("TD gradient check", worst <= 1e-4, f"worst relative error {worst:.3e} over {nets} nets")


def _tabular_net(n_states: int, n_actions: int, learning_rate: float, discount: float) -> ValueNet:
    net = ValueNet(n_states, n_actions, hidden_layers=[], learning_rate=learning_rate, discount=discount, use_bias=False)
    net.set_weights({"weights": [np.zeros((n_states, n_actions))], "target_weights": [np.zeros((n_states, n_actions))]})
    return net


def check_tabular_convergence() -> CheckResult:
    net = _tabular_net(2, 2, learning_rate=0.5, discount=0.9)
    net.target_weights[0][1, :] = [2.0, 1.0]
    batch = TransitionBatch.single(np.eye(2)[0], 0, 1.0, np.eye(2)[1])
    net.td_update(batch)
    first = float(net.forward(np.eye(2)[0])[0])
    for _ in range(100):
        net.td_update(batch)
    final = float(net.forward(np.eye(2)[0])[0])
    fixed_point = 1.0 + 0.9 * 2.0
    ok = _close(first, 1.4, 1e-12) and abs(final - fixed_point) <= 1e-6
    return CheckResult("tabular convergence", ok, f"first step {first:.12g}, final {final:.9g}, target {fixed_point:g}")


def check_target_staleness(seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    net = ValueNet(4, 2, hidden_layers=[8], learning_rate=0.05, rng=rng)
    sample = rng.normal(size=(5, 4))
    before = net.forward(sample, use_target=True)
    batch = TransitionBatch(rng.normal(size=(6, 4)), rng.integers(2, size=6), rng.normal(size=6), rng.normal(size=(6, 4)), np.zeros(6, dtype=bool))
    for _ in range(20):
        net.td_update(batch)
    stale = np.array_equal(before, net.forward(sample, use_target=True))
    net.sync_target()
    synced = np.array_equal(net.forward(sample), net.forward(sample, use_target=True))
    return CheckResult("target staleness", stale and synced, f"unchanged between syncs={stale}, equal after sync={synced}")


def check_epsilon_statistics(draws: int = 10_000, seed: int = 5) -> CheckResult:
    rng = np.random.default_rng(seed)
    values = np.array([0.0, 1.0])
    details, ok = [], True
    for eps in (0.1, 0.5, 1.0):
        explored = sum(epsilon_greedy(values, rng, eps)[1] for _ in range(draws))
        sigma = math.sqrt(draws * eps * (1 - eps))
        within = abs(explored - draws * eps) <= 3 * sigma
        ok &= within
        details.append(f"ε={eps}: {explored}/{draws}")
    greedy = all(epsilon_greedy(np.array([1.0, 1.0, 0.5]), rng, 0.0) == (0, False) for _ in range(100))
    ok &= greedy
    details.append(f"ε=0 greedy with low-index ties={greedy}")
    return CheckResult("ε-greedy statistics", ok, ", ".join(details))


def check_strict_simulation(periods: int = 200, seed: int = 1) -> CheckResult:
    scenario = Scenario(
        topology=TopologyConfig(small_cell_count=2, ue_count=8),
        traffic=TrafficConfig(per_ue_load_mbps=20.0),
        queue=QueueConfig(capacity_pkts=40),
        steering=SteeringConfig(decision_ticks=5),
        experiment=ExperimentConfig(episodes=0),
    )
    env = SteeringEnv(NetworkWorld(scenario, seed=seed, strict=True))
    rng = np.random.default_rng(seed)
    try:
        for _ in range(periods):
            threshold = float(rng.choice(scenario.steering.goals))
            env.step_period(rng.integers(2, size=env.n_flows), threshold)
    except Exception as e:
        return CheckResult("strict simulation", False, f"{type(e).__name__}: {e}")
    counters = env.world.counters
    return CheckResult(
        "strict simulation",
        True,
        f"{env.world.now} ticks, generated={counters.generated_pkts}, dropped={counters.dropped_pkts}",
    )


CHECKS: List[Callable[[], CheckResult]] = [
    check_reward_identities,
    check_capacity_oracle,
    check_link_boundary,
    check_gradients,
    check_tabular_convergence,
    check_target_staleness,
    check_epsilon_statistics,
    check_strict_simulation,
]


def run_selfcheck() -> List[CheckResult]:
    results = []
    for check in CHECKS:
        result = check()
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"{result.name}: {'ok' if result.passed else 'FAILED'} ({result.detail})")
        results.append(result)
    return results
