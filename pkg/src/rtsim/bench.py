"""Benchmark scenarios and reports.

Scenarios emulate scanning experiments: per sample a fixed burst of digital
pulses and synthesizer writes, a fixed per-sample delay, and a cursor sync
per sample (unbuffered) or per batch of 16 samples (buffered). Each scenario
runs under the regular and optimistic synchronization configurations; the
report carries the measured timeline lengths and a speedup proxy.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, field
from typing import Optional

from .environment import DeviceDb, Experiment, SimulationRun, run_experiment
from .store import available_backends
from .timeline import SimConfig, SyncMode

BUFFER_BATCH = 16


@dataclass(frozen=True)
class BenchScenario:
    name: str
    points: int
    samples_per_point: int
    delay_per_sample_mu: int = 0
    pulses_per_sample: int = 3
    dds_sets_per_sample: int = 1
    pulse_mu: int = 1000
    buffered: bool = False

    def __post_init__(self):
        if self.points < 1 or self.samples_per_point < 1:
            raise ValueError("points and samples_per_point must be >= 1")
        if self.pulse_mu <= 0:
            raise ValueError("pulse_mu must be positive")
        if self.delay_per_sample_mu < 0:
            raise ValueError("delay_per_sample_mu must be >= 0")

    @property
    def total_samples(self) -> int:
        return self.points * self.samples_per_point

    @property
    def expected_sync_count(self) -> int:
        """One initial sync plus one per sample, or per batch of 16 if buffered."""
        if self.buffered:
            return 1 + math.ceil(self.total_samples / BUFFER_BATCH)
        return 1 + self.total_samples


def scenario_ddb() -> DeviceDb:
    """Device set every scenario runs against: three TTL outputs and a DDS."""
    return DeviceDb.from_dict(
        {
            "devices": [
                {"name": "core", "kind": "core"},
                {"name": "ttl0", "kind": "ttl_out"},
                {"name": "ttl1", "kind": "ttl_out"},
                {"name": "ttl2", "kind": "ttl_out"},
                {"name": "dds0", "kind": "dds"},
            ]
        }
    )


def scenario_experiment(scenario: BenchScenario) -> Experiment:
    def body(run: SimulationRun) -> None:
        core = run.get_device("core")
        ttls = [run.get_device(f"ttl{i}") for i in range(3)]
        dds = run.get_device("dds0")
        core.reset()
        done = 0
        for _point in range(scenario.points):
            for _sample in range(scenario.samples_per_point):
                for i in range(scenario.pulses_per_sample):
                    ttls[i % 3].pulse(scenario.pulse_mu)
                for _ in range(scenario.dds_sets_per_sample):
                    dds.set(2.0e8, 0.0, 1.0)
                if scenario.delay_per_sample_mu:
                    run.delay_mu(scenario.delay_per_sample_mu)
                done += 1
                if not scenario.buffered:
                    core.reset()
                elif done % BUFFER_BATCH == 0:
                    core.reset()
        if scenario.buffered and done % BUFFER_BATCH:
            core.reset()

    return Experiment(scenario.name, body, metadata={"scenario": scenario})


PRESETS = {
    "scan_demo": BenchScenario(
        "scan_demo", points=20, samples_per_point=100, delay_per_sample_mu=10_000
    ),
    "scan_demo_buffered": BenchScenario(
        "scan_demo_buffered", points=20, samples_per_point=100,
        delay_per_sample_mu=10_000, buffered=True,
    ),
    "delay_dominated": BenchScenario(
        "delay_dominated", points=20, samples_per_point=100,
        delay_per_sample_mu=1_000_000,
    ),
    "event_dominated": BenchScenario(
        "event_dominated", points=25, samples_per_point=500,
        delay_per_sample_mu=0, pulse_mu=1, buffered=True,
    ),
}


def relative_error(t_sim: float, t_ref: float) -> float:
    """Relative simulation error against a reference time."""
    return (t_sim - t_ref) / t_ref


@dataclass(frozen=True)
class ConfigResult:
    """Measurement of one scenario under one synchronization configuration."""

    mode: SyncMode
    timeline_length_mu: int
    event_count: int
    sync_count: int
    wall_clock_ns: int

    @property
    def speedup_proxy(self) -> float:
        """Simulated timeline seconds per wall-clock second."""
        simulated_s = self.timeline_length_mu * 1e-9
        wall_s = max(self.wall_clock_ns, 1) * 1e-9
        return simulated_s / wall_s


@dataclass
class BenchReport:
    scenario: BenchScenario
    results: dict = field(default_factory=dict)  # SyncMode -> ConfigResult

    @property
    def timeline_length_regular_mu(self) -> int:
        return self.results[SyncMode.REGULAR].timeline_length_mu

    @property
    def timeline_length_optimistic_mu(self) -> int:
        return self.results[SyncMode.OPTIMISTIC].timeline_length_mu

    @property
    def sync_count(self) -> int:
        return self.results[SyncMode.REGULAR].sync_count

    @property
    def event_count(self) -> int:
        return self.results[SyncMode.REGULAR].event_count

    def sync_law_delta(self) -> int:
        return self.timeline_length_regular_mu - self.timeline_length_optimistic_mu

    def optimistic_vs_regular_error(self) -> float:
        """Relative error of the optimistic length with the regular one as reference."""
        return relative_error(self.timeline_length_optimistic_mu, self.timeline_length_regular_mu)


def run_scenario(scenario: BenchScenario, config: SimConfig) -> SimulationRun:
    return run_experiment(scenario_experiment(scenario), scenario_ddb(), config)


def run_scenario_both(scenario: BenchScenario, seed: int = 0) -> BenchReport:
    """Run a scenario under the regular and the optimistic configuration."""
    report = BenchReport(scenario)
    for mode in (SyncMode.REGULAR, SyncMode.OPTIMISTIC):
        run = run_scenario(scenario, SimConfig(mode=mode, seed=seed))
        stats = run.stats
        report.results[mode] = ConfigResult(
            mode=mode,
            timeline_length_mu=stats.timeline_length_mu,
            event_count=stats.event_count,
            sync_count=stats.sync_count,
            wall_clock_ns=stats.wall_clock_ns,
        )
    return report


CSV_HEADER = (
    "scenario", "config", "timeline_length_mu", "event_count",
    "sync_count", "wall_clock_ns", "speedup_proxy",
)


def report_rows(report: BenchReport, t_ref_mu: Optional[int] = None) -> list[dict]:
    """Flatten a report into CSV-ready row dicts, one per configuration."""
    rows = []
    for mode in (SyncMode.REGULAR, SyncMode.OPTIMISTIC):
        res = report.results[mode]
        row = {
            "scenario": report.scenario.name,
            "config": mode.value,
            "timeline_length_mu": res.timeline_length_mu,
            "event_count": res.event_count,
            "sync_count": res.sync_count,
            "wall_clock_ns": res.wall_clock_ns,
            "speedup_proxy": f"{res.speedup_proxy:.6g}",
        }
        if t_ref_mu is not None:
            row["relative_error"] = f"{relative_error(res.timeline_length_mu, t_ref_mu):.6g}"
        rows.append(row)
    return rows


def bench_event_store(n_events: int = 1_000_000, n_pulls: int = 100_000) -> list[dict]:
    """Time push/pull throughput of every available event-store backend.

    Pushes use ascending timestamps, the pattern a running simulation
    produces; pulls hit uniformly spread positions.
    """
    rows = []
    for backend, cls in available_backends().items():
        store = cls()
        t0 = _time.perf_counter_ns()
        for t in range(n_events):
            store.push(t * 8, t)
        push_ns = _time.perf_counter_ns() - t0
        step = max(1, (n_events * 8) // max(n_pulls, 1))
        t0 = _time.perf_counter_ns()
        for i in range(n_pulls):
            store.pull(i * step + 3)
        pull_ns = _time.perf_counter_ns() - t0
        rows.append(
            {
                "backend": backend,
                "events": n_events,
                "pulls": n_pulls,
                "push_ns": push_ns,
                "pull_ns": pull_ns,
                "pushes_per_s": f"{n_events / (push_ns * 1e-9):.6g}",
                "pulls_per_s": f"{n_pulls / (pull_ns * 1e-9):.6g}",
            }
        )
    return rows
