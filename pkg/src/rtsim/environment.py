"""Device database loading and experiment execution.

An experiment body is an ordinary closure taking the simulation handle.
Kernels run in-process, so host and kernel state are shared naturally;
``SimulationRun.kernel`` records entry markers so traces can show kernel
boundaries.
"""

from __future__ import annotations

import contextlib
import json
import os
import time as _time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .devices import DeviceDescriptor, DeviceError, SimDevice, make_driver
from .rng import RngPool
from .signals import SignalManager
from .timeline import ContextKind, SimConfig, TimeManager

SEED_ENV_VAR = "RTSIM_SEED"


class DeviceDbError(Exception):
    """Device database file is missing, malformed, or inconsistent."""


class UnknownDeviceError(KeyError):
    pass


class ExperimentRunError(RuntimeError):
    """Experiment body raised; the partial run is kept for post-mortem."""

    def __init__(self, message: str, run: "SimulationRun"):
        super().__init__(message)
        self.run = run


@dataclass(frozen=True)
class DeviceDb:
    """Validated list of simulated devices; exactly one core device."""

    devices: tuple[DeviceDescriptor, ...]

    def __post_init__(self):
        seen = set()
        cores = 0
        for desc in self.devices:
            if desc.name in seen:
                raise DeviceDbError(f"duplicate device name: {desc.name!r}")
            seen.add(desc.name)
            if desc.kind == "core":
                cores += 1
        if cores != 1:
            raise DeviceDbError(f"device database must contain exactly one core device, found {cores}")

    @classmethod
    def from_dict(cls, data: dict) -> "DeviceDb":
        if not isinstance(data, dict) or "devices" not in data:
            raise DeviceDbError("device database must be an object with a 'devices' list")
        raw = data["devices"]
        if not isinstance(raw, list):
            raise DeviceDbError("'devices' must be a list")
        descs = []
        for i, entry in enumerate(raw):
            if not isinstance(entry, dict):
                raise DeviceDbError(f"devices[{i}]: entry must be an object")
            try:
                name = entry["name"]
                kind = entry["kind"]
            except KeyError as exc:
                raise DeviceDbError(f"devices[{i}]: missing required field {exc.args[0]!r}") from None
            params = entry.get("params", {})
            if not isinstance(params, dict):
                raise DeviceDbError(f"devices[{i}] ({name!r}): params must be an object")
            try:
                descs.append(DeviceDescriptor(name, kind, params))
            except DeviceError as exc:
                raise DeviceDbError(f"devices[{i}]: {exc}") from None
        return cls(tuple(descs))

    def descriptor(self, name: str) -> DeviceDescriptor:
        for desc in self.devices:
            if desc.name == name:
                return desc
        raise UnknownDeviceError(name)

    @property
    def core_name(self) -> str:
        return next(d.name for d in self.devices if d.kind == "core")

    def __len__(self) -> int:
        return len(self.devices)


def load_ddb(path) -> DeviceDb:
    """Load and validate a device database JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DeviceDbError(f"cannot read device database {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DeviceDbError(f"device database {path} is not valid JSON: {exc}") from exc
    return DeviceDb.from_dict(data)


@dataclass
class Experiment:
    """A named, deterministic program run against a fresh simulation."""

    name: str
    body: Callable[["SimulationRun"], None]
    metadata: dict = field(default_factory=dict)


@dataclass
class RunStats:
    event_count: int
    sync_count: int
    start_cursor_after_first_sync: Optional[int]
    final_cursor: int
    wall_clock_ns: int

    @property
    def timeline_length_mu(self) -> int:
        """Final cursor minus the cursor right after the first sync (0 if none)."""
        start = self.start_cursor_after_first_sync
        return self.final_cursor - (start if start is not None else 0)


class SimulationRun:
    """One simulation instance: timeline, signals, drivers, and run stats."""

    def __init__(self, ddb: DeviceDb, config: SimConfig):
        self.ddb = ddb
        self.config = config
        self.signals = SignalManager()
        self.time = TimeManager(config, event_max=lambda: self.signals.max_event_time)
        self.rng = RngPool(config.seed)
        self._drivers: dict[str, SimDevice] = {}
        self.stats: Optional[RunStats] = None
        self.error: Optional[BaseException] = None

    def get_device(self, name: str) -> SimDevice:
        """Memoized driver lookup; instantiation registers the device's signals."""
        if name not in self._drivers:
            desc = self.ddb.descriptor(name)
            self._drivers[name] = make_driver(desc, self.time, self.signals, self.rng)
        return self._drivers[name]

    # Cursor API pass-throughs, so experiment bodies read naturally.
    def now_mu(self) -> int:
        return self.time.now_mu()

    def delay_mu(self, d: int) -> None:
        self.time.delay_mu(d)

    def delay(self, d_seconds: float) -> None:
        self.time.delay(d_seconds)

    def at_mu(self, t: int) -> None:
        self.time.at_mu(t)

    @contextlib.contextmanager
    def sequential(self):
        self.time.push_context(ContextKind.SEQUENTIAL)
        try:
            yield
        finally:
            self.time.pop_context()

    @contextlib.contextmanager
    def parallel(self):
        self.time.push_context(ContextKind.PARALLEL)
        try:
            yield
        finally:
            self.time.pop_context()

    @contextlib.contextmanager
    def kernel(self, name: str):
        """Mark a kernel entry on the core device's kernel signal."""
        core = self.get_device(self.ddb.core_name)
        core.kernel_marker.push(name, self.time.now_mu())
        yield

    def _finalize(self, wall_clock_ns: int) -> None:
        self.stats = RunStats(
            event_count=self.signals.event_count(),
            sync_count=self.time.sync_count,
            start_cursor_after_first_sync=self.time.first_sync_cursor,
            final_cursor=self.time.now_mu(),
            wall_clock_ns=wall_clock_ns,
        )


def _apply_seed_override(config: SimConfig) -> SimConfig:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return config
    try:
        seed = int(raw, 10)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be a decimal integer, got {raw!r}") from None
    if not 0 <= seed < 2**64:
        raise ValueError(f"{SEED_ENV_VAR} must be an unsigned 64-bit integer, got {raw!r}")
    return SimConfig(
        mode=config.mode,
        sync_slack_mu=config.sync_slack_mu,
        ref_period_s=config.ref_period_s,
        seed=seed,
    )


def run_experiment(exp: Experiment, ddb: DeviceDb, config: Optional[SimConfig] = None) -> SimulationRun:
    """Execute an experiment body inside a fresh simulation instance.

    A failing body raises ExperimentRunError carrying the partial run, whose
    timeline remains readable for post-mortem assertions.
    """
    config = _apply_seed_override(config if config is not None else SimConfig())
    run = SimulationRun(ddb, config)
    t0 = _time.perf_counter_ns()
    try:
        exp.body(run)
    except Exception as exc:
        run.error = exc
        run._finalize(_time.perf_counter_ns() - t0)
        raise ExperimentRunError(f"experiment {exp.name!r} failed: {exc}", run) from exc
    run._finalize(_time.perf_counter_ns() - t0)
    return run
