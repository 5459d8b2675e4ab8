"""rtsim: functional, API-level simulator for real-time control software.

Programs written against the timeline-cursor and device-driver API execute
in-process, producing a signal-level event timeline that can be asserted in
unit tests, exported as waveforms, and benchmarked under the regular and
optimistic synchronization configurations.
"""

from .bench import BenchReport, BenchScenario, relative_error, run_scenario, run_scenario_both
from .devices import BufferEmpty, DeviceDescriptor, DeviceError, InputBuffer, InputUnset
from .environment import (
    DeviceDb,
    DeviceDbError,
    Experiment,
    ExperimentRunError,
    SimulationRun,
    UnknownDeviceError,
    load_ddb,
    run_experiment,
)
from .signals import (
    UNKNOWN,
    DuplicateSignalError,
    Signal,
    SignalError,
    SignalKind,
    SignalKindMismatch,
    SignalManager,
    UnknownSignalError,
)
from .store import available_backends, store_backend
from .testkit import CheckReport, Expectation, assert_events, expect, set_input
from .timeline import (
    ContextKind,
    ContextStackError,
    MachineUnitsOverflow,
    SimConfig,
    SimulationContext,
    SyncMode,
    TimeManager,
    mu_to_seconds,
    seconds_to_mu,
)
from .trace import export_jsonl, export_vcd, read_jsonl

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BenchScenario",
    "BufferEmpty",
    "CheckReport",
    "ContextKind",
    "ContextStackError",
    "DeviceDb",
    "DeviceDbError",
    "DeviceDescriptor",
    "DeviceError",
    "DuplicateSignalError",
    "Expectation",
    "Experiment",
    "ExperimentRunError",
    "InputBuffer",
    "InputUnset",
    "MachineUnitsOverflow",
    "Signal",
    "SignalError",
    "SignalKind",
    "SignalKindMismatch",
    "SignalManager",
    "SimConfig",
    "SimulationContext",
    "SimulationRun",
    "SyncMode",
    "TimeManager",
    "UNKNOWN",
    "UnknownDeviceError",
    "UnknownSignalError",
    "assert_events",
    "available_backends",
    "expect",
    "export_jsonl",
    "export_vcd",
    "load_ddb",
    "mu_to_seconds",
    "read_jsonl",
    "relative_error",
    "run_experiment",
    "run_scenario",
    "run_scenario_both",
    "seconds_to_mu",
    "set_input",
    "store_backend",
]
