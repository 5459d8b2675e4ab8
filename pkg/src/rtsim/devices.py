"""Simulation drivers.

Each driver exposes the functional API of one device class and translates
calls into signal events at the current cursor, cursor delays from its
timing model, and input-buffer traffic. Input devices sample test-configured
input signals (probability, frequency, voltage) with the simulation's
seeded random streams.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass, field

from .rng import RngPool
from .signals import UNKNOWN, SignalKind, SignalManager
from .timeline import TimeManager, round_half_away_from_zero

DEVICE_KINDS = ("core", "ttl_out", "ttl_in", "edge_counter", "dds", "adc")

# Allowed DDB params and their defaults, per device kind.
_PARAM_DEFAULTS = {
    "core": {},
    "ttl_out": {},
    "ttl_in": {"sample_delay_mu": 0},
    "edge_counter": {"counter_mode": "deterministic"},
    "dds": {"init_delay_mu": 125_000, "set_delay_mu": 0},
    "adc": {"channels": 1, "sample_delay_mu": 0},
}


class DeviceError(Exception):
    """Base class for device configuration and driver usage errors."""


class BufferEmpty(DeviceError):
    """Read from an input buffer that holds no values."""


class InputUnset(DeviceError):
    """An input signal was sampled before any value was configured for it."""


@dataclass(frozen=True)
class DeviceDescriptor:
    """Declarative entry for one simulated device."""

    name: str
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in DEVICE_KINDS:
            raise DeviceError(
                f"device {self.name!r}: unknown kind {self.kind!r}; "
                f"allowed kinds: {', '.join(DEVICE_KINDS)}"
            )
        allowed = _PARAM_DEFAULTS[self.kind]
        for key in self.params:
            if key not in allowed:
                raise DeviceError(
                    f"device {self.name!r}: unknown param {key!r} for kind {self.kind!r}; "
                    f"allowed: {sorted(allowed) or 'none'}"
                )

    def param(self, key: str):
        return self.params.get(key, _PARAM_DEFAULTS[self.kind][key])


def _delay_param(desc: DeviceDescriptor, key: str) -> int:
    value = desc.param(key)
    if type(value) is bool or not isinstance(value, int) or value < 0:
        raise DeviceError(f"device {desc.name!r}: {key} must be a non-negative integer")
    return value


class InputBuffer:
    """FIFO of sampled values, owned by one driver."""

    def __init__(self):
        self._queue = collections.deque()

    def __len__(self) -> int:
        return len(self._queue)

    def put(self, value) -> None:
        self._queue.append(value)

    def take(self):
        if not self._queue:
            raise BufferEmpty("input buffer is empty")
        return self._queue.popleft()


class SimDevice:
    """Common driver state: descriptor, timeline access, signal registration."""

    def __init__(self, desc: DeviceDescriptor, time: TimeManager, signals: SignalManager, rng: RngPool):
        self.name = desc.name
        self.desc = desc
        self._time = time
        self._signals = signals
        self._rng = rng.stream(desc.name)

    def _register(self, signal_name: str, kind: SignalKind, is_input: bool = False):
        return self._signals.register(self.name, signal_name, kind, is_input=is_input)


class CoreDevice(SimDevice):
    """The core device: owns cursor synchronization and the kernel marker."""

    def __init__(self, desc, time, signals, rng):
        super().__init__(desc, time, signals, rng)
        self.kernel_marker = self._register("kernel", SignalKind.TEXT)

    def reset(self) -> int:
        """Synchronize the cursor to the counter estimate plus configured slack."""
        return self._time.sync_to_counter()


class TtlOut(SimDevice):
    """Digital output pin with a single boolean state signal."""

    def __init__(self, desc, time, signals, rng):
        super().__init__(desc, time, signals, rng)
        self.state = self._register("state", SignalKind.BOOL)

    def on(self) -> None:
        self.state.push(True, self._time.now_mu())

    def off(self) -> None:
        self.state.push(False, self._time.now_mu())

    def pulse_mu(self, duration_mu: int) -> None:
        if duration_mu <= 0:
            raise DeviceError(f"pulse duration must be positive, got {duration_mu}")
        self.on()
        self._time.delay_mu(duration_mu)
        self.off()

    # Alias matching the common driver surface.
    pulse = pulse_mu


class TtlIn(SimDevice):
    """Digital input sampled against a test-configured probability signal."""

    def __init__(self, desc, time, signals, rng):
        super().__init__(desc, time, signals, rng)
        self.prob = self._register("prob", SignalKind.REAL, is_input=True)
        self.sample = self._register("sample", SignalKind.INT)
        self.buffer = InputBuffer()
        self._sample_delay_mu = _delay_param(desc, "sample_delay_mu")

    def sample_input(self) -> None:
        """Draw one Bernoulli sample at the cursor and enqueue it."""
        cursor = self._time.now_mu()
        p = self.prob.pull(cursor)
        if p is UNKNOWN:
            raise InputUnset(f"{self.name}: input probability is unset at t={cursor}")
        if not 0.0 <= p <= 1.0:
            raise DeviceError(f"{self.name}: probability {p} outside [0, 1]")
        value = self._rng.bernoulli(p)
        self.sample.push(value, cursor)
        self.buffer.put(value)
        self._time.delay_mu(self._sample_delay_mu)

    def fetch_sample(self) -> int:
        """Consume the oldest enqueued sample."""
        return self.buffer.take()

    def sample_get(self) -> int:
        """Draw, enqueue, and immediately consume one sample."""
        self.sample_input()
        return self.fetch_sample()


class EdgeCounter(SimDevice):
    """Edge counter gated with a window, counting against an input frequency."""

    def __init__(self, desc, time, signals, rng):
        super().__init__(desc, time, signals, rng)
        mode = desc.param("counter_mode")
        if mode not in ("deterministic", "poisson"):
            raise DeviceError(
                f"device {desc.name!r}: counter_mode must be 'deterministic' or 'poisson', got {mode!r}"
            )
        self.mode = mode
        self.freq = self._register("freq", SignalKind.REAL, is_input=True)
        self.gate = self._register("gate", SignalKind.BOOL)
        self.buffer = InputBuffer()

    def gate_rising_mu(self, duration_mu: int) -> int:
        """Open the gate for ``duration_mu``, enqueue the count, return the close time."""
        if duration_mu <= 0:
            raise DeviceError(f"gate duration must be positive, got {duration_mu}")
        t_open = self._time.now_mu()
        f = self.freq.pull(t_open)
        if f is UNKNOWN:
            raise InputUnset(f"{self.name}: input frequency is unset at t={t_open}")
        if f < 0:
            raise DeviceError(f"{self.name}: negative input frequency {f}")
        self.gate.push(True, t_open)
        self._time.delay_mu(duration_mu)
        t_close = self._time.now_mu()
        self.gate.push(False, t_close)
        mean = f * duration_mu * self._time.config.ref_period_s
        if self.mode == "deterministic":
            count = round_half_away_from_zero(mean)
        else:
            count = self._rng.poisson(mean)
        self.buffer.put(count)
        return t_close

    gate_rising = gate_rising_mu

    def fetch_count(self) -> int:
        return self.buffer.take()


class Dds(SimDevice):
    """Direct digital synthesizer channel: frequency, phase, amplitude."""

    def __init__(self, desc, time, signals, rng):
        super().__init__(desc, time, signals, rng)
        self.freq = self._register("freq", SignalKind.REAL)
        self.phase = self._register("phase", SignalKind.REAL)
        self.amp = self._register("amp", SignalKind.REAL)
        self.init_marker = self._register("init", SignalKind.BOOL)
        self._init_delay_mu = _delay_param(desc, "init_delay_mu")
        self._set_delay_mu = _delay_param(desc, "set_delay_mu")

    def init(self) -> None:
        """Model device initialization: advance by init_delay_mu, mark done."""
        self._time.delay_mu(self._init_delay_mu)
        self.init_marker.push(True, self._time.now_mu())

    def set(self, freq_hz: float, phase_turns: float = 0.0, amplitude: float = 1.0) -> None:
        if not freq_hz >= 0:
            raise DeviceError(f"{self.name}: frequency must be >= 0, got {freq_hz}")
        if not 0.0 <= phase_turns < 1.0:
            raise DeviceError(f"{self.name}: phase must be in [0, 1) turns, got {phase_turns}")
        if not 0.0 <= amplitude <= 1.0:
            raise DeviceError(f"{self.name}: amplitude must be in [0, 1], got {amplitude}")
        cursor = self._time.now_mu()
        self.freq.push(float(freq_hz), cursor)
        self.phase.push(float(phase_turns), cursor)
        self.amp.push(float(amplitude), cursor)
        self._time.delay_mu(self._set_delay_mu)


class Adc(SimDevice):
    """Multi-channel ADC sampling test-configured input voltage signals."""

    def __init__(self, desc, time, signals, rng):
        super().__init__(desc, time, signals, rng)
        channels = desc.param("channels")
        if type(channels) is bool or not isinstance(channels, int) or channels < 1:
            raise DeviceError(f"device {desc.name!r}: channels must be a positive integer")
        self.voltages = [
            self._register(f"v{i}", SignalKind.REAL, is_input=True) for i in range(channels)
        ]
        self.buffer = InputBuffer()
        self._sample_delay_mu = _delay_param(desc, "sample_delay_mu")

    @property
    def channels(self) -> int:
        return len(self.voltages)

    def sample_input(self) -> None:
        """Read all channel voltages at the cursor and enqueue the vector."""
        cursor = self._time.now_mu()
        values = []
        for i, sig in enumerate(self.voltages):
            v = sig.pull(cursor)
            if v is UNKNOWN:
                raise InputUnset(f"{self.name}: channel {i} voltage is unset at t={cursor}")
            values.append(v)
        self.buffer.put(values)
        self._time.delay_mu(self._sample_delay_mu)

    def fetch_sample(self) -> list[float]:
        return self.buffer.take()

    def sample(self) -> list[float]:
        """Sample all channels and return the vector."""
        self.sample_input()
        return self.fetch_sample()


DRIVER_CLASSES = {
    "core": CoreDevice,
    "ttl_out": TtlOut,
    "ttl_in": TtlIn,
    "edge_counter": EdgeCounter,
    "dds": Dds,
    "adc": Adc,
}


def make_driver(
    desc: DeviceDescriptor,
    time: TimeManager,
    signals: SignalManager,
    rng: RngPool,
) -> SimDevice:
    return DRIVER_CLASSES[desc.kind](desc, time, signals, rng)
