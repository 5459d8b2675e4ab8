"""Named, typed signals whose events form the simulated event timeline.

Every signal stores (timestamp, value) events in a timestamp-sorted store.
Pulling at time t returns the value of the latest event at or before t;
before the first event the value is the UNKNOWN sentinel. A push at an
existing timestamp overwrites that event.
"""

from __future__ import annotations

import enum
from typing import Iterator, Optional

from .store import EventStore
from .timeline import MU_MAX, MU_MIN

MAX_TEXT_BYTES = 64


class SignalError(Exception):
    """Base class for signal registry and event-store errors."""


class DuplicateSignalError(SignalError):
    pass


class UnknownSignalError(SignalError, KeyError):
    pass


class SignalKindMismatch(SignalError, TypeError):
    pass


class _Unknown:
    """Sentinel for 'no event at or before this time'. Never storable."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNKNOWN"

    def __bool__(self):
        raise TypeError("UNKNOWN has no truth value")


UNKNOWN = _Unknown()


class SignalKind(enum.Enum):
    BOOL = "bool"
    INT = "int"
    REAL = "real"
    TEXT = "text"

    def coerce(self, value):
        """Validate ``value`` against this kind; returns the stored form.

        BOOL accepts bool only, INT accepts signed 64-bit int (bool excluded),
        REAL accepts int/float and stores float, TEXT accepts str up to 64
        UTF-8 bytes.
        """
        if value is UNKNOWN:
            raise SignalKindMismatch("UNKNOWN cannot be pushed onto a signal")
        if self is SignalKind.BOOL:
            if type(value) is not bool:
                raise SignalKindMismatch(f"expected bool, got {value!r}")
            return value
        if self is SignalKind.INT:
            if type(value) is bool or not isinstance(value, int):
                raise SignalKindMismatch(f"expected int, got {value!r}")
            if not MU_MIN <= value <= MU_MAX:
                raise SignalKindMismatch(f"int value out of signed 64-bit range: {value}")
            return value
        if self is SignalKind.REAL:
            if type(value) is bool or not isinstance(value, (int, float)):
                raise SignalKindMismatch(f"expected real, got {value!r}")
            return float(value)
        if type(value) is not str:
            raise SignalKindMismatch(f"expected text, got {value!r}")
        if len(value.encode("utf-8")) > MAX_TEXT_BYTES:
            raise SignalKindMismatch(f"text value exceeds {MAX_TEXT_BYTES} bytes")
        return value


class Signal:
    """One per-device state channel with a timestamp-sorted event store."""

    __slots__ = ("device_name", "signal_name", "kind", "is_input", "_store", "_on_push")

    def __init__(self, device_name: str, signal_name: str, kind: SignalKind, is_input: bool = False):
        self.device_name = device_name
        self.signal_name = signal_name
        self.kind = kind
        self.is_input = is_input
        self._store = EventStore()
        self._on_push = None

    def __repr__(self):
        return f"Signal({self.device_name}.{self.signal_name}, {self.kind.value})"

    def __len__(self) -> int:
        return len(self._store)

    def push(self, value, time: int) -> None:
        if not MU_MIN <= time <= MU_MAX:
            raise SignalError(f"event timestamp out of 64-bit range: {time}")
        self._store.push(time, self.kind.coerce(value))
        if self._on_push is not None:
            self._on_push(time)

    def pull(self, time: int):
        # Query times beyond the 64-bit domain clamp to it; no event can
        # exist there, so the answer is unchanged and backend-independent.
        value = self._store.pull(min(max(time, MU_MIN), MU_MAX))
        return UNKNOWN if value is None else value

    def events(self) -> list[tuple[int, object]]:
        """All events as (time, value) in strictly increasing time order."""
        return self._store.items()

    def events_in(self, t0: int, t1: int) -> list[tuple[int, object]]:
        if t0 > t1:
            raise ValueError(f"bad event range: {t0} > {t1}")
        return self._store.range_items(max(t0, MU_MIN), min(t1, MU_MAX))

    def max_event_time(self) -> Optional[int]:
        return self._store.max_time()


class SignalManager:
    """Registry of all signals of one simulation.

    Tracks the maximum event timestamp across every signal, which feeds the
    timeline horizon.
    """

    def __init__(self):
        self._signals: dict[tuple[str, str], Signal] = {}
        self._max_event_time: Optional[int] = None

    def register(
        self,
        device_name: str,
        signal_name: str,
        kind: SignalKind,
        is_input: bool = False,
    ) -> Signal:
        key = (device_name, signal_name)
        if key in self._signals:
            raise DuplicateSignalError(f"signal already registered: {device_name}.{signal_name}")
        signal = Signal(device_name, signal_name, kind, is_input)
        signal._on_push = self._record_event_time
        self._signals[key] = signal
        return signal

    def _record_event_time(self, time: int) -> None:
        if self._max_event_time is None or time > self._max_event_time:
            self._max_event_time = time

    def signal(self, device_name: str, signal_name: str) -> Signal:
        try:
            return self._signals[(device_name, signal_name)]
        except KeyError:
            raise UnknownSignalError(f"no such signal: {device_name}.{signal_name}") from None

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self._signals

    def __iter__(self) -> Iterator[Signal]:
        return iter(self._signals.values())

    def list(self) -> list[tuple[str, str]]:
        return list(self._signals.keys())

    def push(self, signal: Signal, value, time: int) -> None:
        signal.push(value, time)

    def pull(self, signal: Signal, time: int):
        return signal.pull(time)

    @property
    def max_event_time(self) -> Optional[int]:
        return self._max_event_time

    def event_count(self) -> int:
        return sum(len(s) for s in self._signals.values())
