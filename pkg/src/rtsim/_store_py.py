"""Pure-Python event store: a sorted timestamp vector plus a value list.

Binary search (bisect) gives O(log n) lookups; pushes at or after the last
timestamp append in O(1), out-of-order pushes insert in place.
"""

from bisect import bisect_left, bisect_right


class EventStore:
    __slots__ = ("_times", "_values")

    def __init__(self):
        self._times: list[int] = []
        self._values: list[object] = []

    def __len__(self) -> int:
        return len(self._times)

    def push(self, time: int, value) -> None:
        times = self._times
        if not times or time > times[-1]:
            times.append(time)
            self._values.append(value)
            return
        if time == times[-1]:
            self._values[-1] = value
            return
        idx = bisect_left(times, time)
        if idx < len(times) and times[idx] == time:
            self._values[idx] = value
        else:
            times.insert(idx, time)
            self._values.insert(idx, value)

    def pull(self, time: int):
        """Value of the latest event at or before ``time``; None if there is none."""
        idx = bisect_right(self._times, time)
        if idx == 0:
            return None
        return self._values[idx - 1]

    def max_time(self):
        return self._times[-1] if self._times else None

    def items(self) -> list:
        return list(zip(self._times, self._values))

    def range_items(self, t0: int, t1: int) -> list:
        lo = bisect_left(self._times, t0)
        hi = bisect_right(self._times, t1)
        return list(zip(self._times[lo:hi], self._values[lo:hi]))
