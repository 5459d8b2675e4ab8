# cython: language_level=3
# distutils: language = c++
"""Compiled event store: C++ timestamp vector + Python value list.

Same interface as the pure-Python store in ``_store_py``; the timestamp
binary search and insertion run at C speed.
"""

from libc.stdint cimport int64_t
from libcpp.vector cimport vector


cdef class EventStore:
    cdef vector[int64_t] _times
    cdef list _values

    def __cinit__(self):
        self._values = []

    def __len__(self):
        return <Py_ssize_t>self._times.size()

    cdef Py_ssize_t _lower_bound(self, int64_t t):
        # First index with _times[idx] >= t.
        cdef Py_ssize_t lo = 0
        cdef Py_ssize_t hi = <Py_ssize_t>self._times.size()
        cdef Py_ssize_t mid
        while lo < hi:
            mid = (lo + hi) // 2
            if self._times[mid] < t:
                lo = mid + 1
            else:
                hi = mid
        return lo

    cdef Py_ssize_t _upper_bound(self, int64_t t):
        # First index with _times[idx] > t.
        cdef Py_ssize_t lo = 0
        cdef Py_ssize_t hi = <Py_ssize_t>self._times.size()
        cdef Py_ssize_t mid
        while lo < hi:
            mid = (lo + hi) // 2
            if self._times[mid] <= t:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def push(self, time, value):
        cdef int64_t t = time
        cdef Py_ssize_t n = <Py_ssize_t>self._times.size()
        cdef Py_ssize_t idx
        if n == 0 or t > self._times[n - 1]:
            self._times.push_back(t)
            self._values.append(value)
            return
        if t == self._times[n - 1]:
            self._values[n - 1] = value
            return
        idx = self._lower_bound(t)
        if idx < n and self._times[idx] == t:
            self._values[idx] = value
        else:
            self._times.insert(self._times.begin() + idx, t)
            self._values.insert(idx, value)

    def pull(self, time):
        """Value of the latest event at or before ``time``; None if there is none."""
        cdef Py_ssize_t idx = self._upper_bound(time)
        if idx == 0:
            return None
        return self._values[idx - 1]

    def max_time(self):
        cdef Py_ssize_t n = <Py_ssize_t>self._times.size()
        if n == 0:
            return None
        return self._times[n - 1]

    def items(self):
        cdef Py_ssize_t i
        return [(self._times[i], self._values[i]) for i in range(<Py_ssize_t>self._times.size())]

    def range_items(self, t0, t1):
        cdef Py_ssize_t lo = self._lower_bound(t0)
        cdef Py_ssize_t hi = self._upper_bound(t1)
        cdef Py_ssize_t i
        return [(self._times[i], self._values[i]) for i in range(lo, hi)]
