"""Event-store backend selection.

The compiled store is preferred when the extension built; set
``RTSIM_PURE_PYTHON=1`` to force the pure-Python store. Both expose the same
interface and are interchangeable.
"""

import os

from . import _store_py

if os.environ.get("RTSIM_PURE_PYTHON"):
    EventStore = _store_py.EventStore
    STORE_BACKEND = "python"
else:
    try:
        from . import _store_cy

        EventStore = _store_cy.EventStore
        STORE_BACKEND = "cython"
    except ImportError:
        EventStore = _store_py.EventStore
        STORE_BACKEND = "python"


def store_backend() -> str:
    """Name of the event-store backend selected at import ('cython' or 'python')."""
    return STORE_BACKEND


def available_backends() -> dict:
    """All importable store classes by backend name (for tests and benchmarks)."""
    backends = {"python": _store_py.EventStore}
    try:
        from . import _store_cy as cy

        backends["cython"] = cy.EventStore
    except ImportError:
        pass
    return backends
