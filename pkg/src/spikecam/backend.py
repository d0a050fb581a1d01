"""Kernel backend selection.

The hot per-pixel loops (integrate-and-fire accumulation, window spike
scans) exist twice: a numba ``@njit`` version and a pure-numpy version.
Both produce bit-identical results; the numba path is just faster on
large streams.

The active backend is chosen from the ``SPIKECAM_BACKEND`` environment
variable at import time:

* ``auto`` (default) - numba if importable, else numpy
* ``numba``          - force numba, raise if unavailable
* ``numpy``          - force the pure-numpy fallback

`set_backend` overrides the choice at runtime (used by the benchmark
and by tests that compare the two paths in-process).
"""

from __future__ import annotations

import os

_VALID = ("auto", "numba", "numpy")

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_backend = "auto"


def _resolve(name: str) -> str:
    if name not in _VALID:
        raise ValueError(f"unknown backend {name!r}, expected one of {_VALID}")
    if name == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("SPIKECAM_BACKEND=numba but numba is not importable")
    return name


def set_backend(name: str) -> None:
    """Force the kernel backend to ``numba`` / ``numpy`` / ``auto``."""
    global _backend
    _resolve(name)  # validate eagerly
    _backend = name


def active_backend() -> str:
    """Name of the backend that kernel dispatch will use right now."""
    return _resolve(_backend)


set_backend(os.environ.get("SPIKECAM_BACKEND", "auto"))
