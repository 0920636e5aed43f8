"""Backend selection for the floating-point kernels.

``CASAS_ALVERO_BACKEND=numpy`` forces the vectorised numpy implementations;
anything else (default ``numba``) uses the JIT kernels when numba imports.
``CASAS_ALVERO_WORKERS`` sets the default process-pool width for sweeps.
"""

from __future__ import annotations

import os

BACKEND_ENV = "CASAS_ALVERO_BACKEND"
WORKERS_ENV = "CASAS_ALVERO_WORKERS"


def requested_backend() -> str:
    value = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    return "numpy" if value in {"numpy", "python", "0", "off", "none"} else "numba"


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def active_backend() -> str:
    if requested_backend() == "numba" and numba_available():
        return "numba"
    return "numpy"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


# Shared kernel constants.
START_ANGLE = 0.5 * 2.0**0.5  # Aberth start-circle rotation (irrational)
EPS = 2.220446049250313e-16
MAX_ITER = 200
