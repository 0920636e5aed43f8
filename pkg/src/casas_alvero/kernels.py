"""Dispatch to the numba or numpy kernel set (see ``_accel`` for the env flag)."""

from ._accel import active_backend

BACKEND = active_backend()

if BACKEND == "numba":
    from ._kernels_numba import (  # noqa: F401
        aberth,
        ca_objective,
        companion_roots,
        derivative,
        horner,
        poly_from_roots,
        roots,
        schoenberg_gap,
    )
else:
    from ._kernels_numpy import (  # noqa: F401
        aberth,
        ca_objective,
        companion_roots,
        derivative,
        horner,
        poly_from_roots,
        roots,
        schoenberg_gap,
    )

__all__ = [
    "BACKEND",
    "aberth",
    "ca_objective",
    "companion_roots",
    "derivative",
    "horner",
    "poly_from_roots",
    "roots",
    "schoenberg_gap",
]
