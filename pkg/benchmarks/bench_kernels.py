"""Time the numba and numpy kernel sets on the same inputs.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
Both backend modules are imported directly, so one process compares them;
the first numba call (JIT compilation) is excluded from the timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from casas_alvero import _kernels_numba as nb
from casas_alvero import _kernels_numpy as npk


def _inputs(seed: int = 0):
    rng = np.random.default_rng(seed)
    cases = {}
    for n in (4, 8, 12):
        lam = np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
        cases[n] = (lam, npk.poly_from_roots(lam))
    return cases


def _time(fn, repeat: int) -> float:
    fn()
    t = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t) / repeat


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args(argv)
    print(f"{'kernel':<16}{'n':>4}{'numba us':>12}{'numpy us':>12}{'speedup':>10}{'max diff':>12}")
    for n, (lam, c) in _inputs().items():
        rows = [
            ("roots", lambda m: m.roots(c), lambda a, b: np.max(np.abs(np.sort_complex(a[0]) - np.sort_complex(b[0])))),
            ("ca_objective", lambda m: m.ca_objective(lam), lambda a, b: abs(a - b) / max(abs(b), 1e-300)),
            ("schoenberg_gap", lambda m: m.schoenberg_gap(lam), lambda a, b: abs(a[0] - b[0])),
            ("horner", lambda m: m.horner(c, 0.3 + 0.2j), lambda a, b: abs(a - b)),
        ]
        for name, call, diff in rows:
            t_nb = _time(lambda: call(nb), args.repeat)
            t_np = _time(lambda: call(npk), args.repeat)
            d = float(diff(call(nb), call(npk)))
            print(f"{name:<16}{n:>4}{t_nb * 1e6:>12.1f}{t_np * 1e6:>12.1f}{t_np / t_nb:>10.1f}{d:>12.2e}")


if __name__ == "__main__":
    main()
