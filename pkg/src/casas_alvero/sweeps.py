"""Randomised identity sweeps.

Each identity has a generator producing inputs that satisfy its hypotheses.
Trial ``t`` uses the sub-generator ``SeedSequence([seed, t])``; one trial may
emit several rows (e.g. every admissible derivative order).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._accel import default_workers
from .explorer import _map, _seed_sequence, trial_seed
from .goncharov import NodeSequence, goncharov_recurrence
from .identities import (
    IDENTITY_IDS,
    IdentityReport,
    hoppe_log_derivative,
    laguerre_check,
    moment_identity,
    newton_like_aggregate,
    sz_nagy_check,
    viete_check,
)
from .numeric import DEFAULT_TOL, ComplexFloat, GaussianRational, Tolerance, to_float
from .poly import Poly, RootMultiset, eval_poly, roots_numeric


@dataclass(frozen=True)
class SweepRow:
    identity_id: str
    trial: int
    degree: int
    seed: int
    residual: float
    scale: float
    passed: bool
    params: str = ""


# -- random inputs ----------------------------------------------------------------

def unit_disk(rng: np.random.Generator, n: int) -> list:
    rad = np.sqrt(rng.random(n))
    ang = 2.0 * math.pi * rng.random(n)
    return [ComplexFloat(complex(z)) for z in rad * np.exp(1j * ang)]


def small_rational(rng: np.random.Generator, span: int = 5, den: int = 3) -> Fraction:
    return Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, den + 1)))


def gaussian_rational(rng: np.random.Generator, span: int = 5, den: int = 3) -> GaussianRational:
    return GaussianRational(small_rational(rng, span, den), small_rational(rng, span, den))


def distinct_rationals(rng: np.random.Generator, n: int, span: int = 6, den: int = 3, complex_: bool = True) -> list:
    out: list = []
    while len(out) < n:
        x = gaussian_rational(rng, span, den) if complex_ else GaussianRational(small_rational(rng, span, den))
        if x not in out:
            out.append(x)
    return out


def rotated_real_roots(rng: np.random.Generator, n: int, offset: Optional[float] = None) -> tuple[list, complex]:
    """Real roots in [-1, 1] (re-centred when ``offset`` is given), rotated by a random angle."""
    xs = 2.0 * rng.random(n) - 1.0
    if offset is not None:
        xs = xs - xs.mean()
        spread = math.sqrt(max(float(np.sum(xs**2)) / (n * (n - 1)), 1e-12))
        xs = xs + offset * spread
    rot = cmath.exp(1j * 2.0 * math.pi * rng.random())
    return [ComplexFloat(complex(x) * rot) for x in xs], rot


def _rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng(_seed_sequence(seed, t))


# -- per-identity trials -----------------------------------------------------------

def _rows(identity: str, t: int, seed: int, n: int, reports: list[tuple[IdentityReport, str]]) -> list[SweepRow]:
    s = trial_seed(seed, t)
    return [SweepRow(identity, t, n, s, r.residual, r.scale, r.passed, p) for r, p in reports]


def _float_or_exact_poly(rng, n: int, exact: bool) -> Poly:
    if exact:
        return Poly.from_roots([gaussian_rational(rng) for _ in range(n)])
    return Poly.from_roots(unit_disk(rng, n))


def _trial_eq21(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    n = int(rng.integers(3, max(3, max_degree) + 1))
    f = _float_or_exact_poly(rng, n, exact)
    z = gaussian_rational(rng) if exact else unit_disk(rng, 1)[0]
    reps = []
    for m in range(1, n - 1):
        for choice in (0, 1):
            reps.append((sz_nagy_check(f, m, z, choice, tol), f"m={m};choice={choice}"))
    return _rows("EQ21", t, seed, n, reps)


def _trial_eq22(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    n = int(rng.integers(2, max_degree + 1))
    f = _float_or_exact_poly(rng, n, exact)
    return _rows("EQ22", t, seed, n, [(moment_identity(f, "EQ22", tol=tol), "")])


def _squarefree(rng, n: int, exact: bool) -> Poly:
    if exact:
        return Poly.from_roots(distinct_rationals(rng, n))
    return Poly.from_roots(unit_disk(rng, n))


def _trial_log(kind):
    def run(t, seed, exact, tol, max_degree):
        rng = _rng(seed, t)
        n = int(rng.integers(2, min(max_degree, 8) + 1))
        if exact:
            # exact path also exercises repeated roots
            k = int(rng.integers(2, n + 1))
            lam = distinct_rationals(rng, k)
            mult = [1] * k
            for _ in range(n - k):
                mult[int(rng.integers(0, k))] += 1
            f = RootMultiset(tuple(zip(lam, mult))).poly()
        else:
            f = _squarefree(rng, n, False)
        return _rows(kind, t, seed, n, [(moment_identity(f, kind, tol=tol), "")])

    return run


def _trial_abs(kind):
    def run(t, seed, exact, tol, max_degree):
        rng = _rng(seed, t)
        n = int(rng.integers(3, min(max_degree, 8) + 1))
        if kind == "EQ28":
            # centroid strictly inside the subcentroid pair so one root sits across the origin
            roots, _ = rotated_real_roots(rng, n, offset=float(rng.uniform(-0.8, 0.8)))
        else:
            roots, _ = rotated_real_roots(rng, n)
        if exact:
            xs = sorted({small_rational(rng, 6, 3) for _ in range(3 * n)})[:n]
            while len(xs) < n:
                xs.append(xs[-1] + 1)
            if kind == "EQ28":
                mean = sum(xs) / n
                xs = [x - mean for x in xs]
            direction = gaussian_rational(rng)
            if direction.is_zero():
                direction = GaussianRational(1, 1)
            roots = [direction * x for x in xs]
        f = Poly.from_roots(roots)
        return _rows(kind, t, seed, n, [(moment_identity(f, kind, tol=tol), "")])

    return run


def _trial_eq30(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    n = int(rng.integers(2, max_degree + 1))
    f = _squarefree(rng, n, exact)
    reps = [(moment_identity(f, "EQ30", m=m, tol=tol), f"m={m}") for m in range(0, n + 1)]
    return _rows("EQ30", t, seed, n, reps)


def _trial_eq34(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    n = int(rng.integers(4, max(4, max_degree) + 1))
    if exact:
        xs = distinct_rationals(rng, n, complex_=False)
    else:
        xs = [ComplexFloat(float(x)) for x in 2.0 * rng.random(n) - 1.0]
    f = Poly.from_roots(xs)
    reps = []
    for s in range(2, n):
        for m in range(0, n - s):
            reps.append((moment_identity(f, "EQ34", m=m, s=s, tol=tol), f"m={m};s={s}"))
    return _rows("EQ34", t, seed, n, reps)


def _trial_eq19(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    n = int(rng.integers(1, min(max_degree, 8) + 1))
    if exact:
        nodes = [GaussianRational(0)] + [gaussian_rational(rng) for _ in range(n - 1)]
        pts = [gaussian_rational(rng) for _ in range(int(rng.integers(1, 4)))]
        return _rows("EQ19", t, seed, n, [(newton_like_aggregate(nodes, pts, tol), "random points")])
    nodes = [ComplexFloat(0.0)] + unit_disk(rng, n - 1)
    g = goncharov_recurrence(NodeSequence(nodes))
    pts = [z for z in roots_numeric(g).roots if abs(z) > 1e-6] or unit_disk(rng, 1)
    return _rows("EQ19", t, seed, n, [(newton_like_aggregate(nodes, pts, tol), "roots of G")])


def _trial_eq20(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    while True:
        k = int(rng.integers(2, min(max_degree, 6) + 1))
        lam = distinct_rationals(rng, k)
        mult = [int(rng.integers(1, 3)) for _ in range(k)]
        # move the last root so the centroid lands on lam[0]
        partial = sum(((x - lam[0]) * r for x, r in zip(lam[1:-1], mult[1:-1])), GaussianRational(0))
        lam[-1] = lam[0] - partial / GaussianRational(mult[-1])
        if len(set(lam)) == k:
            break
    ms = RootMultiset(tuple(zip(lam, mult)))
    if not exact:
        ms = RootMultiset(tuple((to_float(x), r) for x, r in ms.entries))
    return _rows("EQ20", t, seed, ms.degree, [(viete_check(ms, ms.entries[0][0], tol), "")])


def _trial_eq31(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    n = int(rng.integers(1, min(max_degree, 6) + 1))
    if exact:
        f = Poly([gaussian_rational(rng) for _ in range(n)] + [gaussian_rational(rng) or GaussianRational(1)])
        if f.degree < 1:
            f = Poly([1, 1])
        z = gaussian_rational(rng)
        while eval_poly(f, z).is_zero():
            z = z + 1
    else:
        f = Poly.from_roots(unit_disk(rng, n))
        z = ComplexFloat(complex(unit_disk(rng, 1)[0]) * 2.0)
    reps = [(hoppe_log_derivative(f, m, z, tol), f"m={m}") for m in range(0, 6)]
    return _rows("EQ31", t, seed, f.degree, reps)


def _trial_eq33(t, seed, exact, tol, max_degree):
    rng = _rng(seed, t)
    n = int(rng.integers(2, max_degree + 1))
    if exact:
        xs = distinct_rationals(rng, n, complex_=False)
        pts = [GaussianRational(small_rational(rng, 8, 4)) for _ in range(20)]
    else:
        xs = [ComplexFloat(float(x)) for x in 2.0 * rng.random(n) - 1.0]
        pts = [ComplexFloat(float(x)) for x in 3.0 * rng.random(20) - 1.5]
    f = Poly.from_roots(xs)
    return _rows("EQ33", t, seed, n, [(laguerre_check(f, x, tol), f"x={complex(to_float(x)).real:.17g}") for x in pts])


TRIALS: dict[str, Callable] = {
    "EQ19": _trial_eq19,
    "EQ20": _trial_eq20,
    "EQ21": _trial_eq21,
    "EQ22": _trial_eq22,
    "EQ24": _trial_log("EQ24"),
    "EQ25": _trial_log("EQ25"),
    "EQ26": _trial_abs("EQ26"),
    "EQ27": _trial_abs("EQ27"),
    "EQ28": _trial_abs("EQ28"),
    "EQ30": _trial_eq30,
    "EQ31": _trial_eq31,
    "EQ33": _trial_eq33,
    "EQ34": _trial_eq34,
}
assert set(TRIALS) == set(IDENTITY_IDS)


def _job(args):
    identity, t, seed, exact, tol, max_degree = args
    return TRIALS[identity](t, seed, exact, tol, max_degree)


def sweep(
    identity: str,
    trials: int,
    seed: int = 0,
    exact: bool = False,
    tol: Tolerance = DEFAULT_TOL,
    max_degree: int = 10,
    workers: Optional[int] = None,
) -> list[SweepRow]:
    """Rows for ``trials`` random hypothesis-satisfying inputs, in trial order."""
    if identity not in TRIALS:
        raise KeyError(identity)
    workers = default_workers() if workers is None else workers
    jobs = [(identity, t, seed, exact, tol, max_degree) for t in range(trials)]
    out: list[SweepRow] = []
    for rows in _map(_job, jobs, workers):
        out.extend(rows)
    return out
