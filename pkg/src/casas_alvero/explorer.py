"""Randomised experiments: Schoenberg-gap surveillance and a multistart
Nelder-Mead search for polynomials sharing a root with every derivative.

Every trial (or restart) ``t`` draws from its own generator seeded by
``SeedSequence([seed, t])``, so results do not depend on execution order or
on the number of worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from . import kernels
from ._accel import default_workers
from .analysis import ca_check
from .identities import rectilinearity, schoenberg_gap_roots
from .numeric import ComplexFloat, DomainError, GaussianRational, Tolerance, as_scalar, to_float
from .poly import Poly, RootMultiset

DISTRIBUTIONS = ("uniform-unit-disk", "gaussian", "real-interval")
VIOLATION_LEVEL = -1e-9
EQUALITY_LEVEL = 1e-9
CONFIRM_DENOMINATOR = 10**4
SEED_MASK = (1 << 64) - 1


def _seed_sequence(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & SEED_MASK, int(index)])


def trial_seed(seed: int, index: int) -> int:
    """The 64-bit integer that identifies trial ``index``'s sub-generator."""
    return int(_seed_sequence(seed, index).generate_state(1, dtype=np.uint64)[0])


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# -- sampling ------------------------------------------------------------------

@dataclass(frozen=True)
class SampleConfig:
    degree: int
    trials: int
    seed: int = 0
    distribution: str = "uniform-unit-disk"

    def __post_init__(self):
        if self.degree < 2:
            raise DomainError("degree must be >= 2")
        if self.trials < 1:
            raise DomainError("trials must be positive")
        if self.distribution not in DISTRIBUTIONS:
            raise DomainError(f"distribution must be one of {DISTRIBUTIONS}")


def trial_roots(cfg: SampleConfig, t: int) -> np.ndarray:
    rng = np.random.default_rng(_seed_sequence(cfg.seed, t))
    n = cfg.degree
    if cfg.distribution == "uniform-unit-disk":
        rad = np.sqrt(rng.random(n))
        ang = 2.0 * math.pi * rng.random(n)
        return rad * np.exp(1j * ang)
    if cfg.distribution == "gaussian":
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return (2.0 * rng.random(n) - 1.0).astype(np.complex128)


def sample_roots(cfg: SampleConfig) -> Iterator[RootMultiset]:
    """Deterministic stream of ``cfg.trials`` root multisets of total multiplicity ``cfg.degree``."""
    for t in range(cfg.trials):
        arr = trial_roots(cfg, t)
        yield RootMultiset(tuple((ComplexFloat(complex(z)), 1) for z in arr))


# -- Schoenberg experiment -----------------------------------------------------

@dataclass(frozen=True)
class GapRow:
    trial: int
    seed: int
    degree: int
    gap: float
    collinear: bool
    classification: str  # violation | equality | strict


@dataclass
class SchoenbergSummary:
    degree: int
    trials: int
    seed: int
    distribution: str
    min_gap: float
    min_gap_trial: int
    min_gap_seed: int
    violation_count: int
    equality_count: int
    equality_collinear_count: int
    violations: list = field(default_factory=list)
    equality_cases: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def equality_all_collinear(self) -> bool:
        return self.equality_collinear_count == self.equality_count

    def to_dict(self, include_rows: bool = False) -> dict:
        d = asdict(self)
        if not include_rows:
            d.pop("rows")
        d["equality_all_collinear"] = self.equality_all_collinear
        return d


def _gap_row(args) -> GapRow:
    cfg, t = args
    lam = trial_roots(cfg, t)
    rep = schoenberg_gap_roots(lam)
    if rep.gap < VIOLATION_LEVEL:
        cls = "violation"
    elif abs(rep.gap) <= EQUALITY_LEVEL:
        cls = "equality"
    else:
        cls = "strict"
    return GapRow(t, trial_seed(cfg.seed, t), cfg.degree, rep.gap, rep.collinear_through_origin, cls)


def schoenberg_experiment(cfg: SampleConfig, workers: Optional[int] = None) -> SchoenbergSummary:
    """Evaluate the gap on every sample and summarise violations and equality cases.

    The inequality is surveyed, never assumed: violations (gap < -1e-9) are
    counted and listed with their reproduction seeds.
    """
    workers = default_workers() if workers is None else workers
    rows = _map(_gap_row, [(cfg, t) for t in range(cfg.trials)], workers)
    best = min(rows, key=lambda r: (r.gap, r.trial))
    viol = [asdict(r) for r in rows if r.classification == "violation"]
    eq = [r for r in rows if r.classification == "equality"]
    return SchoenbergSummary(
        degree=cfg.degree,
        trials=cfg.trials,
        seed=cfg.seed,
        distribution=cfg.distribution,
        min_gap=best.gap,
        min_gap_trial=best.trial,
        min_gap_seed=best.seed,
        violation_count=len(viol),
        equality_count=len(eq),
        equality_collinear_count=sum(r.collinear for r in eq),
        violations=viol,
        equality_cases=[{"trial": r.trial, "seed": r.seed, "gap": r.gap, "collinear": r.collinear} for r in eq],
        rows=rows,
    )


# -- CA objective and Nelder-Mead -----------------------------------------------

def ca_objective(roots: Sequence) -> float:
    """Normalised root-sharing residual of the monic polynomial with these roots.

    ``sum_{j=1..n-1} min_{f^(j)(w)=0} |f(w)|^2 / (1 + max|coeff|)^2``; zero for
    every polynomial that shares a root with each derivative.
    """
    arr = np.asarray([complex(to_float(as_scalar(x))) if not isinstance(x, (complex, float, np.complexfloating, np.floating)) else complex(x) for x in roots], dtype=np.complex128)
    if arr.shape[0] < 2:
        raise DomainError("need at least two roots")
    return float(kernels.ca_objective(arr))


def dispersion(roots) -> float:
    arr = np.asarray(roots, dtype=np.complex128)
    if arr.shape[0] < 2:
        return 0.0
    return float(np.max(np.abs(arr[:, None] - arr[None, :])))


@dataclass(frozen=True)
class NelderMeadResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    history: tuple  # best-so-far objective, sampled


def nelder_mead(
    func: Callable[[np.ndarray], float],
    x0,
    *,
    edge: float = 0.3,
    reflection: float = 1.0,
    expansion: float = 2.0,
    contraction: float = 0.5,
    shrink: float = 0.5,
    max_iterations: int = 20000,
    xatol: float = 1e-9,
    fatol: float = 1e-30,
    trace_every: int = 100,
) -> NelderMeadResult:
    """Derivative-free simplex minimisation with configurable coefficients.

    Stops when the simplex fits in an ``xatol`` box around the best vertex and
    the objective spread is at most ``fatol``.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    d = x0.shape[0]
    sim = np.vstack([x0] + [x0 + edge * np.eye(d)[i] for i in range(d)])
    fs = np.array([func(v) for v in sim])
    evals = d + 1
    history = []
    best = float(np.min(fs))
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        best = min(best, float(fs[0]))
        if it % trace_every == 1:
            history.append(best)
        if np.max(np.abs(sim[1:] - sim[0])) <= xatol and fs[-1] - fs[0] <= fatol:
            converged = True
            break
        centre = sim[:-1].mean(axis=0)
        xr = centre + reflection * (centre - sim[-1])
        fr = func(xr)
        evals += 1
        if fr < fs[0]:
            xe = centre + expansion * (xr - centre)
            fe = func(xe)
            evals += 1
            if fe < fr:
                sim[-1], fs[-1] = xe, fe
            else:
                sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-2]:
            sim[-1], fs[-1] = xr, fr
            continue
        if fr < fs[-1]:
            xc = centre + contraction * (xr - centre)
            fc = func(xc)
            evals += 1
            if fc <= fr:
                sim[-1], fs[-1] = xc, fc
                continue
        else:
            xc = centre + contraction * (sim[-1] - centre)
            fc = func(xc)
            evals += 1
            if fc < fs[-1]:
                sim[-1], fs[-1] = xc, fc
                continue
        for i in range(1, d + 1):
            sim[i] = sim[0] + shrink * (sim[i] - sim[0])
            fs[i] = func(sim[i])
        evals += d
    order = np.argsort(fs, kind="stable")
    best = min(best, float(fs[order[0]]))
    history.append(best)
    return NelderMeadResult(sim[order[0]].copy(), float(fs[order[0]]), it, evals, converged, tuple(history))


# -- CA search -----------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    degree: int
    restarts: int = 100
    max_iterations: int = 20000
    objective_tolerance: float = 1e-10
    dispersion_threshold: float = 1e-6
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    edge: float = 0.3
    restart_edge: float = 0.01
    restart_cycles: int = 4
    polish_iterations: int = 2000
    xatol: float = 1e-9
    fatol: float = 1e-30
    seed: int = 0

    def __post_init__(self):
        if self.degree < 2:
            raise DomainError("degree must be >= 2")
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.max_iterations < 1 or self.restart_cycles < 1 or self.polish_iterations < 0:
            raise DomainError("iteration budgets must be positive")
        for name in ("objective_tolerance", "dispersion_threshold", "edge", "restart_edge", "xatol", "fatol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if not (self.reflection > 0 and self.expansion > 1 and 0 < self.contraction < 1 and 0 < self.shrink < 1):
            raise DomainError("simplex coefficients need reflection > 0, expansion > 1, 0 < contraction, shrink < 1")

    def simplex(self) -> dict:
        return dict(reflection=self.reflection, expansion=self.expansion, contraction=self.contraction, shrink=self.shrink)


@dataclass
class RestartSummary:
    restart: int
    seed: int
    objective: float
    dispersion: float
    classification: str
    iterations: int
    cycles: int
    converged: bool
    roots: list
    best_so_far: list
    raw_objective: float = math.nan
    raw_dispersion: float = math.nan
    polish_best_so_far: list = field(default_factory=list)
    confirmed: Optional[bool] = None


@dataclass
class SearchResult:
    degree: int
    best_objective: float
    argmin_roots: list
    dispersion: float
    classification: str  # trivial_basin | candidate | non_converged
    trace: list
    candidates: list = field(default_factory=list)

    def counts(self) -> dict:
        out = {"trivial_basin": 0, "candidate": 0, "non_converged": 0}
        for r in self.trace:
            out[r.classification] += 1
        return out


def _roots_from_params(x: np.ndarray) -> np.ndarray:
    # lambda_1 is pinned at 0; x holds (re, im) of lambda_2..lambda_n
    return np.concatenate([[0j], x[0::2] + 1j * x[1::2]])


def _params_from_roots(r: np.ndarray) -> np.ndarray:
    tail = np.asarray(r[1:] - r[0], dtype=np.complex128)
    out = np.empty(2 * tail.shape[0])
    out[0::2], out[1::2] = tail.real, tail.imag
    return out


def _objective(x: np.ndarray) -> float:
    return float(kernels.ca_objective(_roots_from_params(x)))


def _unit_objective(x: np.ndarray) -> float:
    # objective after rescaling to max|root| = 1
    r = _roots_from_params(x)
    big = float(np.max(np.abs(r)))
    if big == 0.0:
        return 0.0
    return float(kernels.ca_objective(r / big))


def _scale(x: np.ndarray) -> float:
    return float(np.max(np.abs(_roots_from_params(x))))


def classify(objective: float, spread: float, cfg: SearchConfig) -> str:
    if objective < cfg.objective_tolerance:
        return "candidate" if spread > cfg.dispersion_threshold else "trivial_basin"
    return "non_converged"


def confirm_exact(roots, max_denominator: int = CONFIRM_DENOMINATOR) -> bool:
    """Round root coordinates to small rationals and run the exact CA check."""
    exact = [
        GaussianRational(Fraction(z.real).limit_denominator(max_denominator), Fraction(z.imag).limit_denominator(max_denominator))
        for z in (complex(r) for r in roots)
    ]
    f = Poly.from_roots(exact)
    return ca_check(f, "exact").verdict == "CA_candidate"


def _running_min(prev: list, values) -> list:
    out = list(prev)
    cur = out[-1] if out else math.inf
    for v in values:
        cur = min(cur, v)
        out.append(cur)
    return out


def search_restart(cfg: SearchConfig, restart: int, start: Optional[Sequence] = None) -> RestartSummary:
    """One restart of the search.

    Stage 1 minimises the raw objective, restarting the simplex (edge relative
    to the current root scale) whenever it converges without the roots having
    collapsed.  A collapsed point is the trivial basin.  Otherwise stage 2
    rescales to max|root| = 1, polishes the scale-normalised objective and
    classifies there; candidates go through exact confirmation.
    """
    seed = trial_seed(cfg.seed, restart)
    if start is None:
        rng = np.random.default_rng(_seed_sequence(cfg.seed, restart))
        n1 = cfg.degree - 1
        z = np.sqrt(rng.random(n1)) * np.exp(2j * math.pi * rng.random(n1))
        x = _params_from_roots(np.concatenate([[0j], z]))
    else:
        r = np.asarray([complex(v) for v in start], dtype=np.complex128)
        x = _params_from_roots(r)
    best: list = []
    iterations = 0
    converged = False
    fx = _objective(x)
    spread = dispersion(_roots_from_params(x))
    cycles = 0
    edge = cfg.edge
    while cycles < cfg.restart_cycles and classify(fx, spread, cfg) != "trivial_basin":
        cycles += 1
        res = nelder_mead(
            _objective, x, edge=edge * max(_scale(x), cfg.xatol), max_iterations=cfg.max_iterations,
            xatol=cfg.xatol, fatol=cfg.fatol, **cfg.simplex(),
        )
        iterations += res.iterations
        converged = res.converged
        best = _running_min(best, res.history)
        x, fx = res.x, res.fun
        spread = dispersion(_roots_from_params(x))
        edge = cfg.restart_edge
    raw_fx, raw_spread = fx, spread
    polish: list = []
    if classify(fx, spread, cfg) != "trivial_basin":
        big = _scale(x)
        if big > 0.0:
            x = x / big
        fx = _unit_objective(x)
        if cfg.polish_iterations > 0:
            res = nelder_mead(
                _unit_objective, x, edge=cfg.restart_edge, max_iterations=cfg.polish_iterations,
                xatol=cfg.xatol, fatol=cfg.fatol, **cfg.simplex(),
            )
            iterations += res.iterations
            polish = _running_min([], res.history)
            if res.fun <= fx:
                x, fx = res.x, res.fun
        big = _scale(x)
        if big > 0.0:
            x = x / big
        spread = dispersion(_roots_from_params(x))
    roots = _roots_from_params(x)
    cls = classify(fx, spread, cfg)
    summary = RestartSummary(
        restart, seed, fx, spread, cls, iterations, cycles, converged,
        [complex(z) for z in roots], best, raw_fx, raw_spread, polish,
    )
    if cls == "candidate":
        summary.confirmed = confirm_exact(roots)
    return summary


def _restart_job(args) -> RestartSummary:
    cfg, t = args
    return search_restart(cfg, t)


def ca_search(cfg: SearchConfig, workers: Optional[int] = None) -> SearchResult:
    """Multistart search over ``lambda_2..lambda_n`` with ``lambda_1 = 0``.

    The overall classification is ``candidate`` if any restart produced one,
    otherwise that of the restart with the smallest objective.
    """
    workers = default_workers() if workers is None else workers
    trace = _map(_restart_job, [(cfg, t) for t in range(cfg.restarts)], workers)
    trace.sort(key=lambda r: r.restart)
    cands = [r for r in trace if r.classification == "candidate"]
    pick = min(cands or trace, key=lambda r: (r.objective, r.restart))
    bundles = [
        {
            "seed": cfg.seed,
            "restart": r.restart,
            "restart_seed": r.seed,
            "degree": cfg.degree,
            "objective": r.objective,
            "dispersion": r.dispersion,
            "confirmed": r.confirmed,
            "roots": [[float(z.real), float(z.imag)] for z in r.roots],
        }
        for r in cands
    ]
    return SearchResult(
        cfg.degree, pick.objective, [ComplexFloat(z) for z in pick.roots], pick.dispersion,
        "candidate" if cands else pick.classification, trace, bundles,
    )
