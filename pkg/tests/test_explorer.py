from __future__ import annotations

import numpy as np
import pytest

from casas_alvero.explorer import (
    DISTRIBUTIONS,
    SampleConfig,
    SearchConfig,
    ca_objective,
    ca_search,
    classify,
    confirm_exact,
    dispersion,
    nelder_mead,
    sample_roots,
    schoenberg_experiment,
    search_restart,
    trial_roots,
    trial_seed,
)
from casas_alvero.numeric import DomainError


def test_sampling_is_deterministic():
    cfg = SampleConfig(5, 4, seed=9)
    a = [ms.expanded() for ms in sample_roots(cfg)]
    b = [ms.expanded() for ms in sample_roots(cfg)]
    assert a == b


def test_trial_streams_are_independent_of_trial_count():
    assert np.array_equal(trial_roots(SampleConfig(4, 3, 1), 2), trial_roots(SampleConfig(4, 50, 1), 2))
    assert trial_seed(1, 2) != trial_seed(1, 3)


def test_unit_disk_support_and_counts():
    cfg = SampleConfig(4, 3, seed=2)
    sets = list(sample_roots(cfg))
    assert len(sets) == 3
    for ms in sets:
        assert ms.degree == 4
        assert all(abs(complex(z)) <= 1 for z in ms.expanded())


@pytest.mark.parametrize("dist", DISTRIBUTIONS)
def test_distributions(dist):
    r = trial_roots(SampleConfig(6, 1, 0, dist), 0)
    assert r.shape == (6,)
    if dist == "real-interval":
        assert np.all(r.imag == 0)


def test_sample_config_validation():
    with pytest.raises(DomainError):
        SampleConfig(1, 5)
    with pytest.raises(DomainError):
        SampleConfig(3, 5, distribution="cauchy")


@pytest.mark.parametrize(
    "roots, expected",
    [([2 + 1j] * 5, 0.0), ([0.0, 1.0], (1 / 16) / 4)],
)
def test_objective_examples(roots, expected):
    assert ca_objective(roots) == pytest.approx(expected, abs=1e-18)


def test_objective_shift_invariant():
    r = np.array([0, 1, 0.3 + 0.5j, -0.2j])
    assert ca_objective(r + (3 - 2j)) == pytest.approx(ca_objective(r), rel=1e-9)


def test_dispersion():
    assert dispersion([0, 3, 4j]) == pytest.approx(5.0)
    assert dispersion([1 + 1j] * 3) == 0.0


def test_nelder_mead_quadratic():
    res = nelder_mead(lambda x: float(np.sum((x - 1.5) ** 2)), np.zeros(3), xatol=1e-10, fatol=1e-20)
    assert res.converged and np.allclose(res.x, 1.5, atol=1e-8)
    assert list(res.history) == sorted(res.history, reverse=True)


def test_classify():
    cfg = SearchConfig(4)
    assert classify(1e-12, 1e-8, cfg) == "trivial_basin"
    assert classify(1e-12, 0.5, cfg) == "candidate"
    assert classify(1e-3, 0.5, cfg) == "non_converged"


def test_trivial_start_converges_immediately():
    s = search_restart(SearchConfig(5, restarts=1), 0, start=[0.3 + 0.1j] * 5)
    assert s.classification == "trivial_basin" and s.objective == 0.0 and s.iterations == 0


def test_confirm_rejects_non_ca_points():
    assert confirm_exact([0, 1, 1, 1, 1]) is False


def test_degree4_search_trivial():
    res = ca_search(SearchConfig(4, restarts=6, seed=3), workers=1)
    assert res.classification == "trivial_basin"
    assert res.best_objective < 1e-10 and res.dispersion < 1e-6
    assert res.counts()["candidate"] == 0


def test_search_is_reproducible():
    a = ca_search(SearchConfig(4, restarts=2, seed=5), workers=1)
    b = ca_search(SearchConfig(4, restarts=2, seed=5), workers=1)
    assert [r.objective for r in a.trace] == [r.objective for r in b.trace]


def test_candidate_bundle_contents():
    res = ca_search(SearchConfig(6, restarts=2, seed=1, restart_cycles=1, polish_iterations=200), workers=1)
    for b in res.candidates:
        assert {"seed", "restart", "degree", "roots"} <= set(b)


def test_schoenberg_experiment_degree2_and_real():
    s = schoenberg_experiment(SampleConfig(2, 50, seed=1), workers=1)
    assert s.violation_count == 0
    real = schoenberg_experiment(SampleConfig(5, 50, seed=1, distribution="real-interval"), workers=1)
    assert real.violation_count == 0
    assert real.equality_count == 50 and real.equality_all_collinear


def test_schoenberg_parallel_matches_serial():
    cfg = SampleConfig(4, 40, seed=8)
    a = schoenberg_experiment(cfg, workers=1)
    b = schoenberg_experiment(cfg, workers=2)
    assert a.to_dict(include_rows=True) == b.to_dict(include_rows=True)
