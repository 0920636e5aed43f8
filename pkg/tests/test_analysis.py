from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casas_alvero.analysis import (
    ca_check,
    prop6_bound,
    prop6_constant,
    prop9_report,
    shared_roots,
    triviality_check,
)
from casas_alvero.numeric import ComplexFloat, DomainError, GaussianRational
from casas_alvero.poly import Poly, RootMultiset, affine_compose

from _oracles import random_gaussian
from conftest import Q

I = GaussianRational(0, 1)
Z3_MINUS_3Z = Poly([Q(0), Q(-3), Q(0), Q(1)])
Z_Z1 = Poly([Q(0), Q(-1), Q(1)])


def power(b, n) -> Poly:
    return Poly.from_roots([b] * n)


@pytest.mark.parametrize(
    "f, j, expected",
    [(power(Q(1), 4), 2, [Q(1)]), (Z_Z1, 1, []), (Z3_MINUS_3Z, 1, [])],
)
def test_shared_roots_examples(f, j, expected):
    assert shared_roots(f, j) == expected


def test_shared_roots_numeric_mode():
    f = Poly.from_roots([ComplexFloat(1.0)] * 4)
    got = shared_roots(f, 2, mode="numeric")
    assert len(got) == 1 and abs(complex(got[0]) - 1) < 1e-6


@pytest.mark.parametrize(
    "f, verdict",
    [
        (power(Q(5), 6), "trivial"),
        (power(GaussianRational(2, -3), 4), "trivial"),
        (Z_Z1, "non_CA"),
        (Z3_MINUS_3Z, "non_CA"),
    ],
)
def test_verdicts(f, verdict):
    assert ca_check(f).verdict == verdict


def test_equal_multiplicity_filter():
    rep = ca_check(Z_Z1 * Z_Z1)
    assert rep.verdict == "non_CA"
    assert rep.first_empty_order == 2
    assert rep.filters["equal_multiplicity"] == 2
    assert rep.filters["equal_multiplicity_order_empty"] is True


@pytest.mark.parametrize("mult", [2, 3])
@pytest.mark.parametrize("roots", [[Q(0), Q(1)], [Q(0), Q(1), I], [Q(-2), GaussianRational(1, 1), Q(3)]])
def test_equal_multiplicity_products(roots, mult):
    f = RootMultiset(tuple((r, mult) for r in roots)).poly()
    rep = ca_check(f)
    assert rep.verdict == "non_CA"
    assert rep.filters["equal_multiplicity_order_empty"] is True


def test_report_records_every_order():
    rep = ca_check(Z3_MINUS_3Z)
    assert [r.order for r in rep.records] == [1, 2]
    assert rep.record(2).shared == (Q(0),)


def test_numeric_check_agrees_with_exact():
    f = Poly.from_roots([ComplexFloat(0.0), ComplexFloat(0.0), ComplexFloat(1.0), ComplexFloat(1.0)])
    assert ca_check(f).verdict == "non_CA"
    assert ca_check(Poly.from_roots([ComplexFloat(0.5, 0.5)] * 5)).verdict == "trivial"


@pytest.mark.parametrize(
    "f",
    [power(Q(5), 6), Z_Z1, Z3_MINUS_3Z, Z_Z1 * Z_Z1, Poly.from_roots([Q(0), Q(0), Q(0), Q(1), Q(1)])],
)
def test_verdict_affine_invariance(f):
    rng = np.random.default_rng(f.degree)
    base = ca_check(f).verdict
    for _ in range(20):
        alpha = random_gaussian(rng)
        if alpha.is_zero():
            alpha = Q(2)
        assert ca_check(affine_compose(f, alpha, random_gaussian(rng))).verdict == base


@pytest.mark.parametrize(
    "f, criterion, expected",
    [
        (power(Q(0), 4), "prop7", True),
        (power(GaussianRational(2, 3), 5), "prop8_vertical", True),
        (power(GaussianRational(2, 3), 5), "prop8_horizontal", True),
        (Z3_MINUS_3Z, "prop7", False),
    ],
)
def test_triviality_examples(f, criterion, expected):
    assert triviality_check(f, criterion) is expected


def test_triviality_precondition():
    with pytest.raises(DomainError):
        triviality_check(Poly.from_roots([Q(1), I, Q(2)]), "prop7")


def test_disk_constant_oracle():
    with mpmath.workdps(40):
        x = mpmath.mpf(1) / 2 * mpmath.log(3)
        oracle = float(x * mpmath.exp(1 - x))
    assert prop6_constant(0.5) == pytest.approx(oracle, rel=1e-12)
    assert round(prop6_constant(0.5), 10) == round(oracle, 10)


def test_disk_example():
    rep = prop6_bound(0.9, RootMultiset(((Q(0), 2), (Q(3), 1), (Q(-3), 1))), Q(0))
    assert rep.all_inside is False and rep.contradiction is False
    assert rep.lower_bound_value > 0


@pytest.mark.parametrize("mu", [k / 20 for k in range(1, 20)])
def test_disk_bound_positive(mu):
    rng = np.random.default_rng(int(mu * 100))
    for _ in range(5):
        pts = [ComplexFloat(complex(z)) for z in rng.normal(size=4) + 1j * rng.normal(size=4)]
        ms = RootMultiset(tuple((p, 1) for p in pts))
        assert prop6_bound(mu, ms, pts[0]).lower_bound_value > 0


def test_moment_gap_report_degree5():
    f = Poly.from_roots([ComplexFloat(x) for x in (-0.9, -0.3, 0.1, 0.5, 0.8)])
    rep = prop9_report(f, 1, 2)
    assert rep.satisfied and rep.excluded == ()
    assert rep.eq34_residual <= 1e-9 * rep.scale


def test_moment_gap_rejects_trivial():
    with pytest.raises(DomainError):
        prop9_report(power(Q(2), 5), 1, 2)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=5, unique=True), st.integers(1, 3))
def test_equal_multiplicity_property(roots, mult):
    f = RootMultiset(tuple((Q(r), mult) for r in roots)).poly()
    assert ca_check(f).verdict == "non_CA"
