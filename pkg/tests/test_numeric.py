from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given

from casas_alvero.numeric import (
    ComplexFloat,
    DomainError,
    ExactnessError,
    GaussianRational,
    ScalarParseError,
    Tolerance,
    approx_eq,
    exact_sqrt,
    parse_scalar,
    render,
    to_float,
)

from conftest import complex_floats, gaussian, nonzero_gaussian


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3/4", GaussianRational(Fraction(3, 4))),
        ("0", GaussianRational(0)),
        ("-6/4", GaussianRational(Fraction(-3, 2))),
        ("(1, -1/2)", GaussianRational(1, Fraction(-1, 2))),
        ({"re": "2", "im": "5/3"}, GaussianRational(2, Fraction(5, 3))),
    ],
)
def test_parse_exact(text, expected):
    x = parse_scalar(text)
    assert isinstance(x, GaussianRational)
    assert x == expected


def test_parse_zero_is_normalised():
    x = parse_scalar("0")
    assert x.re == 0 and x.im == 0 and x.is_zero()


def test_parse_decimal_gives_float():
    x = parse_scalar("1.25")
    assert isinstance(x, ComplexFloat) and complex(x) == 1.25


def test_parse_zero_denominator_is_domain_error():
    with pytest.raises(DomainError):
        parse_scalar("1/0")


@pytest.mark.parametrize("bad", ["", "abc", "1/-2", "nan", "1//2", {"re": "1"}])
def test_parse_rejects_malformed(bad):
    with pytest.raises((ScalarParseError, DomainError)):
        parse_scalar(bad)


@pytest.mark.parametrize(
    "x, expected",
    [
        (GaussianRational(Fraction(1, 2)), (0.5, 0.0)),
        (ComplexFloat(1.25, -2.0), (1.25, -2.0)),
        (GaussianRational(Fraction(1, 3)), (0.3333333333333333, 0.0)),
    ],
)
def test_to_float(x, expected):
    y = to_float(x)
    assert (y.re, y.im) == expected


def test_to_float_third_matches_high_precision_oracle():
    with mpmath.workdps(50):
        oracle = float(mpmath.mpf(1) / 3)
    assert to_float(GaussianRational(Fraction(1, 3))).re == oracle


@pytest.mark.parametrize(
    "a, b, tol, expected",
    [
        (GaussianRational(Fraction(1, 2)), GaussianRational(Fraction(1, 2)), Tolerance(0, 0), True),
        (ComplexFloat(0.0), ComplexFloat(1e-12), Tolerance(1e-9, 0), True),
        (ComplexFloat(1.0), ComplexFloat(1.1), Tolerance(1e-9, 1e-9), False),
    ],
)
def test_approx_eq_examples(a, b, tol, expected):
    assert approx_eq(a, b, tol) is expected


def test_mixing_kinds_raises():
    with pytest.raises(ExactnessError):
        GaussianRational(1) + ComplexFloat(1.0)
    with pytest.raises(ExactnessError):
        ComplexFloat(1.0) * GaussianRational(2)


def test_exact_division_by_zero():
    with pytest.raises((ZeroDivisionError, DomainError)):
        GaussianRational(1) / GaussianRational(0)


@pytest.mark.parametrize(
    "w, root",
    [
        (GaussianRational(Fraction(9, 4)), GaussianRational(Fraction(3, 2))),
        (GaussianRational(-4), GaussianRational(0, 2)),
        (GaussianRational(0, 2), GaussianRational(1, 1)),
        (GaussianRational(2), None),
    ],
)
def test_exact_sqrt(w, root):
    r = exact_sqrt(w)
    if root is None:
        assert r is None
    else:
        assert r * r == w and (r == root or r == -root)


@given(gaussian, gaussian, gaussian)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == GaussianRational(0)


@given(nonzero_gaussian)
def test_inverses(a):
    assert a * a.reciprocal() == GaussianRational(1)
    assert a / a == GaussianRational(1)


@given(gaussian)
def test_render_parse_roundtrip(a):
    assert parse_scalar(render(a)) == a


@given(complex_floats)
def test_float_render_roundtrip_is_lossless(x):
    y = parse_scalar(render(x))
    assert (y.re, y.im) == (x.re, x.im)


@given(complex_floats, complex_floats)
def test_approx_eq_reflexive_symmetric(a, b):
    tol = Tolerance(1e-6, 1e-6)
    assert approx_eq(a, a, tol)
    assert approx_eq(a, b, tol) == approx_eq(b, a, tol)


def test_approx_eq_not_transitive():
    tol = Tolerance(1.0, 0.0)
    a, b, c = ComplexFloat(0.0), ComplexFloat(0.9), ComplexFloat(1.8)
    assert approx_eq(a, b, tol) and approx_eq(b, c, tol) and not approx_eq(a, c, tol)


def test_scalars_are_immutable():
    x = GaussianRational(1)
    with pytest.raises((AttributeError, TypeError)):
        x.re = 2
