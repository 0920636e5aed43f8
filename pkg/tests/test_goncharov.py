from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casas_alvero.goncharov import (
    LEVINSON_METHODS,
    HessenbergMatrix,
    NodeSequence,
    SupportPattern,
    binomial,
    bound_classical,
    bound_tight,
    compressed_det,
    goncharov_expand,
    goncharov_integral,
    goncharov_levinson,
    goncharov_recurrence,
    hessenberg_det,
    levinson_H,
    levinson_H_poly,
    levinson_matrix,
    multinomial,
    s1_nonvanishing,
)
from casas_alvero.numeric import ComplexFloat, DomainError, ExactnessError, GaussianRational
from casas_alvero.poly import Poly, derivative, eval_poly

from _oracles import laplace_det, leibniz_det, random_gaussian
from conftest import Q, gaussian, nonzero_gaussian

Z = GaussianRational(0)


def dense(rows):
    return HessenbergMatrix.from_dense([[GaussianRational(x) if not isinstance(x, GaussianRational) else x for x in r] for r in rows])


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[Q(7)]], Q(7)),
        ([[Q(2), Q(3)], [1, Q(5)]], Q(2 * 5 - 3)),
        ([[1, Q(1, 2), Q(1, 6)], [1, 1, Q(1, 2)], [0, 1, 1]], Q(1, 6)),
    ],
)
def test_hessenberg_small(rows, expected):
    assert hessenberg_det(dense(rows)) == expected


def test_hessenberg_rejects_non_unit_subdiagonal():
    with pytest.raises(DomainError):
        dense([[1, 2], [3, 4]])


@pytest.mark.parametrize("size", range(1, 7))
def test_hessenberg_matches_laplace(size):
    rng = np.random.default_rng(size)
    for _ in range(20):
        rows = [[random_gaussian(rng) if j >= i else (GaussianRational(1) if j == i - 1 else Z) for j in range(size)] for i in range(size)]
        m = HessenbergMatrix.from_dense(rows)
        assert hessenberg_det(m) == laplace_det(rows)
        if size <= 5:
            assert hessenberg_det(m) == leibniz_det(rows)


@pytest.mark.parametrize("method", LEVINSON_METHODS)
def test_levinson_values(method):
    a, b = Q(3), Q(5)
    assert levinson_H([a], method) == -a
    assert levinson_H([Q(2), b], method) == 2 * Q(2) * b - Q(2) * Q(2)
    assert levinson_H([Q(1)] * 3, method) == Q(-1)
    assert levinson_H([Z, Q(4), Q(-2)], method) == Z


@given(gaussian, gaussian)
def test_levinson_H2_closed_form(a1, a2):
    for method in LEVINSON_METHODS:
        assert levinson_H([a1, a2], method) == a1 * a2 * 2 - a1 * a1


@given(gaussian, st.integers(1, 5))
def test_levinson_constant_nodes(a, n):
    assert levinson_H([a] * n) == (-a) ** n


@pytest.mark.parametrize("kind", ["det_factorial", "det_binomial"])
def test_levinson_matrix_is_hessenberg(kind):
    m = levinson_matrix([Q(1), Q(2), Q(3)], kind)
    d = m.to_dense()
    assert all(d[i][i - 1] == 1 for i in range(1, 3))


a_sym, z0_sym, z1_sym = Q(3, 2), GaussianRational(1, 2), GaussianRational(-1, 1)

CONSTRUCTIONS = [
    goncharov_recurrence,
    goncharov_integral,
    lambda ns: goncharov_levinson(ns, "det_binomial"),
    lambda ns: goncharov_levinson(ns, "det_factorial"),
    lambda ns: goncharov_levinson(ns, "integral"),
]


@pytest.mark.parametrize("build", CONSTRUCTIONS)
def test_goncharov_examples(build):
    assert build(NodeSequence([a_sym])) == Poly([-a_sym, 1])
    expected = Poly([2 * z0_sym * z1_sym - z0_sym * z0_sym, -2 * z1_sym, 1])
    assert build(NodeSequence([z0_sym, z1_sym])) == expected
    assert build(NodeSequence([Z] * 5)) == Poly.monomial(5, Q(1))
    b = GaussianRational(2, -1)
    assert build(NodeSequence([b] * 4)) == Poly.from_roots([b] * 4)


def test_expand_examples():
    assert goncharov_expand(NodeSequence([Z])) == Poly([0, 1])
    assert goncharov_expand(NodeSequence([Z, Q(1)])) == Poly([0, -2, 1])
    with pytest.raises(DomainError):
        goncharov_expand(NodeSequence([Q(1), Q(2)]))


@pytest.mark.parametrize("n", range(2, 9))
def test_three_way_agreement_and_interpolation(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(8):
        nodes = [random_gaussian(rng) for _ in range(n)]
        ns = NodeSequence(nodes)
        g = goncharov_recurrence(ns)
        assert goncharov_integral(ns) == g
        for method in LEVINSON_METHODS:
            assert goncharov_levinson(ns, method) == g
        assert g.degree == n and g.lead == 1
        for j, zj in enumerate(nodes):
            assert eval_poly(derivative(g, j), zj).is_zero()
        zero_start = NodeSequence([Z] + nodes[1:])
        assert goncharov_expand(zero_start) == goncharov_recurrence(zero_start)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_shift_homogeneity(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        ns = NodeSequence([random_gaussian(rng) for _ in range(n)])
        alpha = random_gaussian(rng)
        if alpha.is_zero():
            alpha = Q(1)
        beta = random_gaussian(rng)
        z = random_gaussian(rng)
        lhs = eval_poly(goncharov_recurrence(ns.mapped(alpha, beta)), alpha * z + beta)
        assert lhs == alpha**n * eval_poly(goncharov_recurrence(ns), z)


def test_levinson_polynomial_of_tail():
    tail = [Q(1), Q(-2), GaussianRational(0, 1)]
    hp = levinson_H_poly(tail)
    g = goncharov_recurrence([Z] + tail)
    for w in (Q(2), Q(-1), GaussianRational(1, 1)):
        assert eval_poly(hp, w) == levinson_H([w] + tail)
    assert hp == -g


def test_compressed_example_small():
    # nodes (0, 1): value (C(2,1) - 1) * 1 at z = z_1 = 1
    assert compressed_det([Z, Q(1)], SupportPattern((1,), 2), Q(1)) == Q(1)


def test_compressed_example_degree3():
    # nodes (0, 1, 0), z = 2: true value is -1 = (-1)^s z^(-i1) G_3(2)
    nodes = [Z, Q(1), Z]
    g = eval_poly(goncharov_recurrence(nodes), Q(2))
    assert g == Q(2)
    val = compressed_det(nodes, SupportPattern((1,), 3), Q(2))
    assert val == Q(-1)
    assert val == -g / Q(2)


@pytest.mark.parametrize("n", range(2, 9))
def test_compressed_matches_full_determinant(n):
    rng = np.random.default_rng(7 * n)
    for _ in range(12):
        s = int(rng.integers(1, n))
        idx = tuple(sorted(int(i) for i in rng.choice(np.arange(1, n), size=s, replace=False)))
        nodes = [Z] * n
        for i in idx:
            v = random_gaussian(rng)
            nodes[i] = v if not v.is_zero() else Q(1)
        z = random_gaussian(rng)
        if z.is_zero():
            z = Q(3)
        val = compressed_det(nodes, SupportPattern(idx, n), z)
        full = hessenberg_det(levinson_matrix([z] + nodes[1:], "det_binomial"))
        g = eval_poly(goncharov_recurrence(nodes), z)
        assert full == (-1) ** (n + 1) * g
        assert val * z ** idx[0] == (-1) ** len(idx) * g
        assert val * z ** idx[0] == (-1) ** (len(idx) + n + 1) * full


def test_compressed_rejects_off_pattern_nodes():
    with pytest.raises(DomainError):
        compressed_det([Z, Q(1), Q(2)], SupportPattern((1,), 3), Q(2))


@pytest.mark.parametrize("n, i1, z, expected", [(2, 1, 1, 1), (5, 2, 1, 9), (5, 2, 3, 243)])
def test_s1_examples(n, i1, z, expected):
    assert s1_nonvanishing(n, i1, Q(z)) == Q(expected)


@pytest.mark.parametrize("n", range(2, 13))
def test_s1_never_zero(n):
    for i1 in range(1, n):
        v = s1_nonvanishing(n, i1, Q(1))
        assert not v.is_zero() and v == Q(binomial(n, i1) - 1)


def test_bounds_examples():
    nodes = [Q(0), Q(1)]
    assert bound_classical(nodes, Q(2)) == pytest.approx(9.0, rel=1e-15)
    z0 = GaussianRational(1, 1)
    z = Q(4)
    g1 = abs(complex(eval_poly(goncharov_recurrence([z0]), z)))
    assert bound_tight([z0], z) == pytest.approx(g1, rel=1e-15)
    assert bound_classical([z0], z) == pytest.approx(g1, rel=1e-15)
    b = Q(2)
    gb = abs(complex(eval_poly(goncharov_recurrence([b] * 4), z)))
    assert bound_tight([b] * 4, z) >= gb * (1 - 1e-14)


@pytest.mark.parametrize("n", range(1, 9))
def test_bound_ordering_random(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        pts = np.sqrt(rng.random(n + 1)) * np.exp(2j * np.pi * rng.random(n + 1))
        nodes = [ComplexFloat(complex(p)) for p in pts[:-1]]
        z = ComplexFloat(complex(pts[-1]))
        g = abs(complex(eval_poly(goncharov_recurrence(nodes), z)))
        tight, classical = bound_tight(nodes, z), bound_classical(nodes, z)
        assert g <= tight * (1 + 1e-12) + 1e-15
        assert tight <= classical * (1 + 1e-12)


def test_multinomial_and_binomial():
    assert binomial(6, 2) == 15 and binomial(3, 5) == 0
    assert multinomial([1, 2, 3]) == math.factorial(6) // (1 * 2 * 6)


def test_node_sequence_rejects_mixed_kinds():
    with pytest.raises(ExactnessError):
        NodeSequence([Q(1), ComplexFloat(1.0)])


@given(st.lists(gaussian, min_size=1, max_size=5))
def test_recurrence_interpolates(nodes):
    g = goncharov_recurrence(nodes)
    assert all(eval_poly(derivative(g, j), zj).is_zero() for j, zj in enumerate(nodes))
