"""Dense univariate polynomials over :mod:`casas_alvero.numeric` scalars.

Coefficients are stored in ascending powers (index = exponent).  The
descending ``a_0 z^n + ... + a_n`` form only appears at I/O boundaries
(:meth:`Poly.from_descending`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from gmpy2 import mpq

from . import kernels
from .numeric import (
    ComplexFloat,
    DomainError,
    ExactnessError,
    GaussianRational,
    NumericError,
    Scalar,
    Tolerance,
    approx_eq,
    as_scalar,
    is_exact,
    one_like,
    to_float,
    zero_like,
)

CLUSTER_TOL = Tolerance(absolute=1e-7, relative=0.0)
RESIDUAL_FACTOR = 1e-10


class Poly:
    """Immutable dense polynomial; the empty coefficient tuple is the zero polynomial."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_scalar(c) for c in coeffs]
        kinds = {type(c) for c in cs}
        if len(kinds) > 1:
            raise ExactnessError("polynomial mixes exact and floating coefficients")
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def _raw(cls, cs: list) -> Poly:
        while cs and cs[-1].is_zero():
            cs.pop()
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(cs))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls) -> Poly:
        return cls._raw([])

    @classmethod
    def constant(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        c = as_scalar(c)
        return cls._raw([zero_like(c)] * k + [c])

    @classmethod
    def from_descending(cls, coeffs: Sequence) -> Poly:
        return cls(list(coeffs)[::-1])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> Poly:
        roots = [as_scalar(r) for r in roots]
        lead = as_scalar(lead)
        if roots and not is_exact(roots[0]):
            lead = to_float(lead)
        p = cls._raw([lead])
        for r in roots:
            p = p * cls._raw([-r, one_like(r)])
        return p

    # -- properties -----------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Scalar:
        if not self.coeffs:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def descending(self) -> tuple:
        return self.coeffs[::-1]

    def monic(self) -> Poly:
        inv = self.lead.reciprocal()
        return Poly._raw([c * inv for c in self.coeffs])

    def to_float(self) -> Poly:
        return Poly._raw([to_float(c) for c in self.coeffs])

    def to_array(self) -> np.ndarray:
        """Ascending complex128 coefficient array (explicitly lossy for exact input)."""
        return np.array([complex(to_float(c)) for c in self.coeffs], dtype=np.complex128)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other) -> Poly:
        if isinstance(other, Poly):
            return other
        return Poly._raw([as_scalar(other)])

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            s = as_scalar(other)
            return Poly._raw([c * s for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero()
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                t = x * y
                k = i + j
                out[k] = t if out[k] is None else out[k] + t
        z = zero_like(a[0])
        return Poly._raw([z if c is None else c for c in out])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if not self.coeffs:
            return Poly.zero() if k else Poly([1])
        result = Poly._raw([one_like(self.coeffs[0])])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: Poly):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dg = other.degree
        if len(rem) - 1 < dg:
            return Poly.zero(), self
        inv = other.lead.reciprocal()
        quot = [None] * (len(rem) - dg)
        for k in range(len(rem) - 1 - dg, -1, -1):
            q = rem[k + dg] * inv
            quot[k] = q
            if q.is_zero():
                continue
            for j, c in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - q * c
        return Poly._raw(quot), Poly._raw(rem[:dg])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, z):
        return eval_poly(self, z)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"


# -- evaluation and calculus ----------------------------------------------

def eval_poly(f: Poly, z) -> Scalar:
    """Horner evaluation, highest coefficient first (fixed order for float reproducibility)."""
    z = as_scalar(z)
    if f.is_zero():
        return zero_like(z)
    acc = f.coeffs[-1]
    for c in reversed(f.coeffs[:-1]):
        acc = acc * z + c
    if is_exact(acc) != is_exact(z):
        raise ExactnessError("exact and floating inputs cannot be mixed")
    return acc


def derivative(f: Poly, m: int = 1) -> Poly:
    if m < 0:
        raise DomainError("derivative order must be non-negative")
    cs = f.coeffs
    if m == 0:
        return f
    if m > f.degree:
        return Poly.zero()
    out = []
    for i in range(m, len(cs)):
        out.append(cs[i] * math.perm(i, m))
    return Poly._raw(out)


def antiderivative_from(f: Poly, a) -> Poly:
    """F with F' = f and F(a) = 0."""
    a = as_scalar(a)
    if f.is_zero():
        return Poly.zero()
    z = zero_like(f.coeffs[0])
    F = Poly._raw([z] + [c / (i + 1) for i, c in enumerate(f.coeffs)])
    return F - eval_poly(F, a)


def affine_compose(f: Poly, alpha, beta) -> Poly:
    """Expanded f(alpha*z + beta)."""
    alpha, beta = as_scalar(alpha), as_scalar(beta)
    if alpha.is_zero():
        raise DomainError("affine substitution needs alpha != 0")
    if f.is_zero():
        return f
    lin = Poly._raw([beta, alpha])
    acc = Poly._raw([f.coeffs[-1]])
    for c in reversed(f.coeffs[:-1]):
        acc = acc * lin + c
    return acc


# -- exact algebra --------------------------------------------------------

def _require_exact(*polys: Poly):
    for p in polys:
        if not p.is_exact:
            raise ExactnessError("operation requires exact (Gaussian-rational) coefficients")


def exact_gcd(f: Poly, g: Poly) -> Poly:
    """Monic GCD over Q(i) by the Euclidean algorithm."""
    _require_exact(f, g)
    if f.is_zero() and g.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    a, b = f, g
    while not b.is_zero():
        a, b = b, (a % b)
        if not b.is_zero():
            b = b.monic()
    return a.monic()


def exact_divide(f: Poly, g: Poly) -> Poly:
    q, r = divmod(f, g)
    if not r.is_zero():
        raise DomainError("division leaves a nonzero remainder")
    return q


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic factors ``a_i`` with ``f = lead * prod a_i**i``.

    Only factors of positive degree are returned.
    """
    _require_exact(f)
    if f.degree < 1:
        return []
    f = f.monic()
    df = derivative(f)
    a0 = exact_gcd(f, df)
    b = exact_divide(f, a0)
    c = exact_divide(df, a0)
    d = c - derivative(b)
    out = []
    i = 1
    while b.degree > 0:
        a = exact_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = exact_divide(b, a)
        c = exact_divide(d, a)
        d = c - derivative(b)
        i += 1
    return out


def multiplicity_structure(f: Poly) -> list[int]:
    """Sorted multiplicities of the distinct roots (exact input)."""
    mults = []
    for a, i in squarefree_decomposition(f):
        mults.extend([i] * a.degree)
    return sorted(mults)


def power_sums(f: Poly, kmax: int) -> list[Scalar]:
    """``[p_1, ..., p_kmax]``: power sums of the roots (with multiplicity) via Newton's identities."""
    n = f.degree
    if n < 0:
        raise DomainError("zero polynomial has no roots")
    inv = f.lead.reciprocal()
    # f/lead = z^n + e[1] z^{n-1} + ... + e[n]
    e = [None] + [f.coeffs[n - j] * inv for j in range(1, n + 1)]
    zero = zero_like(f.lead)
    p = [zero]
    for k in range(1, kmax + 1):
        acc = zero
        for j in range(1, min(k - 1, n) + 1):
            acc = acc + e[j] * p[k - j]
        if k <= n:
            acc = acc + e[k] * k
        p.append(-acc)
    return p[1:]


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Interpolating polynomial through distinct nodes (Newton divided differences)."""
    xs = [as_scalar(x) for x in xs]
    coef = [as_scalar(y) for y in ys]
    if len(xs) != len(coef):
        raise DomainError("node and value counts differ")
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            den = xs[i] - xs[i - j]
            if den.is_zero():
                raise DomainError("interpolation nodes must be distinct")
            coef[i] = (coef[i] - coef[i - 1]) / den
    p = Poly._raw([coef[-1]]) if n else Poly.zero()
    for i in range(n - 2, -1, -1):
        p = p * Poly._raw([-xs[i], one_like(xs[i])]) + coef[i]
    return p


# -- root sets ------------------------------------------------------------

@dataclass(frozen=True)
class DerivativeRootSet:
    """Roots (repeats allowed) of the ``order``-th derivative of some polynomial."""

    order: int
    roots: tuple

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


@dataclass(frozen=True)
class RootMultiset:
    """Distinct roots with multiplicities; ``degree`` is the multiplicity total."""

    entries: tuple  # of (root, multiplicity)

    def __post_init__(self):
        for _, m in self.entries:
            if not isinstance(m, int) or m < 1:
                raise DomainError("multiplicities must be positive integers")

    @classmethod
    def from_pairs(cls, pairs) -> RootMultiset:
        return cls(tuple((as_scalar(r), int(m)) for r, m in pairs))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def r(self) -> int:
        """Largest multiplicity."""
        return max((m for _, m in self.entries), default=0)

    def distinct(self) -> list:
        return [x for x, _ in self.entries]

    def multiplicities(self) -> list[int]:
        return [m for _, m in self.entries]

    def expanded(self) -> list:
        return [x for x, m in self.entries for _ in range(m)]

    def poly(self) -> Poly:
        return Poly.from_roots(self.expanded())

    @property
    def is_exact(self) -> bool:
        return all(is_exact(x) for x, _ in self.entries)


def _residual_ok(c: np.ndarray, z: complex, scale: float) -> bool:
    val = abs(kernels.horner(c, z))
    bound = float(np.polyval(np.abs(c[::-1]), abs(z)))
    return val <= max(RESIDUAL_FACTOR * scale, 64 * len(c) * 2.2e-16 * bound)


def _newton_polish(c: np.ndarray, z: complex, steps: int = 3) -> complex:
    dc = kernels.derivative(c, 1)
    best, best_val = z, abs(kernels.horner(c, z))
    for _ in range(steps):
        d = kernels.horner(dc, z)
        if d == 0:
            break
        z = z - kernels.horner(c, z) / d
        v = abs(kernels.horner(c, z))
        if v < best_val:
            best, best_val = z, v
        else:
            break
    return best


def _exact_horner(cq: list, z: complex) -> complex:
    # float coefficients and z taken as exact rationals; one rounding at the end
    zr, zi = mpq(z.real), mpq(z.imag)
    ar, ai = mpq(0), mpq(0)
    for cr, ci in reversed(cq):
        ar, ai = ar * zr - ai * zi + cr, ar * zi + ai * zr + ci
    return complex(float(ar), float(ai))


def _exact_newton(c: np.ndarray, z: complex, steps: int = 3) -> complex:
    """Newton with an exactly evaluated residual.

    Removes the evaluation-rounding floor that limits double-precision
    iterations on ill-conditioned coefficient vectors.
    """
    cq = [(mpq(float(x.real)), mpq(float(x.imag))) for x in c]
    dc = kernels.derivative(c, 1)
    best, best_val = z, abs(_exact_horner(cq, z))
    for _ in range(steps):
        d = kernels.horner(dc, best)
        if d == 0 or best_val == 0:
            break
        z = best - _exact_horner(cq, best) / d
        v = abs(_exact_horner(cq, z))
        if v >= best_val:
            break
        best, best_val = z, v
    return best


def _merge_clusters(c: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Replace Weierstrass-overlapping clusters by refined cluster centres.

    A multiple root comes out of Aberth as ``k`` points spread like
    eps**(1/k); their mean is accurate to O(eps), and Newton on the
    (k-1)-th derivative, where the root is simple, polishes it further.
    """
    n = len(r)
    if n < 2:
        return r
    lead = c[-1]
    radius = np.empty(n)
    for i in range(n):
        d = r[i] - np.delete(r, i)
        prod = lead * np.prod(d)
        val = kernels.horner(c, r[i])
        radius[i] = np.inf if prod == 0 else n * abs(val / prod)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(r[i] - r[j]) <= radius[i] + radius[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = r.copy()
    for members in groups.values():
        k = len(members)
        if k < 2:
            out[members[0]] = _exact_newton(c, r[members[0]])
            continue
        centre = complex(np.mean(r[members]))
        centre = _newton_polish(kernels.derivative(c, k - 1), centre)
        worst_raw = max(abs(kernels.horner(c, r[i])) for i in members)
        if abs(kernels.horner(c, centre)) <= worst_raw:
            out[members] = centre
        else:
            # close but genuinely distinct roots
            for i in members:
                out[i] = _exact_newton(c, r[i], steps=8)
    return out


def roots_numeric(f: Poly, order: int = 0) -> DerivativeRootSet:
    """All ``deg f`` roots as :class:`ComplexFloat` values (explicit float conversion).

    Aberth-Ehrlich iteration from the kernels module, falling back to
    companion-matrix eigenvalues when it stalls; clustered multiple roots are
    replaced by their refined centre.  ``order`` only labels the result.
    """
    if f.degree < 1:
        raise DomainError("root finding needs degree >= 1")
    c = f.to_array()
    cmax = float(np.max(np.abs(c)))
    if abs(c[-1]) <= 1e-14 * cmax:
        raise DomainError("leading coefficient is numerically negligible")
    r, _ = kernels.roots(c)
    r = np.asarray(r, dtype=np.complex128)
    scale = 1.0 + cmax
    bad = [z for z in r if not _residual_ok(c, z, scale)]
    if bad:
        r = np.array([_newton_polish(c, z, steps=8) for z in r])
        bad = [z for z in r if not _residual_ok(c, z, scale)]
        if bad:
            worst = max(abs(kernels.horner(c, z)) for z in bad)
            raise NumericError("root finder did not converge", worst)
    r = _merge_clusters(c, r)
    return DerivativeRootSet(order, tuple(ComplexFloat(z.real, z.imag) for z in r))


def cluster_roots(rs, tol: Tolerance = CLUSTER_TOL) -> RootMultiset:
    """Single-linkage clustering; representative is the cluster mean.

    Exact roots only cluster with identical exact roots; a cluster mixing
    kinds is represented by its floating mean.
    """
    roots = [as_scalar(x) for x in rs]
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and approx_eq(roots[i], roots[j], tol):
                parent[find(i)] = find(j)
    order: list[int] = []
    groups: dict[int, list[int]] = {}
    for i in range(n):
        g = find(i)
        if g not in groups:
            order.append(g)
            groups[g] = []
        groups[g].append(i)
    entries = []
    for g in order:
        members = [roots[i] for i in groups[g]]
        if all(is_exact(x) for x in members) and len(set(members)) == 1:
            rep = members[0]
        else:
            mean = sum(complex(to_float(x)) for x in members) / len(members)
            rep = ComplexFloat(mean.real, mean.imag)
        entries.append((rep, len(members)))
    return RootMultiset(tuple(entries))


# -- exact root extraction --------------------------------------------------

def _rationalize(x: float, bounds=(10, 100, 10**3, 10**4, 10**6, 10**9)):
    seen = []
    for b in bounds:
        q = Fraction(x).limit_denominator(b)
        if q not in seen:
            seen.append(q)
    return seen


def _exact_candidates(z: complex):
    for qr in _rationalize(z.real):
        for qi in _rationalize(z.imag):
            yield GaussianRational(qr, qi)


def split_roots(f: Poly) -> list[Scalar]:
    """Roots with multiplicity; exact wherever a Gaussian-rational root verifies.

    Floating input gives :func:`roots_numeric` output.  Exact input is split
    into squarefree factors; each numeric root of a factor is rationalised
    (continued fractions) and kept exact only if it annihilates the factor
    exactly, otherwise it is reported as an explicit :class:`ComplexFloat`.
    """
    if f.degree < 1:
        return []
    if not f.is_exact:
        return list(roots_numeric(f).roots)
    out: list[Scalar] = []
    for a, mult in squarefree_decomposition(f):
        rest = a
        found: list[Scalar] = []
        if rest.degree >= 1:
            for z in roots_numeric(a).roots:
                if rest.degree < 1:
                    break
                zc = complex(z)
                for q in _exact_candidates(zc):
                    if eval_poly(rest, q).is_zero():
                        found.append(q)
                        rest = exact_divide(rest, Poly([-q, 1]))
                        break
        leftovers = list(roots_numeric(rest).roots) if rest.degree >= 1 else []
        for x in found + leftovers:
            out.extend([x] * mult)
    return out


def root_multiset(f: Poly, tol: Tolerance = CLUSTER_TOL) -> RootMultiset:
    """Distinct roots with multiplicities (exact multiplicities for exact input)."""
    if f.is_exact:
        entries = []
        for a, mult in squarefree_decomposition(f):
            for x in split_roots(a):
                entries.append((x, mult))
        return RootMultiset(tuple(entries))
    return cluster_roots(roots_numeric(f).roots, tol)


def as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly(x)
