"""Checks for second-moment root identities, Newton-like sums, the log-derivative
formula, Laguerre's inequality and the Schoenberg-type gap.

Every check returns an :class:`IdentityReport` holding both sides, the
residual and a scale (sum of magnitudes of the quantities entering either
side).  Exact-coefficient polynomials are handled root-free wherever
possible: all the identities are statements about power sums, which Newton's
identities deliver exactly from the coefficients (of ``f``, of its
derivatives, of its squarefree part and of the log-derivative numerator
``f'/gcd(f, f')``).  Floating inputs go through the numeric root finder.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .goncharov import NodeSequence, _levinson, binomial, goncharov_recurrence
from .numeric import (
    DEFAULT_TOL,
    ComplexFloat,
    DomainError,
    GaussianRational,
    InvariantViolation,
    Scalar,
    Tolerance,
    approx_eq,
    as_scalar,
    exact_sqrt,
    is_exact,
    one_like,
    to_float,
    zero_like,
)
from .poly import (
    Poly,
    RootMultiset,
    derivative,
    eval_poly,
    exact_divide,
    exact_gcd,
    power_sums,
    root_multiset,
    roots_numeric,
    split_roots,
)

IDENTITY_IDS = (
    "EQ19", "EQ20", "EQ21", "EQ22", "EQ24", "EQ25", "EQ26",
    "EQ27", "EQ28", "EQ30", "EQ31", "EQ33", "EQ34",
)
MOMENT_KINDS = ("EQ22", "EQ24", "EQ25", "EQ26", "EQ27", "EQ28", "EQ30", "EQ34")


@dataclass
class IdentityReport:
    identity_id: str
    lhs: Scalar
    rhs: Scalar
    residual: float
    scale: float
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CentroidData:
    centroid: Scalar
    subcentroid_roots: tuple
    offset_sq: Scalar  # (z_{n-1} - z_{n-2})^2, the same for both roots
    mean_residual: float


@dataclass(frozen=True)
class RectilinearityResult:
    collinear_through_origin: bool
    angle: float
    sign_vector: tuple
    max_distance: float


@dataclass(frozen=True)
class SchoenbergReport:
    gap: float
    degree: int
    collinear_through_origin: bool
    angle: float
    critical_points: tuple


# -- small helpers ----------------------------------------------------------

def _report(identity_id: str, lhs, rhs, scale: float, tol: Tolerance, **details) -> IdentityReport:
    lhs, rhs = as_scalar(lhs), as_scalar(rhs)
    if is_exact(lhs) and is_exact(rhs):
        residual = abs(lhs - rhs)
        passed = lhs == rhs
    else:
        residual = abs(complex(to_float(lhs)) - complex(to_float(rhs)))
        passed = residual <= tol.absolute + tol.relative * scale
    details.setdefault("path", "exact" if is_exact(lhs) and is_exact(rhs) else "float")
    return IdentityReport(identity_id, lhs, rhs, float(residual), float(scale), bool(passed), details)


def _ratio(num: int, den: int, exact: bool):
    return Fraction(num, den) if exact else num / den


def _harmonize(values):
    vals = [as_scalar(v) for v in values]
    if all(is_exact(v) for v in vals):
        return vals
    return [to_float(v) for v in vals]


def _ssum(values, ref) -> Scalar:
    acc = zero_like(ref)
    for v in values:
        acc = acc + v
    return acc


def _mag(*xs) -> float:
    return float(sum(abs(x) for x in xs))


def _abs_eval(p: Poly, z) -> float:
    # sum |c_k| |z|^k: the magnitude Horner evaluation rounds against
    return float(np.polyval(np.abs(p.to_float().to_array()[::-1]), abs(complex(to_float(z)))))


def _require_degree(f: Poly, lo: int) -> int:
    n = f.degree
    if n < lo:
        raise DomainError(f"need degree >= {lo}, got {n}")
    return n


def _centroid_value(f: Poly) -> Scalar:
    n = f.degree
    return -f.coeffs[n - 1] / (f.lead * n)


def _quadratic_roots(q: Poly) -> tuple:
    a, b, c = q.coeffs[2], q.coeffs[1], q.coeffs[0]
    disc = b * b - a * c * 4
    if q.is_exact:
        root = exact_sqrt(disc)
        if root is not None:
            return ((-b + root) / (a * 2), (-b - root) / (a * 2))
        a, b, disc = to_float(a), to_float(b), to_float(disc)
    sq = cmath.sqrt(complex(disc))
    ca, cb = complex(a), complex(b)
    return (ComplexFloat(complex((-cb + sq) / (2 * ca))), ComplexFloat(complex((-cb - sq) / (2 * ca))))


def _offset_sq(f: Poly) -> Scalar:
    """``(z_{n-1} - z_{n-2})^2`` from the coefficients of ``f^{(n-2)}``: disc / (4 a^2)."""
    q = derivative(f, f.degree - 2)
    a, b, c = q.coeffs[2], q.coeffs[1], q.coeffs[0]
    return (b * b - a * c * 4) / (a * a * 4)


def _square_sums(points, ref) -> tuple[Scalar, float]:
    """``(sum p^2, sum |p|^2)``."""
    pts = list(points)
    return _ssum((p * p for p in pts), ref), float(sum(abs(p) ** 2 for p in pts))


class _Moments:
    """Second-moment data of a polynomial, exact (power sums) or numeric (roots)."""

    def __init__(self, f: Poly):
        self.f = f
        self.n = f.degree
        self.exact = f.is_exact
        self.c = _centroid_value(f)
        self._cache: dict = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def deriv_sums(self, m: int) -> tuple[Scalar, Scalar, float]:
        """``(sum xi, sum xi^2, sum |xi|^2)`` over the roots of ``f^(m)``; ``m = 0`` gives the roots of f."""

        def compute():
            g = derivative(self.f, m)
            zero = zero_like(self.c)
            if g.degree < 1:
                return zero, zero, 0.0
            if self.exact:
                p1, p2 = power_sums(g, 2)
                return p1, p2, abs(p2)
            pts = roots_numeric(g, m).roots
            s2, a2 = _square_sums(pts, zero)
            return _ssum(pts, zero), s2, a2

        return self._memo(("d", m), compute)

    def deriv_roots(self, m: int) -> list:
        def compute():
            g = derivative(self.f, m)
            if g.degree < 1:
                return []
            return list(split_roots(g)) if self.exact else list(roots_numeric(g, m).roots)

        return self._memo(("r", m), compute)

    def multiset(self) -> RootMultiset:
        return self._memo("ms", lambda: root_multiset(self.f))

    def distinct_count(self) -> int:
        if self.exact:
            return self.squarefree_part().degree
        return self.multiset().k

    def max_multiplicity(self) -> int:
        return self.multiset().r

    def squarefree_part(self) -> Poly:
        def compute():
            g = exact_gcd(self.f, derivative(self.f))
            return exact_divide(self.f, g)

        return self._memo("sqf", compute)

    def log_numerator(self) -> Poly:
        def compute():
            g = exact_gcd(self.f, derivative(self.f))
            return exact_divide(derivative(self.f), g)

        return self._memo("logn", compute)

    def distinct_sums(self) -> tuple[Scalar, Scalar, float]:
        """``(sum lambda_j, sum lambda_j^2, sum |lambda_j|^2)`` over distinct roots."""

        def compute():
            zero = zero_like(self.c)
            if self.exact:
                p1, p2 = power_sums(self.squarefree_part(), 2)
                return p1, p2, abs(p2)
            pts = self.multiset().distinct()
            s2, a2 = _square_sums(pts, zero)
            return _ssum(pts, zero), s2, a2

        return self._memo("ds", compute)

    def log_sums(self) -> tuple[Scalar, Scalar, float]:
        """Same sums over the roots of the logarithmic derivative."""

        def compute():
            zero = zero_like(self.c)
            if self.exact:
                num = self.log_numerator()
                if num.degree < 1:
                    return zero, zero, 0.0
                p1, p2 = power_sums(num, 2)
                return p1, p2, abs(p2)
            pts = log_deriv_roots(self.multiset())
            s2, a2 = _square_sums(pts, zero)
            return _ssum(pts, zero), s2, a2

        return self._memo("ls", compute)

    def offset_sq(self) -> Scalar:
        return self._memo("x", lambda: _offset_sq(self.f))

    def subcentroid(self) -> tuple:
        return self._memo("sub", lambda: _quadratic_roots(derivative(self.f, self.n - 2)))


# -- centroid and Sz.-Nagy ----------------------------------------------------

def centroid(f: Poly) -> CentroidData:
    """Centroid ``z_{n-1}`` and the two roots of ``f^{(n-2)}``.

    Also checks that every derivative's roots have the centroid as mean.
    """
    n = _require_degree(f, 2)
    mo = _Moments(f)
    c = mo.c
    worst = 0.0
    for m in range(0, n):
        s1, _, _ = mo.deriv_sums(m)
        mean = s1 / (n - m)
        if mo.exact:
            if mean != c:
                raise InvariantViolation(f"mean of the roots of f^({m}) differs from the centroid")
        else:
            worst = max(worst, abs(mean - c))
    if not mo.exact:
        scale = 1.0 + max(abs(z) for z in mo.deriv_roots(0))
        if worst > 1e-8 * scale:
            raise InvariantViolation(f"root means drift from the centroid by {worst:.3g}")
    return CentroidData(c, mo.subcentroid(), mo.offset_sq(), worst)


def _check_subcentroid_symmetry(mo: _Moments) -> Scalar:
    z1, z2 = mo.subcentroid()
    c = mo.c
    if not (is_exact(z1) and is_exact(z2)):
        c, z1, z2 = to_float(c), to_float(z1), to_float(z2)
    a, b = (c - z1) ** 2, (c - z2) ** 2
    if is_exact(a) and is_exact(b):
        if a != b:
            raise InvariantViolation("subcentroid roots are not symmetric about the centroid")
    elif not approx_eq(to_float(a), to_float(b), Tolerance(1e-9, 1e-9)):
        raise InvariantViolation("subcentroid roots are not symmetric about the centroid")
    return mo.offset_sq() if mo.exact else to_float(a)


def sz_nagy_check(f: Poly, m: int, z, choice: int = 0, tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """Three second-moment expressions for ``(z_{n-1} - z_{n-2})^2``.

    ``left``: the squared offset itself; ``middle``: from the roots of f about
    ``z``; ``right``: from the roots of ``f^(m)`` about ``z``.  The reported
    residual is the largest pairwise difference.
    """
    n = _require_degree(f, 2)
    if not 1 <= m <= n - 2:
        raise DomainError(f"m must lie in 1..{n - 2}")
    if choice not in (0, 1):
        raise DomainError("choice selects one of the two roots of f^(n-2): 0 or 1")
    mo = _Moments(f)
    z = as_scalar(z)
    if mo.exact != is_exact(z):
        if mo.exact:
            f = f.to_float()
            mo = _Moments(f)
        z = to_float(z)
    c = mo.c
    zn2 = mo.subcentroid()[choice]
    x_sym = _check_subcentroid_symmetry(mo)
    left = mo.offset_sq() if mo.exact else to_float((c - zn2) ** 2)

    def about(order: int):
        # sum (xi - z)^2 = sum xi^2 - 2 z sum xi + (n - order) z^2
        s1, s2, a2 = mo.deriv_sums(order)
        k = n - order
        val = s2 - z * s1 * 2 + z * z * k
        return val, a2 + 2 * abs(z) * abs(s1) + k * abs(z) ** 2

    v0, sc0 = about(0)
    vm, scm = about(m)
    cz2 = (c - z) ** 2
    middle = (v0 - cz2 * n) / (n * (n - 1))
    right = (vm - cz2 * (n - m)) / ((n - m) * (n - m - 1))
    scale = _mag(left) + (sc0 + n * abs(cz2)) / (n * (n - 1)) + (scm + (n - m) * abs(cz2)) / ((n - m) * (n - m - 1))
    pairs = [(left, middle), (left, right), (middle, right)]
    if all(is_exact(a) and is_exact(b) for a, b in pairs):
        worst = max(pairs, key=lambda p: abs(p[0] - p[1]))
    else:
        worst = max(pairs, key=lambda p: abs(complex(to_float(p[0])) - complex(to_float(p[1]))))
    return _report(
        "EQ21", worst[0], worst[1], scale, tol,
        left=left, middle=middle, right=right, m=m, z=z, subcentroid=zn2, symmetric_offset=x_sym,
    )


# -- log-derivative roots and rectilinearity -----------------------------------

def log_deriv_numerator(roots: RootMultiset) -> Poly:
    """``sum_j r_j prod_{i != j} (z - lambda_i)`` over the distinct roots."""
    if roots.k == 0:
        raise DomainError("log-derivative needs at least one root")
    lam = _harmonize(roots.distinct())
    one = one_like(lam[0])
    total = Poly.zero()
    for j, r in enumerate(roots.multiplicities()):
        term = Poly([one * r])
        for i, x in enumerate(lam):
            if i != j:
                term = term * Poly([-x, one])
        total = total + term
    return total


def log_deriv_roots(roots: RootMultiset) -> list:
    """The ``k - 1`` roots of the logarithmic derivative of ``prod (z - lambda_j)^{r_j}``."""
    num = log_deriv_numerator(roots)
    if num.degree < 1:
        return []
    if num.is_exact:
        return split_roots(num)
    return list(roots_numeric(num).roots)


def rectilinearity(points: Sequence, tol: Tolerance = DEFAULT_TOL) -> RectilinearityResult:
    """Do the points lie on one line through the origin?

    The line angle is the least-squares choice ``phi = arg(sum p^2) / 2``
    (mod pi).  A point passes when its distance to the line is at most
    ``tol.absolute + tol.relative * |p|``; all-exact input is decided exactly.
    """
    pts = [as_scalar(p) for p in points]
    if not pts:
        raise DomainError("rectilinearity needs at least one point")
    cpts = [complex(to_float(p)) for p in pts]
    acc = sum(p * p for p in cpts)
    phi = (cmath.phase(acc) / 2.0) % math.pi if acc != 0 else 0.0
    rot = cmath.exp(-1j * phi)
    dists = [abs((p * rot).imag) for p in cpts]
    signs = tuple(-1 if (p * rot).real < 0 else 1 for p in cpts)
    if all(is_exact(p) for p in pts):
        nz = [p for p in pts if not p.is_zero()]
        ok = all((p * nz[0].conjugate()).is_real() for p in nz) if nz else True
        if ok and nz:
            # an exact point fixes the line; orient it so phi is in [0, pi)
            ref = complex(to_float(nz[0]))
            phi = cmath.phase(ref) % math.pi
            flip = 1 if (ref * cmath.exp(-1j * phi)).real > 0 else -1
            signs = tuple(-1 if flip * (p * nz[0].conjugate()).re < 0 else 1 for p in pts)
            dists = [0.0] * len(pts)
    else:
        ok = all(d <= tol.absolute + tol.relative * abs(p) for d, p in zip(dists, cpts))
    return RectilinearityResult(bool(ok), float(phi), signs, float(max(dists)))


def _line_unit(mo: _Moments, points) -> Optional[GaussianRational]:
    """``conj(d)/d`` for an exact nonzero point ``d`` on the line, i.e. ``e^{-2i phi}``."""
    for d in [mo.c] + list(points):
        if is_exact(d) and not d.is_zero():
            return d.conjugate() / d
    return None


# -- moment identities --------------------------------------------------------

def moment_identity(
    f: Poly,
    kind: str,
    m: Optional[int] = None,
    s: Optional[int] = None,
    choice: Optional[int] = None,
    tol: Tolerance = DEFAULT_TOL,
) -> IdentityReport:
    """Check one of the second-moment identities derived from the Sz.-Nagy family.

    ``EQ22``  sum xi'^2 = (n-2)/n sum r lambda^2 + c^2
    ``EQ24``  sum lambda = sum xihat + c
    ``EQ25``  sum xihat^2 = sum lambda^2 - 2(n-1) X - c^2
    ``EQ26``  the EQ22 identity in absolute values (rectilinear roots)
    ``EQ27``  the EQ25 identity in absolute values, z_{n-2} on c's side
    ``EQ28``  the same with z_{n-2} on the opposite side of the origin
    ``EQ30``  sum (xi^(m))^2 = sum w^2 - m(2n-m-1) X - m c^2 (simple roots)
    ``EQ34``  difference of EQ30 at orders m and m+s

    Here ``c`` is the centroid, ``X = (c - z_{n-2})^2``, ``xi'`` the roots of
    f', ``xihat`` the roots of the log-derivative and ``lambda`` the distinct
    roots.
    """
    if kind not in MOMENT_KINDS:
        raise DomainError(f"unknown identity kind {kind!r}")
    n = _require_degree(f, 2)
    mo = _Moments(f)
    c = mo.c
    ex = mo.exact

    if kind == "EQ22":
        _, s1sq, a1 = mo.deriv_sums(1)
        _, s0sq, a0 = mo.deriv_sums(0)
        rhs = s0sq * _ratio(n - 2, n, ex) + c * c
        return _report(kind, s1sq, rhs, a1 + a0 * (n - 2) / n + abs(c) ** 2, tol)

    if kind in ("EQ24", "EQ25"):
        k = mo.distinct_count()
        if k < 2:
            raise DomainError("hypothesis failed: need k >= 2 distinct roots")
        dl1, dl2, dla = mo.distinct_sums()
        lg1, lg2, lga = mo.log_sums()
        multiple = k < n
        if kind == "EQ24":
            return _report(kind, dl1, lg1 + c, _mag(dl1, lg1, c), tol, multiple_roots=multiple)
        x = mo.offset_sq()
        rhs = dl2 - x * (2 * (n - 1)) - c * c
        return _report(
            kind, lg2, rhs, lga + dla + 2 * (n - 1) * abs(x) + abs(c) ** 2, tol,
            multiple_roots=multiple,
            hypothesis_note="outside verified hypothesis (multiple roots)" if multiple else "",
        )

    if kind in ("EQ26", "EQ27", "EQ28"):
        return _absolute_identity(mo, kind, choice, tol)

    if kind == "EQ30":
        if m is None or not 0 <= m <= n:
            raise DomainError(f"hypothesis failed: m must lie in 0..{n}")
        if mo.distinct_count() != n:
            raise DomainError("hypothesis failed: all n roots must be simple")
        _, sm, am = mo.deriv_sums(m)
        _, s0, a0 = mo.deriv_sums(0)
        x = mo.offset_sq()
        rhs = s0 - x * (m * (2 * n - m - 1)) - c * c * m
        return _report(kind, sm, rhs, am + a0 + m * (2 * n - m - 1) * abs(x) + m * abs(c) ** 2, tol, m=m)

    # EQ34
    if m is None or s is None:
        raise DomainError("EQ34 needs both m and s")
    r = mo.max_multiplicity()
    if not 2 <= s <= n - r:
        raise DomainError(f"hypothesis failed: need 2 <= s <= n - r = {n - r}")
    if not r - 1 <= m <= n - s - 1:
        raise DomainError(f"hypothesis failed: need r - 1 = {r - 1} <= m <= n - s - 1 = {n - s - 1}")
    _, sm, am = mo.deriv_sums(m)
    _, sms, ams = mo.deriv_sums(m + s)
    x = mo.offset_sq()
    coef = s * (2 * (n - m) - s - 1)
    rhs = x * coef + c * c * s
    return _report(kind, sm - sms, rhs, am + ams + coef * abs(x) + s * abs(c) ** 2, tol, m=m, s=s)


def _absolute_identity(mo: _Moments, kind: str, choice: Optional[int], tol: Tolerance) -> IdentityReport:
    n, c = mo.n, mo.c
    lam = mo.multiset()
    xi = mo.deriv_roots(1)
    rect = rectilinearity(list(lam.distinct()) + list(xi), tol)
    if not rect.collinear_through_origin:
        raise DomainError("hypothesis failed: roots and critical points are not collinear through the origin")

    if kind == "EQ26":
        unit = _line_unit(mo, list(lam.distinct()) + xi) if mo.exact else None
        if unit is not None:
            _, s1sq, _ = mo.deriv_sums(1)
            _, s0sq, _ = mo.deriv_sums(0)
            lhs = s1sq * unit
            rhs = s0sq * unit * Fraction(n - 2, n) + GaussianRational(c.norm())
        else:
            lhs = ComplexFloat(sum(abs(complex(p)) ** 2 for p in xi))
            s0 = sum(m * abs(complex(p)) ** 2 for p, m in lam.entries)
            rhs = ComplexFloat((n - 2) / n * s0 + abs(c) ** 2)
        scale = abs(lhs) + abs(rhs)
        return _report(kind, lhs, rhs, scale, tol, angle=rect.angle)

    if mo.distinct_count() < 2:
        raise DomainError("hypothesis failed: need k >= 2 distinct roots")
    same_side = kind == "EQ27"
    zs = mo.subcentroid()
    order = [choice] if choice is not None else [0, 1]
    picked = None
    for idx in order:
        z = zs[idx]
        dot = complex(to_float(c)) * complex(to_float(z)).conjugate()
        band = 1e-9 * (abs(c) * abs(z) + 1e-300)
        side = 0 if abs(dot.real) <= band else (1 if dot.real > 0 else -1)
        if side == 0 or (side > 0) == same_side:
            picked = idx
            break
    if picked is None:
        where = "the centroid's side" if same_side else "the opposite side"
        raise DomainError(f"hypothesis failed: no root of f^(n-2) lies on {where} of the origin")
    z = zs[picked]
    sign = -1 if same_side else 1
    unit = _line_unit(mo, list(lam.distinct()) + xi) if mo.exact and is_exact(z) else None
    cross = None
    if unit is not None:
        cross = exact_sqrt(GaussianRational(c.norm() * z.norm()))
    if unit is not None and cross is not None:
        _, lg2, _ = mo.log_sums()
        _, dl2, _ = mo.distinct_sums()
        lhs = lg2 * unit
        gap = GaussianRational(c.norm() + z.norm()) + cross * (2 * sign)
        rhs = dl2 * unit - gap * (2 * (n - 1)) - GaussianRational(c.norm())
    else:
        hats = log_deriv_roots(_float_multiset(lam))
        lhs = ComplexFloat(sum(abs(complex(p)) ** 2 for p in hats))
        gap = (abs(c) + sign * abs(z)) ** 2
        rhs = ComplexFloat(sum(abs(complex(p)) ** 2 for p, _ in lam.entries) - 2 * (n - 1) * gap - abs(c) ** 2)
    scale = abs(lhs) + abs(rhs) + 2 * (n - 1) * abs(gap)
    return _report(kind, lhs, rhs, scale, tol, angle=rect.angle, subcentroid=z, choice=picked)


def _float_multiset(ms: RootMultiset) -> RootMultiset:
    if all(is_exact(x) for x in ms.distinct()):
        return ms
    return RootMultiset(tuple((to_float(x), m) for x, m in ms.entries))


# -- Newton-like sums and Viete ----------------------------------------------

def newton_like_aggregate(nodes, points: Sequence, tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """``sum_j G_n(w_j) = sum_k C(n,k) p_k H_{n-k}(z_k, ..., z_{n-1})`` with ``p_k = sum_j w_j^k``.

    Needs ``z_0 = 0``.  When the ``w_j`` are nonzero roots of ``G_n`` both
    sides vanish.
    """
    ns = nodes if isinstance(nodes, NodeSequence) else NodeSequence(nodes)
    if not ns[0].is_zero():
        raise DomainError("aggregation requires z_0 = 0 exactly")
    if not points:
        raise DomainError("need at least one point")
    vals = _harmonize(list(ns.nodes) + list(points))
    node_vals, pts = vals[: ns.n], vals[ns.n:]
    n = ns.n
    g = goncharov_recurrence(node_vals)
    lhs_terms = [eval_poly(g, w) for w in pts]
    ref = node_vals[0]
    rhs_terms = []
    for k in range(1, n + 1):
        pk = _ssum((w**k for w in pts), ref)
        rhs_terms.append(pk * _levinson(node_vals[k:], "det_binomial", ref) * binomial(n, k))
    lhs, rhs = _ssum(lhs_terms, ref), _ssum(rhs_terms, ref)
    return _report("EQ19", lhs, rhs, _mag(*lhs_terms, *rhs_terms), tol, points=len(pts))


def viete_check(roots: RootMultiset, shared, tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """``sum_{j>=2} r_j (lambda_j - lambda_1) = 0`` when the shared root ``lambda_1`` is the centroid."""
    vals = _harmonize(list(roots.distinct()) + [shared])
    lam, shared = vals[:-1], vals[-1]
    mults = roots.multiplicities()
    idx = next((i for i, x in enumerate(lam) if approx_eq(x, shared, tol)), None)
    if idx is None:
        raise DomainError("hypothesis failed: shared value is not one of the distinct roots")
    n = sum(mults)
    cen = _ssum((x * r for x, r in zip(lam, mults)), shared) / n
    if not approx_eq(cen, shared, tol):
        raise DomainError(f"hypothesis failed: centroid {cen} differs from the shared root")
    terms = [(x - lam[idx]) * r for i, (x, r) in enumerate(zip(lam, mults)) if i != idx]
    total = _ssum(terms, shared)
    return _report("EQ20", total, zero_like(total), _mag(*terms), tol)


# -- log-derivative formula ---------------------------------------------------

def _pole_check(f: Poly, z: Scalar, tol: Tolerance) -> Scalar:
    fz = eval_poly(f, z)
    if is_exact(fz):
        if fz.is_zero():
            raise DomainError("f(z) = 0: z is a pole of the log-derivative")
    else:
        bound = float(np.polyval(np.abs(f.to_array()[::-1]), abs(z)))
        if abs(fz) <= tol.absolute + tol.relative * bound:
            raise DomainError("f(z) is numerically zero: z is a pole of the log-derivative")
    return fz


def hoppe_log_derivative(f: Poly, m: int, z, tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """``(f'/f)^(m)`` against ``sum_j (-1)^j/(j+1) C(m+1, j+1) (f^{j+1})^(m+1) / f^{j+1}``.

    The left side differentiates the pair (numerator, denominator) ``m``
    times with the quotient rule and never cancels common factors.
    """
    if m < 0:
        raise DomainError("m must be non-negative")
    _require_degree(f, 0)
    z = as_scalar(z)
    if f.is_exact != is_exact(z):
        f, z = f.to_float(), to_float(z)
    fz = _pole_check(f, z, tol)
    exact = f.is_exact

    p, q = derivative(f), f
    for _ in range(m):
        p, q = derivative(p) * q - p * derivative(q), q * q
    qz = eval_poly(q, z)
    lhs = eval_poly(p, z) / qz
    scale = _abs_eval(p, z) / abs(qz)

    terms = []
    power = Poly([one_like(z)])
    for j in range(m + 1):
        power = power * f
        coef = _ratio((-1) ** j * binomial(m + 1, j + 1), j + 1, exact)
        dp = derivative(power, m + 1)
        terms.append(eval_poly(dp, z) / fz ** (j + 1) * coef)
        scale += abs(coef) * _abs_eval(dp, z) / abs(fz) ** (j + 1)
    rhs = _ssum(terms, z)
    return _report("EQ31", lhs, rhs, scale, tol, m=m)


# -- Laguerre ---------------------------------------------------------------

def _real_rooted_squarefree(f: Poly) -> bool:
    if f.degree < 1:
        return True
    if f.is_exact:
        if exact_gcd(f, derivative(f)).degree > 0:
            return False
        pts = split_roots(f)
    else:
        ms = root_multiset(f)
        if ms.k != f.degree:
            return False
        pts = ms.distinct()
    return all(abs(complex(to_float(p)).imag) <= 1e-9 * (1.0 + abs(p)) for p in pts)


def laguerre_check(f: Poly, x, tol: Tolerance = DEFAULT_TOL) -> IdentityReport:
    """``f'(x)^2 - f(x) f''(x)`` at a real point.

    ``passed`` records whether the quantity is strictly positive, which is
    guaranteed only for squarefree real-rooted f (``details['hypothesis']``).
    """
    if not all(c.is_real() for c in f.coeffs):
        raise DomainError("f must have real coefficients")
    x = as_scalar(x)
    if not x.is_real():
        raise DomainError("x must be real")
    if f.is_exact != is_exact(x):
        f, x = f.to_float(), to_float(x)
    d1, d2 = derivative(f), derivative(f, 2)
    lhs = eval_poly(d1, x) ** 2
    rhs = eval_poly(f, x) * eval_poly(d2, x)
    diff = lhs - rhs
    quantity = diff.re if is_exact(diff) else complex(diff).real
    rep = _report("EQ33", lhs, rhs, _mag(lhs, rhs), tol)
    rep.passed = bool(quantity > 0)
    rep.details.update(quantity=quantity, hypothesis=_real_rooted_squarefree(f))
    return rep


def derivative_separation(f: Poly) -> list[float]:
    """Minimum distance between the root sets of ``f^(j)`` and ``f^(j+1)``, j = 0..n-2.

    Positive entries mean consecutive derivatives share no root.
    """
    n = _require_degree(f, 2)
    sets = [np.array([complex(to_float(p)) for p in _Moments(f).deriv_roots(j)]) for j in range(n)]
    return [float(np.min(np.abs(a[:, None] - b[None, :]))) for a, b in zip(sets, sets[1:])]


# -- Schoenberg gap -------------------------------------------------------------

def schoenberg_gap_roots(lam, tol: Tolerance = DEFAULT_TOL) -> SchoenbergReport:
    """Gap and collinearity verdict straight from a root list (float fast path)."""
    arr = np.asarray([complex(to_float(as_scalar(x))) for x in lam], dtype=np.complex128)
    if arr.shape[0] < 2:
        raise DomainError("need degree >= 2")
    gap, xi = kernels.schoenberg_gap(arr)
    rect = rectilinearity([ComplexFloat(complex(p)) for p in arr], tol)
    return SchoenbergReport(
        float(gap), int(arr.shape[0]), rect.collinear_through_origin, rect.angle,
        tuple(complex(p) for p in xi),
    )


def schoenberg_gap(f: Poly, tol: Tolerance = DEFAULT_TOL) -> SchoenbergReport:
    """``(n-2)/n sum r|lambda|^2 + |c|^2 - sum |xi'|^2`` with the rectilinearity verdict.

    Uses the roots of f and f' themselves (exact where they split over
    Q(i), clustered otherwise) so repeated roots do not smear the gap.
    Reports the gap only; the inequality is never asserted.
    """
    n = _require_degree(f, 2)
    if f.is_exact:
        lam, xi = split_roots(f), split_roots(derivative(f))
    else:
        lam, xi = list(roots_numeric(f).roots), list(roots_numeric(derivative(f), 1).roots)
    if not all(is_exact(x) for x in lam + xi):
        lam, xi = [to_float(x) for x in lam], [to_float(x) for x in xi]
    sq = lambda x: (x * x.conjugate()).re
    total = sum((sq(x) for x in lam), 0)
    c = _ssum(lam, lam[0]) / n
    gap = total * Fraction(n - 2, n) + sq(c) - sum((sq(x) for x in xi), 0) if is_exact(lam[0]) else (
        (n - 2) / n * total + sq(c) - sum((sq(x) for x in xi), 0.0)
    )
    rect = rectilinearity(lam, tol)
    return SchoenbergReport(float(gap), n, rect.collinear_through_origin, rect.angle, tuple(complex(to_float(x)) for x in xi))
