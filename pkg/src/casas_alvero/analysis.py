"""Root-sharing analysis: CA verdicts, triviality criteria, the disk-exclusion
bound and the derivative-moment inequality for real-rooted polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .identities import moment_identity, rectilinearity
from .numeric import (
    ComplexFloat,
    DomainError,
    ExactnessError,
    InvariantViolation,
    Scalar,
    Tolerance,
    approx_eq,
    as_scalar,
    is_exact,
    to_float,
    zero_like,
)
from .poly import (
    Poly,
    RootMultiset,
    derivative,
    exact_divide,
    exact_gcd,
    root_multiset,
    roots_numeric,
    split_roots,
)

# Shared-root matching tolerance for numeric mode (scaled by 1 + max|root|).
MATCH_TOL = Tolerance(absolute=1e-7, relative=0.0)

VERDICTS = ("trivial", "non_CA", "CA_candidate")
CRITERIA = ("prop7", "prop8_vertical", "prop8_horizontal")


@dataclass(frozen=True)
class OrderRecord:
    order: int
    derivative_roots: tuple
    shared: tuple

    @property
    def shared_count(self) -> int:
        return len(self.shared)


@dataclass
class CAReport:
    degree: int
    records: list
    verdict: str
    method: str
    multiplicities: list
    filters: dict = field(default_factory=dict)

    def record(self, j: int) -> OrderRecord:
        return self.records[j - 1]

    @property
    def first_empty_order(self) -> Optional[int]:
        return next((r.order for r in self.records if not r.shared), None)


@dataclass(frozen=True)
class DiskExclusionReport:
    mu: float
    lambda1: Scalar
    all_inside: bool
    lower_bound_value: float
    contradiction: bool
    viete_sum: Scalar
    weighted_mean_modulus: float


@dataclass(frozen=True)
class Prop9Report:
    m: int
    s: int
    lhs_sum: float
    rhs_sum: float
    excluded: tuple
    satisfied: bool
    eq34_residual: float
    scale: float


def _check_order(f: Poly, j: int) -> int:
    n = f.degree
    if not 1 <= j <= n - 1:
        raise DomainError(f"derivative order must lie in 1..{n - 1}")
    return n


def _match_radius(points, tol: Tolerance) -> float:
    big = max((abs(p) for p in points), default=0.0)
    return tol.absolute * (1.0 + big)


def shared_roots(f: Poly, j: int, mode: str = "exact", tol: Tolerance = MATCH_TOL) -> list:
    """Distinct roots of f that are also roots of ``f^(j)``.

    ``exact``: roots of ``gcd(f, f^(j))`` (exact where rational).
    ``numeric``: roots of f within ``tol.absolute * (1 + max|root|)`` of a
    root of ``f^(j)``.
    """
    _check_order(f, j)
    if mode == "exact":
        if not f.is_exact:
            raise ExactnessError("exact mode needs exact coefficients")
        g = exact_gcd(f, derivative(f, j))
        if g.degree < 1:
            return []
        sqf = exact_divide(g, exact_gcd(g, derivative(g)))
        return split_roots(sqf)
    if mode != "numeric":
        raise DomainError(f"unknown mode {mode!r}")
    ff = f if not f.is_exact else f.to_float()
    lam = root_multiset(ff).distinct()
    xi = list(roots_numeric(derivative(ff, j), j).roots)
    return _numeric_matches(lam, xi, tol)


def _numeric_matches(lam, xi, tol: Tolerance) -> list:
    radius = _match_radius(list(lam) + list(xi), tol)
    out = []
    for x in lam:
        cx = complex(to_float(x))
        if any(abs(cx - complex(to_float(w))) < radius for w in xi):
            out.append(x)
    return out


def ca_check(f: Poly, mode: Optional[str] = None, tol: Tolerance = MATCH_TOL) -> CAReport:
    """Fill every ``B_j`` (roots of ``f^(j)``) and ``C_j`` (shared with f) and decide.

    Verdict order: ``trivial`` (single distinct root) is decided first, then
    ``CA_candidate`` (every ``C_j`` non-empty), else ``non_CA``.  Mode
    defaults to exact for exact coefficients.
    """
    n = f.degree
    if n < 2:
        raise DomainError("ca_check needs degree >= 2")
    if mode is None:
        mode = "exact" if f.is_exact else "numeric"
    if mode == "exact" and not f.is_exact:
        raise ExactnessError("exact mode needs exact coefficients")
    work = f if mode == "exact" else (f.to_float() if f.is_exact else f)
    ms = root_multiset(work) if mode == "exact" else root_multiset(work, Tolerance(tol.absolute, 0.0))
    lam = ms.distinct()
    records = []
    for j in range(1, n):
        dj = derivative(work, j)
        b = tuple(split_roots(dj)) if mode == "exact" else tuple(roots_numeric(dj, j).roots)
        if mode == "exact":
            c = tuple(shared_roots(work, j, "exact"))
        else:
            c = tuple(_numeric_matches(lam, b, tol))
        records.append(OrderRecord(j, b, c))

    mults = sorted(ms.multiplicities())
    if ms.k == 1:
        verdict = "trivial"
    elif all(r.shared for r in records):
        verdict = "CA_candidate"
    else:
        verdict = "non_CA"

    filters: dict = {"max_multiplicity": ms.r}
    if ms.k > 1 and len(set(mults)) == 1:
        m = mults[0]
        filters["equal_multiplicity"] = m
        filters["equal_multiplicity_order_empty"] = m <= n - 1 and not records[m - 1].shared
    if verdict == "CA_candidate":
        failed = []
        if filters.get("equal_multiplicity") is not None:
            failed.append("equal multiplicities")
        if ms.r < 2:
            failed.append("all roots simple")
        if failed:
            if mode == "exact":
                raise InvariantViolation(f"exact CA candidate violates a necessary condition: {', '.join(failed)}")
            verdict = "non_CA"
            filters["rejected_by"] = failed
    return CAReport(n, records, verdict, mode, mults, filters)


# -- triviality criteria -------------------------------------------------------

def _is_zero(x: Scalar, scale: float, tol: Tolerance) -> bool:
    if is_exact(x):
        return x.is_zero()
    return abs(x) <= tol.absolute + tol.relative * scale


def _single_point(f: Poly, tol: Tolerance) -> bool:
    if f.is_exact:
        return exact_divide(f, exact_gcd(f, derivative(f))).degree == 1
    return root_multiset(f, Tolerance(max(tol.absolute, 1e-7), 0.0)).k == 1


def triviality_check(f: Poly, criterion: str, tol: Tolerance = Tolerance(1e-9, 1e-9)) -> bool:
    """True iff ``f^(n-2)`` has a double root (at 0 for ``prop7``).

    Under the stated hypothesis this is equivalent to f being ``z^n``
    (``prop7``) or trivial (``prop8_*``); the conclusion is re-checked
    directly and a disagreement raises :class:`InvariantViolation`.
    """
    if criterion not in CRITERIA:
        raise DomainError(f"criterion must be one of {CRITERIA}")
    n = f.degree
    if n < 2:
        raise DomainError("need degree >= 2")
    roots = split_roots(f) if f.is_exact else list(roots_numeric(f).roots)
    if criterion == "prop7":
        if not rectilinearity(roots, tol).collinear_through_origin:
            raise DomainError("hypothesis failed: roots are not collinear through the origin")
    else:
        part = (lambda z: z.real) if criterion == "prop8_vertical" else (lambda z: z.imag)
        vals = [part(complex(to_float(r))) for r in roots]
        spread = max(vals) - min(vals)
        if spread > tol.absolute + tol.relative * max(abs(v) for v in vals):
            line = "vertical" if criterion == "prop8_vertical" else "horizontal"
            raise DomainError(f"hypothesis failed: roots are not on a common {line} line")

    q = derivative(f, n - 2)
    a, b, c = q.coeffs[2], q.coeffs[1], q.coeffs[0]
    scale = q.max_abs_coeff()
    if criterion == "prop7":
        result = _is_zero(b, scale, tol) and _is_zero(c, scale, tol)
        lead = f.lead
        conclusion = all(_is_zero(x, abs(lead), tol) for x in f.coeffs[:-1])
    else:
        result = _is_zero(b * b - a * c * 4, scale * scale, tol)
        conclusion = _single_point(f, tol)
    if result != conclusion:
        raise InvariantViolation(f"{criterion}: double-root test gave {result} but direct triviality test gave {conclusion}")
    return bool(result)


# -- disk exclusion ------------------------------------------------------------

def prop6_constant(mu: float) -> float:
    """``K e^{1-K}`` with ``K = (1-mu)/(2 mu) * ln((1+mu)/(1-mu))``."""
    if not 0.0 < mu < 1.0:
        raise DomainError("mu must lie in (0, 1)")
    k = (1.0 - mu) / (2.0 * mu) * math.log((1.0 + mu) / (1.0 - mu))
    return k * math.exp(1.0 - k)


def prop6_bound(mu: float, roots: RootMultiset, lambda1, tol: Tolerance = Tolerance(1e-12, 1e-12)) -> DiskExclusionReport:
    """Weighted-mean lower bound when every other root lies in ``|z - lambda1 - 1| <= mu``.

    ``contradiction`` flags the impossible event that all other roots are in
    the disk while the centroid sits at ``lambda1``.
    """
    mu = float(mu)
    const = prop6_constant(mu)
    lambda1 = as_scalar(lambda1)
    entries = list(roots.entries)
    idx = [i for i, (x, _) in enumerate(entries) if approx_eq(x, lambda1, tol)]
    if not idx:
        raise DomainError("lambda1 is not one of the roots")
    if len(idx) > 1:
        raise DomainError("another listed root coincides with lambda1")
    l1, r1 = entries[idx[0]]
    others = [(x, r) for i, (x, r) in enumerate(entries) if i != idx[0]]
    n = roots.degree
    if not others:
        raise DomainError("need at least one root other than lambda1")
    c1 = complex(to_float(l1))
    log_prod = 0.0
    for x, r in others:
        d = abs(complex(to_float(x)) - c1)
        log_prod += r / (n - r1) * math.log(d)
    bound = const * math.exp(log_prod)
    inside = all(abs(complex(to_float(x)) - c1 - 1.0) <= mu for x, _ in others)
    kinds_exact = is_exact(l1) and all(is_exact(x) for x, _ in others)
    if kinds_exact:
        vs = zero_like(l1)
        for x, r in others:
            vs = vs + (x - l1) * r
        zero_sum = vs.is_zero()
    else:
        vs = ComplexFloat(sum(r * (complex(to_float(x)) - c1) for x, r in others))
        scale = sum(r * abs(complex(to_float(x)) - c1) for x, r in others)
        zero_sum = abs(vs) <= tol.absolute + tol.relative * scale
    mean_mod = abs(complex(to_float(vs))) / (n - r1)
    return DiskExclusionReport(mu, l1, inside, bound, inside and zero_sum, vs, mean_mod)


# -- derivative moment inequality ----------------------------------------------

def _drop_one(values: list, target, radius: float) -> bool:
    ct = complex(to_float(target))
    for i, v in enumerate(values):
        if abs(complex(to_float(v)) - ct) < radius:
            del values[i]
            return True
    return False


def prop9_report(f: Poly, m: int, s: int, tol: Tolerance = Tolerance(1e-9, 1e-9)) -> Prop9Report:
    """Sums of squared roots of ``f^(m)`` and ``f^(m+s)`` with common shared roots removed.

    Each member of ``C_m`` and ``C_{m+s}`` removes one copy from each list.
    """
    n = f.degree
    if n < 2:
        raise DomainError("need degree >= 2")
    roots = split_roots(f) if f.is_exact else list(roots_numeric(f).roots)
    for x in roots:
        cx = complex(to_float(x))
        if abs(cx.imag) > 1e-9 * (1.0 + abs(cx)):
            raise DomainError("hypothesis failed: f must be real-rooted")
    r = root_multiset(f).r
    if m < r - 1:
        raise DomainError(f"hypothesis failed: m >= r - 1 = {r - 1}")
    if not 2 <= s <= n - r:
        raise DomainError(f"hypothesis failed: 2 <= s <= n - r = {n - r}")
    if m > n - s - 1:
        raise DomainError(f"hypothesis failed: m <= n - s - 1 = {n - s - 1}")

    mode = "exact" if f.is_exact else "numeric"
    bm = split_roots(derivative(f, m)) if f.is_exact else list(roots_numeric(derivative(f, m), m).roots)
    bms = split_roots(derivative(f, m + s)) if f.is_exact else list(roots_numeric(derivative(f, m + s), m + s).roots)
    cm = shared_roots(f, m, mode) if m >= 1 else root_multiset(f).distinct()
    cms = shared_roots(f, m + s, mode)
    radius = _match_radius(roots, MATCH_TOL)
    both = [x for x in cm if any(abs(complex(to_float(x)) - complex(to_float(y))) < radius for y in cms)]
    left, right = list(bm), list(bms)
    for x in both:
        _drop_one(left, x, radius)
        _drop_one(right, x, radius)
    lhs = sum(complex(to_float(x)).real ** 2 for x in left)
    rhs = sum(complex(to_float(x)).real ** 2 for x in right)
    scale = lhs + rhs
    eq34 = moment_identity(f, "EQ34", m=m, s=s)
    return Prop9Report(m, s, lhs, rhs, tuple(both), lhs >= rhs - (tol.absolute + tol.relative * scale), eq34.residual, scale)
