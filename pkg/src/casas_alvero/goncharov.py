"""Abel-Goncharov polynomials, Levinson values and Hessenberg determinants.

``G_n(z; z_0, ..., z_{n-1})`` is the monic degree-n polynomial with
``G_n^{(j)}(z_j) = 0`` for ``j = 0..n-1``.  It is built three independent
ways (recurrence, iterated integration, Levinson expansion with
determinantal Levinson values); the test-suite equates them exactly.

The Levinson value ``H_m(a_1, ..., a_m)`` is ``G_m`` with nodes ``a``
evaluated at 0, i.e. ``m!`` times the iterated integral from the nodes
down to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .numeric import DomainError, ExactnessError, Scalar, as_scalar, is_exact, one_like, zero_like
from .poly import Poly, antiderivative_from, eval_poly, interpolate

LEVINSON_METHODS = ("integral", "det_factorial", "det_binomial")


@lru_cache(maxsize=None)
def _pascal_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _pascal_row(n - 1)
    return (1,) + tuple(prev[i] + prev[i + 1] for i in range(n - 1)) + (1,)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient from Pascal's triangle."""
    if k < 0 or k > n or n < 0:
        return 0
    return _pascal_row(n)[k]


def multinomial(parts: Sequence[int]) -> int:
    total, acc = 0, 1
    for p in parts:
        total += p
        acc *= binomial(total, p)
    return acc


@dataclass(frozen=True)
class NodeSequence:
    """Interpolation nodes ``z_0, ..., z_{n-1}``; node ``k`` pairs with the k-th derivative."""

    nodes: tuple

    def __init__(self, nodes):
        object.__setattr__(self, "nodes", tuple(as_scalar(x) for x in nodes))
        if not self.nodes:
            raise DomainError("a node sequence needs at least one node")
        if len({is_exact(x) for x in self.nodes}) > 1:
            raise ExactnessError("nodes mix exact and floating values")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def mapped(self, alpha, beta) -> NodeSequence:
        alpha, beta = as_scalar(alpha), as_scalar(beta)
        return NodeSequence([alpha * x + beta for x in self.nodes])


def _as_nodes(nodes) -> NodeSequence:
    return nodes if isinstance(nodes, NodeSequence) else NodeSequence(nodes)


@dataclass(frozen=True)
class SupportPattern:
    """Strictly increasing indices ``i_1 < ... < i_s`` in ``{1, ..., n-1}``."""

    indices: tuple
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise DomainError("support pattern needs s >= 1")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise DomainError("pattern indices must be strictly increasing")
        if idx[0] < 1 or idx[-1] > self.n - 1:
            raise DomainError(f"pattern indices must lie in 1..{self.n - 1}")

    @property
    def s(self) -> int:
        return len(self.indices)


class HessenbergMatrix:
    """Upper Hessenberg matrix with every first-subdiagonal entry equal to one.

    Only the upper triangle (diagonal included) is stored: ``upper[i][j - i]``
    holds entry ``(i, j)`` for ``j >= i`` (0-based).
    """

    __slots__ = ("size", "upper")

    def __init__(self, upper: Sequence[Sequence]):
        rows = tuple(tuple(as_scalar(x) for x in row) for row in upper)
        s = len(rows)
        for i, row in enumerate(rows):
            if len(row) != s - i:
                raise DomainError(f"row {i} must hold {s - i} upper-triangular entries")
        self.size = s
        self.upper = rows

    @classmethod
    def from_dense(cls, m: Sequence[Sequence]) -> HessenbergMatrix:
        s = len(m)
        for i in range(s):
            if len(m[i]) != s:
                raise DomainError("matrix must be square")
            for j in range(i - 1):
                if not as_scalar(m[i][j]).is_zero():
                    raise DomainError(f"entry ({i},{j}) below the subdiagonal is nonzero")
            if i >= 1 and as_scalar(m[i][i - 1]) != 1:
                raise DomainError(f"subdiagonal entry ({i},{i - 1}) is not one")
        return cls([[m[i][j] for j in range(i, s)] for i in range(s)])

    def __getitem__(self, ij):
        i, j = ij
        if j >= i:
            return self.upper[i][j - i]
        ref = self.upper[0][0]
        if j == i - 1:
            return one_like(ref)
        return zero_like(ref)

    def to_dense(self) -> list[list]:
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]


def hessenberg_det(m: HessenbergMatrix) -> Scalar:
    """Determinant by the leading-principal-minor recurrence, O(s^2).

    ``p_0 = 1``, ``p_k = sum_{i=1..k} (-1)^(k-i) M[i,k] p_{i-1}``.
    """
    if m.size == 0:
        raise DomainError("empty matrix")
    p = [one_like(m.upper[0][0])]
    for k in range(m.size):
        acc = zero_like(p[0])
        for i in range(k + 1):
            term = m.upper[i][k - i] * p[i]
            acc = acc + term if (k - i) % 2 == 0 else acc - term
        p.append(acc)
    return p[-1]


def levinson_matrix(nodes: Sequence, kind: str) -> HessenbergMatrix:
    """The factorial (``a^k/k!``) or binomial (``C(j, i) a^k``) Levinson matrix."""
    a = [as_scalar(x) for x in nodes]
    m = len(a)
    rows = []
    for i in range(m):
        row = []
        for j in range(i, m):
            power = j - i + 1
            if kind == "det_factorial":
                row.append(a[i] ** power / math.factorial(power))
            elif kind == "det_binomial":
                row.append(a[i] ** power * binomial(j + 1, i))
            else:
                raise DomainError(f"unknown Levinson matrix kind {kind!r}")
        rows.append(row)
    return HessenbergMatrix(rows)


def _levinson(a: Sequence[Scalar], method: str, ref: Scalar) -> Scalar:
    m = len(a)
    if m == 0:
        return one_like(ref)
    if method == "integral":
        p = Poly([one_like(a[0])])
        for k in range(m - 1, -1, -1):
            p = antiderivative_from(p, a[k])
        return eval_poly(p, zero_like(a[0])) * math.factorial(m)
    det = hessenberg_det(levinson_matrix(a, method))
    if method == "det_factorial":
        det = det * math.factorial(m)
    return -det if m % 2 else det


def levinson_H(nodes: Sequence, method: str = "det_binomial") -> Scalar:
    """Levinson value ``H_m(a_1, ..., a_m)``.

    ``integral``: iterated antiderivatives from the nodes, evaluated at 0.
    ``det_factorial``: ``(-1)^m m!`` times the ``a^k/k!`` Hessenberg determinant.
    ``det_binomial``: ``(-1)^m`` times the binomial-weighted determinant.
    """
    a = [as_scalar(x) for x in nodes]
    if not a:
        raise DomainError("Levinson value needs at least one node")
    if method not in LEVINSON_METHODS:
        raise DomainError(f"method must be one of {LEVINSON_METHODS}")
    return _levinson(a, method, a[0])


def goncharov_recurrence(nodes) -> Poly:
    """``G_m = z^m - sum_{k<m} C(m,k) z_k^(m-k) G_k``, ``G_0 = 1``."""
    ns = _as_nodes(nodes)
    one = one_like(ns[0])
    gs = [Poly([one])]
    for m in range(1, ns.n + 1):
        g = Poly.monomial(m, one)
        for k in range(m):
            g = g - gs[k] * (ns[k] ** (m - k) * binomial(m, k))
        gs.append(g)
    return gs[-1]


def goncharov_integral(nodes) -> Poly:
    """``n!`` times the n-fold iterated integral from ``z_{n-1}`` out to ``z_0``."""
    ns = _as_nodes(nodes)
    p = Poly([one_like(ns[0])])
    for k in range(ns.n - 1, -1, -1):
        p = antiderivative_from(p, ns[k])
    return p * math.factorial(ns.n)


def goncharov_levinson(nodes, method: str = "det_binomial") -> Poly:
    """Levinson binomial expansion ``sum_k (z^k - z_0^k) C(n,k) H_{n-k}(z_k, ..., z_{n-1})``."""
    ns = _as_nodes(nodes)
    n, z0 = ns.n, ns[0]
    one = one_like(z0)
    total = Poly.zero()
    for k in range(1, n + 1):
        h = _levinson(ns.nodes[k:], method, z0)
        term = Poly.monomial(k, one) - z0**k
        total = total + term * (h * binomial(n, k))
    return total


def goncharov_expand(nodes, method: str = "det_binomial") -> Poly:
    """``sum_{k=1..n} C(n,k) z^k H_{n-k}(z_k, ..., z_{n-1})`` for nodes with ``z_0 = 0``."""
    ns = _as_nodes(nodes)
    if not ns[0].is_zero():
        raise DomainError("expansion requires z_0 = 0 exactly")
    n = ns.n
    total = Poly.zero()
    for k in range(1, n + 1):
        h = _levinson(ns.nodes[k:], method, ns[0])
        total = total + Poly.monomial(k, h * binomial(n, k))
    return total


def levinson_H_poly(tail: Sequence, method: str = "det_binomial") -> Poly:
    """``z -> H_n(z, z_1, ..., z_{n-1})`` as a polynomial, by evaluating at n+1 points and interpolating."""
    t = [as_scalar(x) for x in tail]
    n = len(t) + 1
    ref = t[0] if t else None
    if ref is not None and not is_exact(ref):
        points = [as_scalar(float(i)) for i in range(n + 1)]
    else:
        points = [as_scalar(i) for i in range(n + 1)]
    values = [_levinson([x] + t, method, x) for x in points]
    return interpolate(points, values)


def compressed_det(nodes, pattern: SupportPattern, z) -> Scalar:
    """Determinant of the ``(s+1) x (s+1)`` matrix left after dropping zero-node rows.

    Built directly from the pattern (not by eliminating rows of the full
    matrix).  It equals ``(-1)^s z^(-i_1) G_n(z; 0, z_1, ..., z_{n-1})``.
    """
    ns = _as_nodes(nodes)
    z = as_scalar(z)
    n = ns.n
    if pattern.n != n:
        raise DomainError("pattern degree does not match the node count")
    if z.is_zero():
        raise DomainError("compressed determinant needs z != 0")
    if not ns[0].is_zero():
        raise DomainError("compressed determinant needs z_0 = 0")
    support = set(pattern.indices)
    for i in range(1, n):
        if i not in support and not ns[i].is_zero():
            raise DomainError(f"node z_{i} is nonzero but outside the support pattern")
    idx = list(pattern.indices) + [n]
    i1 = idx[0]
    rows = [[z ** (c - i1) for c in idx]]
    for r in range(1, len(idx)):
        i = idx[r - 1]
        rows.append([ns[i] ** (idx[c] - i) * binomial(idx[c], i) for c in range(r, len(idx))])
    return hessenberg_det(HessenbergMatrix(rows))


def s1_nonvanishing(n: int, i1: int, z) -> Scalar:
    """Single-support determinant ``(C(n, i1) - 1) z^(n - i1)``; never zero."""
    z = as_scalar(z)
    if not 1 <= i1 < n:
        raise DomainError("need 1 <= i1 < n")
    if z.is_zero():
        raise DomainError("need z != 0")
    m = HessenbergMatrix([[one_like(z), z ** (n - i1)], [z ** (n - i1) * binomial(n, i1)]])
    return hessenberg_det(m)


def _distances(nodes: NodeSequence, z) -> list[float]:
    # d[s] = |z_{n-2-s} - z_{n-1-s}| with z_{-1} = z
    pts = [complex(as_scalar(z))] + [complex(x) for x in nodes.nodes]
    n = nodes.n
    return [abs(pts[n - 1 - s] - pts[n - s]) for s in range(n)]


def bound_tight(nodes, z) -> float:
    """Nested multinomial upper bound on ``|G_n(z)|``.

    Sums ``multinomial(k_0, ..., k_{n-2}, n - sum k) * prod_s d_s^(k_s)`` over
    ``k_s <= s + 1 - (k_0 + ... + k_{s-1})``; depth-first over the index simplex.
    """
    ns = _as_nodes(nodes)
    n = ns.n
    d = _distances(ns, z)
    total = 0.0

    def walk(s: int, used: int, coeff: int, prod: float):
        nonlocal total
        remaining = n - used
        if s == n - 1:
            total += coeff * prod * d[n - 1] ** remaining
            return
        for k in range(0, s + 2 - used):
            if d[s] == 0.0 and k > 0:
                break
            walk(s + 1, used + k, coeff * binomial(remaining, k), prod * d[s] ** k)

    walk(0, 0, 1, 1.0)
    return total


def bound_classical(nodes, z) -> float:
    """``(|z - z_0| + sum_s |z_{s+1} - z_s|)^n``."""
    ns = _as_nodes(nodes)
    pts = [complex(x) for x in ns.nodes]
    total = abs(complex(as_scalar(z)) - pts[0]) + sum(abs(pts[s + 1] - pts[s]) for s in range(ns.n - 1))
    return total**ns.n
