"""Vectorised numpy versions of the floating-point kernels (no JIT)."""

import math

import numpy as np

from ._accel import EPS, MAX_ITER, START_ANGLE


def horner(c, z):
    return complex(np.polyval(c[::-1], z))


def poly_from_roots(roots):
    if len(roots) == 0:
        return np.ones(1, dtype=np.complex128)
    return np.asarray(np.poly(roots), dtype=np.complex128)[::-1].copy()


def derivative(c, m):
    n = len(c) - 1
    if m > n:
        return np.zeros(1, dtype=np.complex128)
    idx = np.arange(n - m + 1)
    factors = np.ones(n - m + 1)
    for t in range(1, m + 1):
        factors *= idx + t
    return c[m:] * factors


def companion_roots(c):
    n = len(c) - 1
    m = np.zeros((n, n), dtype=np.complex128)
    m[np.arange(1, n), np.arange(n - 1)] = 1.0
    m[:, -1] = -c[:n] / c[n]
    return np.linalg.eigvals(m)


def aberth(c, max_iter):
    """Jacobi-style (simultaneous) Aberth-Ehrlich iteration."""
    c = np.asarray(c, dtype=np.complex128)
    deg = len(c) - 1
    out = np.zeros(deg, dtype=np.complex128)
    nz = 0
    while nz < deg and c[nz] == 0:
        nz += 1
    n = deg - nz
    if n == 0:
        return out, True
    a = c[nz:] / c[-1]
    if n == 1:
        out[nz] = -a[0]
        return out, True
    desc = a[::-1]
    ddesc = np.polyder(desc)
    absdesc = np.abs(desc)
    radius = 1.0 + np.max(np.abs(a[:n]))
    z = radius * np.exp(1j * (2.0 * math.pi * np.arange(n) / n + START_ANGLE))
    converged = False
    for _ in range(max_iter):
        p = np.polyval(desc, z)
        bound = np.polyval(absdesc, np.abs(z))
        active = np.abs(p) > 4.0 * n * EPS * bound
        if not active.any():
            converged = True
            break
        dp = np.polyval(ddesc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = np.where(diff != 0, 1.0 / np.where(diff != 0, diff, 1.0), 0.0)
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            den = 1.0 - ratio * s
            w = np.where(den != 0, ratio / den, ratio)
        w = np.where(dp == 0, 1e-8 * (1.0 + np.abs(z)), w)
        z = np.where(active, z - w, z)
    out[nz:] = z
    return out, converged


def roots(c):
    r, ok = aberth(c, MAX_ITER)
    if ok:
        return r, True
    c = np.asarray(c, dtype=np.complex128)
    deg = len(c) - 1
    nz = 0
    while nz < deg and c[nz] == 0:
        nz += 1
    out = np.zeros(deg, dtype=np.complex128)
    out[nz:] = companion_roots(c[nz:])
    return out, False


def ca_objective(lam):
    lam = np.asarray(lam, dtype=np.complex128)
    n = len(lam)
    r = lam - lam[0]
    c = poly_from_roots(r)
    scale = 1.0 + np.max(np.abs(c))
    total = 0.0
    for j in range(1, n):
        w, _ = roots(derivative(c, j))
        vals = np.prod(w[:, None] - r[None, :], axis=1)
        total += float(np.min(vals.real**2 + vals.imag**2))
    return total / (scale * scale)


def schoenberg_gap(lam):
    lam = np.asarray(lam, dtype=np.complex128)
    n = len(lam)
    xi, _ = roots(derivative(poly_from_roots(lam), 1))
    cen = lam.mean()
    gap = (n - 2.0) / n * np.sum(np.abs(lam) ** 2) + abs(cen) ** 2 - np.sum(np.abs(xi) ** 2)
    return float(gap), xi
