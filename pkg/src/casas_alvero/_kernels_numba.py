"""JIT-compiled floating-point kernels.

All polynomial arrays are complex128 and store coefficients in ascending
powers.  The numpy twin lives in ``_kernels_numpy``; both expose the same
functions with the same signatures.
"""

import math

import numpy as np
from numba import njit

from ._accel import EPS, MAX_ITER, START_ANGLE


@njit(cache=True)
def horner(c, z):
    acc = 0j
    for i in range(c.shape[0] - 1, -1, -1):
        acc = acc * z + c[i]
    return acc


@njit(cache=True)
def poly_from_roots(roots):
    n = roots.shape[0]
    c = np.zeros(n + 1, dtype=np.complex128)
    c[0] = 1.0
    for k in range(n):
        r = roots[k]
        # multiply by (z - r), ascending storage
        for i in range(k + 1, 0, -1):
            c[i] = c[i - 1] - r * c[i]
        c[0] = -r * c[0]
    return c


@njit(cache=True)
def derivative(c, m):
    n = c.shape[0] - 1
    if m > n:
        return np.zeros(1, dtype=np.complex128)
    out = np.empty(n - m + 1, dtype=np.complex128)
    for i in range(n - m + 1):
        f = 1.0
        for t in range(i + 1, i + m + 1):
            f *= t
        out[i] = c[i + m] * f
    return out


@njit(cache=True)
def companion_roots(c):
    n = c.shape[0] - 1
    m = np.zeros((n, n), dtype=np.complex128)
    for i in range(1, n):
        m[i, i - 1] = 1.0
    for i in range(n):
        m[i, n - 1] = -c[i] / c[n]
    return np.linalg.eigvals(m)


@njit(cache=True)
def aberth(c, max_iter):
    """Aberth-Ehrlich iteration; returns ``(roots, converged)``.

    Trailing low-order zero coefficients are split off as exact zero roots.
    Starts on the Cauchy-bound circle rotated by ``START_ANGLE``; a root is
    frozen once ``|p(z)|`` is within the Horner rounding bound.
    """
    deg = c.shape[0] - 1
    out = np.zeros(deg, dtype=np.complex128)
    nz = 0
    while nz < deg and c[nz] == 0:
        nz += 1
    n = deg - nz
    if n == 0:
        return out, True
    a = c[nz:] / c[deg]
    if n == 1:
        out[nz] = -a[0]
        return out, True
    absa = np.abs(a)
    radius = 0.0
    for i in range(n):
        if absa[i] > radius:
            radius = absa[i]
    radius += 1.0
    z = np.empty(n, dtype=np.complex128)
    for k in range(n):
        theta = 2.0 * math.pi * k / n + START_ANGLE
        z[k] = radius * complex(math.cos(theta), math.sin(theta))
    done = np.zeros(n, dtype=np.bool_)
    converged = False
    for _ in range(max_iter):
        ndone = 0
        for k in range(n):
            if done[k]:
                ndone += 1
                continue
            zk = z[k]
            p = a[n]
            dp = 0j
            bound = absa[n]
            rz = abs(zk)
            for i in range(n - 1, -1, -1):
                dp = dp * zk + p
                p = p * zk + a[i]
                bound = bound * rz + absa[i]
            if abs(p) <= 4.0 * n * EPS * bound:
                done[k] = True
                ndone += 1
                continue
            s = 0j
            for j in range(n):
                if j != k:
                    d = zk - z[j]
                    if d != 0:
                        s += 1.0 / d
            if dp == 0:
                w = 1e-8 * (1.0 + rz) + 0j
            else:
                ratio = p / dp
                den = 1.0 - ratio * s
                w = ratio / den if den != 0 else ratio
            z[k] = zk - w
        if ndone == n:
            converged = True
            break
    out[nz:] = z
    return out, converged


@njit(cache=True)
def roots(c):
    r, ok = aberth(c, MAX_ITER)
    if ok:
        return r, True
    deg = c.shape[0] - 1
    nz = 0
    while nz < deg and c[nz] == 0:
        nz += 1
    out = np.zeros(deg, dtype=np.complex128)
    out[nz:] = companion_roots(c[nz:])
    return out, False


@njit(cache=True)
def ca_objective(lam):
    """Root-sharing residual of the monic polynomial with roots ``lam``.

    Sum over derivative orders j of min_w |f(w)|^2 across the roots w of
    f^(j), divided by (1 + max|coefficient|)^2.  Roots are first shifted by
    ``lam[0]`` so an all-equal configuration evaluates to exactly 0.
    """
    n = lam.shape[0]
    r = lam - lam[0]
    c = poly_from_roots(r)
    cmax = 0.0
    for i in range(n + 1):
        if abs(c[i]) > cmax:
            cmax = abs(c[i])
    scale = 1.0 + cmax
    total = 0.0
    for j in range(1, n):
        w, _ = roots(derivative(c, j))
        best = np.inf
        for i in range(w.shape[0]):
            v = 1.0 + 0j
            for t in range(n):
                v *= w[i] - r[t]
            m = v.real * v.real + v.imag * v.imag
            if m < best:
                best = m
        total += best
    return total / (scale * scale)


@njit(cache=True)
def schoenberg_gap(lam):
    """Return ``(gap, critical_points)`` for the monic polynomial with roots ``lam``."""
    n = lam.shape[0]
    c = poly_from_roots(lam)
    xi, _ = roots(derivative(c, 1))
    cen = 0j
    s_lam = 0.0
    for i in range(n):
        cen += lam[i]
        s_lam += lam[i].real * lam[i].real + lam[i].imag * lam[i].imag
    cen /= n
    s_xi = 0.0
    for i in range(xi.shape[0]):
        s_xi += xi[i].real * xi[i].real + xi[i].imag * xi[i].imag
    gap = (n - 2.0) / n * s_lam + (cen.real * cen.real + cen.imag * cen.imag) - s_xi
    return gap, xi
