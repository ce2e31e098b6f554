"""Independent oracles: direct O(M^2) transforms, direct conserved-quantity
sums over the full mode range -M..M, and a high-precision fixed-point
solver for the implicit step.  Everything here avoids the library's FFT
path and merged-boundary shortcuts."""

import math

import numpy as np


def dft_direct(w):
    """coeff_j = (1/2M) sum_k w_k exp(-i j x_k), j = -M..M-1, by summation."""
    n = len(w)
    M = n // 2
    ks = np.arange(-M, M)
    out = np.empty(n, dtype=complex)
    for idx, j in enumerate(range(-M, M)):
        out[idx] = np.sum(w * np.exp(-1j * j * ks * np.pi / M)) / n
    return out


def idft_direct(c):
    """values_k = sum_j coeff_j exp(i j x_k) by summation (weight 1 at j=-M)."""
    n = len(c)
    M = n // 2
    js = np.arange(-M, M)
    out = np.empty(n, dtype=complex)
    for idx, k in enumerate(range(-M, M)):
        out[idx] = np.sum(c * np.exp(1j * js * k * np.pi / M))
    return out


def unfold(c):
    """Stored coefficients j=-M..M-1 -> full vector j=-M..M (c_M = c_{-M})."""
    return np.concatenate([c, c[:1]])


def energy_direct(q, p, rho, g_coeffs, grid_M):
    """Prime-weighted quadratic part over j=-M..M plus nodal potential."""
    qf, pf = unfold(q), unfold(p)
    M = grid_M
    j = np.arange(-M, M + 1)
    om2 = rho + j.astype(float) ** 2
    w = np.ones(2 * M + 1)
    w[0] = w[-1] = 0.5
    quad = 0.5 * np.sum(w * (np.abs(pf) ** 2 + om2 * np.abs(qf) ** 2))
    u = idft_direct(q).real
    U = np.zeros_like(u)
    for m, cm in enumerate(g_coeffs, start=2):
        U += cm * u ** (m + 1) / (m + 1)
    return float(quad) + float(np.mean(U))


def momentum_direct(q, p, factors=None):
    """Double-prime sum -sum i j q_{-j} p_j over the full range j = -M..M."""
    qf, pf = unfold(q), unfold(p)
    M = len(q) // 2
    total = 0.0 + 0.0j
    for j in range(-M, M + 1):
        w = 0.25 if abs(j) == M else 1.0
        fac = 1.0 if factors is None else factors[abs(j)]
        total += -1j * j * w * fac * qf[-j + M] * pf[j + M]
    return total


def nonlinearity_direct(q, g_coeffs):
    """f(q) = -dft(g(idft(q))) by direct summation."""
    u = idft_direct(q).real
    g = np.zeros_like(u)
    for m, cm in enumerate(g_coeffs, start=2):
        g += cm * u ** m
    return -dft_direct(g)


def aavf_fixed_point_oracle(q, p, rho, g_coeffs, grid_M, h,
                            tol=1e-15, max_iters=500, gauss_points=50):
    """High-precision reference for one implicit step.

    Uses direct-summation transforms, closed-form phi values per mode, a
    dense Gauss-Legendre quadrature of the averaged force, and plain
    fixed-point iteration seeded with q_n.
    """
    M = grid_M
    j = np.arange(-M, M).astype(float)
    om = np.sqrt(rho + j * j)
    hw = h * om
    phi0 = np.cos(hw)
    phi1 = np.array([math.sin(x) / x if x != 0 else 1.0 for x in hw])
    phi2 = np.array([(1 - math.cos(x)) / x ** 2 if x != 0 else 0.5 for x in hw])

    nodes, weights = np.polynomial.legendre.leggauss(gauss_points)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights

    def avf(qa, qb):
        acc = np.zeros_like(qa)
        for x, wt in zip(nodes, weights):
            acc = acc + wt * nonlinearity_direct((1 - x) * qa + x * qb, g_coeffs)
        return acc

    base = phi0 * q + h * phi1 * p
    qi = q.copy()
    integral = avf(q, qi)
    for _ in range(max_iters):
        q_new = base + h * h * phi2 * integral
        if np.max(np.abs(q_new - qi)) <= tol * max(np.max(np.abs(q)), 1e-300):
            qi = q_new
            break
        qi = q_new
        integral = avf(q, qi)
    integral = avf(q, qi)
    q1 = base + h * h * phi2 * integral
    p1 = -h * om ** 2 * phi1 * q + phi0 * p + h * phi1 * integral
    return q1, p1
