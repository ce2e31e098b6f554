"""AAVF time stepper: phi-functions, averaged-vector-field quadrature,
fixed-point solution of the implicit update, and reference propagators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .spectral import FrequencyTable, Grid, dft, idft
from .system import ResonantStepsizeError, State, SystemSpec, apply_nonlinearity

PHI_SERIES_CUTOFF = 1e-4


class NonConvergenceError(RuntimeError):
    """Fixed-point iteration failed to reach the requested tolerance."""

    def __init__(self, message: str, residual: float, step_index: Optional[int] = None):
        super().__init__(message)
        self.residual = residual
        self.step_index = step_index


@dataclass(frozen=True)
class StepperConfig:
    h: float
    quadrature: str = "exact"
    fp_tol: float = 1e-13
    fp_max_iters: int = 100

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError(f"stepsize must be positive, got {self.h}")
        if not (0 < self.fp_tol < 1e-6):
            raise ValueError(f"fp_tol must be in (0, 1e-6), got {self.fp_tol}")
        _parse_quadrature(self.quadrature)


def _parse_quadrature(quadrature: str):
    if quadrature in ("exact", "midpoint"):
        return (quadrature, 0)
    if quadrature.startswith("gauss:"):
        n = int(quadrature.split(":", 1)[1])
        if n < 1:
            raise ValueError(f"gauss point count must be >= 1, got {n}")
        return ("gauss", n)
    raise ValueError(f"unknown quadrature {quadrature!r}")


# phi_l(v) = sum_k (-1)^k v^k / (2k+l)!; series through k=4 near v = 0.
_PHI_SERIES = {
    l: np.array([(-1.0) ** k / math.factorial(2 * k + l) for k in range(5)])
    for l in (0, 1, 2)
}


def phi(l: int, v) -> Union[float, np.ndarray]:
    """phi_0 = cos(sqrt v), phi_1 = sinc(sqrt v), phi_2 = (1 - cos(sqrt v))/v.

    Argument v = (h*omega)^2 >= 0.  Small arguments use the truncated
    series to avoid cancellation.
    """
    if l not in (0, 1, 2):
        raise ValueError(f"phi index must be 0, 1 or 2, got {l}")
    v_arr = np.asarray(v, dtype=float)
    if np.any(v_arr < 0):
        raise ValueError("phi argument must be nonnegative")
    scalar = v_arr.ndim == 0
    v_arr = np.atleast_1d(v_arr)

    out = np.empty_like(v_arr)
    small = v_arr < PHI_SERIES_CUTOFF
    if np.any(small):
        out[small] = np.polyval(_PHI_SERIES[l][::-1], v_arr[small])
    big = ~small
    if np.any(big):
        r = np.sqrt(v_arr[big])
        if l == 0:
            out[big] = np.cos(r)
        elif l == 1:
            out[big] = np.sin(r) / r
        else:
            # 1 - cos(r) = 2 sin^2(r/2), stable for small r
            out[big] = 2.0 * np.sin(0.5 * r) ** 2 / v_arr[big]
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class PhiTable:
    """Per-mode phi-function values for one stepsize."""

    h: float
    phi0: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray


def build_phi_table(freqs: FrequencyTable, h: float) -> PhiTable:
    v = (h * freqs.omega) ** 2
    return PhiTable(h=h, phi0=phi(0, v), phi1=phi(1, v), phi2=phi(2, v))


def avf_integral(qa: np.ndarray, qb: np.ndarray, spec: SystemSpec, grid: Grid,
                 quadrature: str = "exact") -> np.ndarray:
    """Approximate integral_0^1 f((1-sigma) qa + sigma qb) d sigma.

    'exact' integrates the polynomial g along the nodal segment in closed
    form; 'midpoint' evaluates f at the segment midpoint; 'gauss:n' uses
    n-point Gauss-Legendre on [0, 1].
    """
    kind, n = _parse_quadrature(quadrature)
    if kind == "midpoint":
        return apply_nonlinearity(0.5 * (qa + qb), spec, grid)

    a = idft(qa, grid)
    b = idft(qb, grid)
    if kind == "exact":
        if not spec.is_polynomial:
            raise ValueError("exact quadrature requires a polynomial nonlinearity")
        # integral_0^1 ((1-s)a + s b)^m ds = (1/(m+1)) sum_{i=0}^m a^i b^{m-i}
        acc = np.zeros_like(a)
        for m, c in enumerate(spec.g_coeffs, start=2):
            if c == 0.0:
                continue
            pow_sum = np.zeros_like(a)
            for i in range(m + 1):
                pow_sum += a ** i * b ** (m - i)
            acc += c / (m + 1) * pow_sum
        return -dft(acc, grid)

    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    acc = np.zeros_like(a)
    for x, w in zip(nodes, weights):
        acc += w * spec.g((1.0 - x) * a + x * b)
    return -dft(acc, grid)


def aavf_step(state: State, spec: SystemSpec, freqs: FrequencyTable, grid: Grid,
              cfg: StepperConfig, h: Optional[float] = None,
              table: Optional[PhiTable] = None) -> State:
    """One step of the energy-preserving trigonometric integrator:

        q1 = phi0 q0 + h phi1 p0 + h^2 phi2 * I(q0, q1)
        p1 = -h Omega^2 phi1 q0 + phi0 p0 + h phi1 * I(q0, q1)

    with I the averaged-vector-field integral.  The implicit q-equation is
    solved by fixed-point iteration seeded with the linear flow; both
    update lines share one converged integral evaluation.  ``h`` may be
    negative (used by the symmetry tests); the phi-table depends on h^2
    only.
    """
    if h is None:
        h = cfg.h
    if table is None or table.h != abs(h):
        table = build_phi_table(freqs, abs(h))
    q0, p0 = state.q, state.p
    base = table.phi0 * q0 + h * table.phi1 * p0
    h2phi2 = h * h * table.phi2
    scale = max(float(np.max(np.abs(q0))), float(np.max(np.abs(base))), 1e-300)

    qi = base
    converged = False
    residual = 0.0
    for _ in range(cfg.fp_max_iters):
        integral = avf_integral(q0, qi, spec, grid, cfg.quadrature)
        q_new = base + h2phi2 * integral
        residual = float(np.max(np.abs(q_new - qi)))
        qi = q_new
        if residual <= cfg.fp_tol * scale:
            converged = True
            break
    if not converged:
        raise NonConvergenceError(
            f"fixed point did not reach {cfg.fp_tol:g} relative "
            f"(last residual {residual:.3e}, scale {scale:.3e})",
            residual=residual)

    # One closing evaluation so both lines use the same integral and the
    # residual shrinks by another contraction factor.
    integral = avf_integral(q0, qi, spec, grid, cfg.quadrature)
    q1 = base + h2phi2 * integral
    p1 = -h * freqs.omega ** 2 * table.phi1 * q0 + table.phi0 * p0 \
        + h * table.phi1 * integral
    return State(q=q1, p=p1, t=state.t + h)


def exact_linear_step(state: State, freqs: FrequencyTable, h: float) -> State:
    """Exact flow of the linear system (g = 0): rotation in each mode plane."""
    w = freqs.omega
    c = np.cos(h * w)
    s = np.sin(h * w)
    q1 = c * state.q + (s / w) * state.p
    p1 = -w * s * state.q + c * state.p
    return State(q=q1, p=p1, t=state.t + h)


def qp_relation_residual(prev: State, next: State, freqs: FrequencyTable,
                         h: float) -> float:
    """Residual of q1 - q0 = Omega^{-1} tan(h Omega / 2) (p1 + p0),
    max-norm scaled by max|q0|."""
    x = 0.5 * h * freqs.omega
    cosx = np.cos(x)
    if np.any(np.abs(cosx) < 1e-8):
        raise ResonantStepsizeError("tan(h*omega/2) unbounded for some mode")
    coef = np.tan(x) / freqs.omega
    r = next.q - prev.q - coef * (next.p + prev.p)
    scale = max(float(np.max(np.abs(prev.q))), 1e-300)
    return float(np.max(np.abs(r))) / scale


def integrate(state: State, spec: SystemSpec, freqs: FrequencyTable, grid: Grid,
              cfg: StepperConfig, n_steps: int, sample_every: int = 1,
              observer: Optional[Callable[[int, State], None]] = None) -> State:
    """Apply ``n_steps`` AAVF steps, invoking ``observer(step, state)`` at
    step 0 and every ``sample_every`` steps.  Returns the final state.
    Deterministic: identical inputs give bitwise-identical trajectories."""
    if n_steps < 0:
        raise ValueError(f"n_steps must be nonnegative, got {n_steps}")
    table = build_phi_table(freqs, cfg.h)
    if observer is not None:
        observer(0, state)
    for n in range(1, n_steps + 1):
        try:
            state = aavf_step(state, spec, freqs, grid, cfg, table=table)
        except NonConvergenceError as exc:
            exc.step_index = n
            raise
        if observer is not None and n % sample_every == 0:
            observer(n, state)
    return state
