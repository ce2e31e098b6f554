"""Semi-discrete wave system: nonlinearity, energy, momentum, actions,
their modified counterparts, initial data, and drift functionals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .spectral import (
    FrequencyTable,
    Grid,
    SymmetryError,
    dft,
    double_prime_weights,
    idft,
    sobolev_norm,
)

SINC_GUARD = 1e-8


class ResonantStepsizeError(ValueError):
    """sinc(h*omega/2) is (numerically) zero: modified quantities undefined."""


@dataclass(frozen=True)
class SystemSpec:
    """Nonlinearity g(u) = sum_{m>=2} g_m u^m and its potential U (U' = g, U(0)=0).

    ``g_coeffs`` lists (g_2, g_3, ...).  A general callable pair
    (g_func, U_func) may be supplied instead, which forfeits the
    exact-polynomial quadrature option in the integrator.
    """

    rho: float
    g_coeffs: tuple = ()
    g_func: Optional[Callable[[np.ndarray], np.ndarray]] = None
    U_func: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        object.__setattr__(self, "g_coeffs", tuple(float(c) for c in self.g_coeffs))
        if self.g_func is not None and self.U_func is None:
            raise ValueError("a callable g requires a matching potential U")

    @property
    def is_polynomial(self) -> bool:
        return self.g_func is None

    @property
    def degree(self) -> int:
        return 1 + len(self.g_coeffs) if self.g_coeffs else 0

    def g(self, u: np.ndarray) -> np.ndarray:
        if self.g_func is not None:
            return self.g_func(u)
        # Horner on g(u) = u^2 (g_2 + g_3 u + ...)
        acc = np.zeros_like(np.asarray(u, dtype=float))
        for c in reversed(self.g_coeffs):
            acc = acc * u + c
        return acc * u * u

    def U(self, u: np.ndarray) -> np.ndarray:
        if self.U_func is not None:
            return self.U_func(u)
        acc = np.zeros_like(np.asarray(u, dtype=float))
        for m, c in reversed(list(enumerate(self.g_coeffs, start=2))):
            acc = acc * u + c / (m + 1)
        return acc * u ** 3


@dataclass(frozen=True)
class State:
    """Positions and velocities in frequency space at one time."""

    q: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def copy(self) -> "State":
        return State(self.q.copy(), self.p.copy(), self.t)


def apply_nonlinearity(q: np.ndarray, spec: SystemSpec, grid: Grid) -> np.ndarray:
    """f(q) = -dft(g(idft(q))), the mode-space nonlinear force."""
    return -dft(spec.g(idft(q, grid)), grid)


def potential(q: np.ndarray, spec: SystemSpec, grid: Grid) -> float:
    """V(q) = (1/2M) sum_k U(u_k) with u the nodal field of q."""
    return float(np.mean(spec.U(idft(q, grid))))


def energy(state: State, spec: SystemSpec, freqs: FrequencyTable, grid: Grid) -> float:
    """Total energy H = (1/2) sum' (|p_j|^2 + omega_j^2 |q_j|^2) + V(q)."""
    quad = 0.5 * np.sum(np.abs(state.p) ** 2 + freqs.omega ** 2 * np.abs(state.q) ** 2)
    return float(quad) + potential(state.q, spec, grid)


def _momentum_sum(state: State, mode_factors: Optional[np.ndarray] = None) -> float:
    M = state.q.size // 2
    j = np.arange(-M, M)
    qm = state.q[(M - j) % (2 * M)]  # q_{-j}; merged entry covers j = +-M
    # The quarter-weighted +-M boundary terms are odd in j and cancel for
    # merged real storage, so the stored j = -M entry carries weight 0.
    w = double_prime_weights(M)
    w[0] = 0.0
    terms = -1j * j * qm * state.p * w
    if mode_factors is not None:
        terms = terms * mode_factors
    k = complex(np.sum(terms))
    if abs(k.imag) > 1e-12 * max(1.0, abs(k)):
        raise SymmetryError(f"momentum has imaginary residual {k.imag:.3e}")
    return k.real


def momentum(state: State) -> float:
    """K = -sum'' i j q_{-j} p_j (real for Hermitian-symmetric states)."""
    return _momentum_sum(state)


def actions(state: State, freqs: FrequencyTable) -> np.ndarray:
    """Per-mode actions I_l = (omega_l/2)|q_l|^2 + 1/(2 omega_l)|p_l|^2, l = 0..M."""
    M = freqs.M
    ql = np.concatenate([state.q[M:], state.q[:1]])  # l = 0..M-1 then merged l = M
    pl = np.concatenate([state.p[M:], state.p[:1]])
    w = freqs.omega_pos
    return 0.5 * w * np.abs(ql) ** 2 + 0.5 / w * np.abs(pl) ** 2


def modification_factor(h: float, omega: float) -> float:
    """cos(h*omega/2) / sinc(h*omega/2); 1 at h = 0 by continuity."""
    return float(modification_factors(h, np.asarray([omega], dtype=float))[0])


def modification_factors(h: float, omega: np.ndarray,
                         on_resonant: str = "raise") -> np.ndarray:
    """Vectorized modification factor; on_resonant is 'raise' or 'nan'."""
    x = 0.5 * h * np.asarray(omega, dtype=float)
    sinc = np.sinc(x / np.pi)  # sin(x)/x with value 1 at 0
    bad = np.abs(sinc) < SINC_GUARD
    if np.any(bad):
        if on_resonant == "raise":
            raise ResonantStepsizeError(
                f"sinc(h*omega/2) below {SINC_GUARD:g} at h={h}")
        out = np.full_like(x, np.nan)
        ok = ~bad
        out[ok] = np.cos(x[ok]) / sinc[ok]
        return out
    return np.cos(x) / sinc


def modified_actions(state: State, freqs: FrequencyTable, h: float) -> np.ndarray:
    """Actions rescaled modewise by the modification factor."""
    return modification_factors(h, freqs.omega_pos) * actions(state, freqs)


def modified_momentum(state: State, freqs: FrequencyTable, h: float) -> float:
    """Momentum with the per-mode cos/sinc factor."""
    return _momentum_sum(state, modification_factors(h, freqs.omega))


def initial_state(grid: Grid, freqs: FrequencyTable) -> State:
    """Benchmark initial data for the long-time drift experiment:

    u(x,0) = 0.1 (x/pi - 1)^3 (x/pi + 1)^2,
    u_t(x,0) = 0.01 (x/pi) (x/pi - 1) (x/pi + 1)^2.
    """
    r = grid.nodes / np.pi
    u = 0.1 * (r - 1) ** 3 * (r + 1) ** 2
    v = 0.01 * r * (r - 1) * (r + 1) ** 2
    return State(q=dft(u, grid), p=dft(v, grid), t=0.0)


def epsilon_estimate(state: State, freqs: FrequencyTable, s: float) -> float:
    """Smallness measure (||q||_{s+1}^2 + ||p||_s^2)^{1/2}."""
    return float(np.hypot(sobolev_norm(state.q, freqs, s + 1),
                          sobolev_norm(state.p, freqs, s)))


MOMENTUM_DENOM_GUARD = 1e-30


def drift_functionals(state: State, ref: State, freqs: FrequencyTable,
                      h: float, s: float) -> dict:
    """Relative drifts of momentum/actions and their modified counterparts.

    Action sums are weighted by omega_l^{2s+1}.  If |K(ref)| is below
    MOMENTUM_DENOM_GUARD the momentum drifts are reported as absolute
    errors and flagged.
    """
    w = freqs.omega_pos ** (2 * s + 1)

    k_ref, k_now = momentum(ref), momentum(state)
    mk_ref = modified_momentum(ref, freqs, h)
    mk_now = modified_momentum(state, freqs, h)
    momentum_absolute = abs(k_ref) < MOMENTUM_DENOM_GUARD
    if momentum_absolute:
        err_k = abs(k_now - k_ref)
        err_mk = abs(mk_now - mk_ref)
    else:
        err_k = abs(k_now - k_ref) / abs(k_ref)
        err_mk = abs(mk_now - mk_ref) / abs(mk_ref)

    i_ref, i_now = actions(ref, freqs), actions(state, freqs)
    mi_ref = modified_actions(ref, freqs, h)
    mi_now = modified_actions(state, freqs, h)
    err_i = np.sum(w * np.abs(i_now - i_ref)) / np.sum(w * np.abs(i_ref))
    err_mi = np.sum(w * np.abs(mi_now - mi_ref)) / np.sum(w * np.abs(mi_ref))

    return {
        "errK": float(err_k),
        "errMK": float(err_mk),
        "errI": float(err_i),
        "errMI": float(err_mi),
        "momentum_absolute": momentum_absolute,
    }
