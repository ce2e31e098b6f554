"""Periodic grid, discrete Fourier transforms, and weighted mode norms.

Fourier coefficients are stored for modes j = -M..M-1 (length 2M, array
index j + M).  The single stored j = -M entry represents the merged +-M
boundary pair of a real trigonometric polynomial; prime-weighted sums give
it weight 1 and double-prime-weighted sums weight 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SymmetryError(ValueError):
    """Mode data violates the Hermitian symmetry required for real fields."""


@dataclass(frozen=True)
class Grid:
    """Equidistant periodic grid x_k = k*pi/M for k = -M..M-1."""

    M: int

    def __post_init__(self):
        if self.M < 2:
            raise ValueError(f"need 2M >= 4, got M={self.M}")

    @property
    def n(self) -> int:
        return 2 * self.M

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(-self.M, self.M) * (np.pi / self.M)


@dataclass(frozen=True)
class FrequencyTable:
    """Mode frequencies omega_j = sqrt(rho + j^2).

    ``omega`` is in stored order j = -M..M-1; ``omega_pos`` holds
    omega_l for l = 0..M.
    """

    rho: float
    M: int
    omega: np.ndarray
    omega_pos: np.ndarray


def build_frequencies(rho: float, M: int) -> FrequencyTable:
    """Frequency table omega_j = sqrt(rho + j^2) for |j| <= M."""
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    j = np.arange(-M, M, dtype=float)
    omega = np.sqrt(rho + j * j)
    l = np.arange(0, M + 1, dtype=float)
    omega_pos = np.sqrt(rho + l * l)
    omega.flags.writeable = False
    omega_pos.flags.writeable = False
    return FrequencyTable(rho=rho, M=M, omega=omega, omega_pos=omega_pos)


def double_prime_weights(M: int) -> np.ndarray:
    """Summation weights for double-prime sums over stored modes."""
    w = np.ones(2 * M)
    w[0] = 0.5
    return w


def dft(field: np.ndarray, grid: Grid) -> np.ndarray:
    """Forward transform: coeff_j = (1/2M) sum_k w_k exp(-i j x_k).

    Input is a real nodal field of length 2M; output coefficients are in
    stored order j = -M..M-1 and Hermitian-symmetric up to roundoff.
    """
    field = np.asarray(field)
    if field.shape != (grid.n,):
        raise ValueError(f"field length {field.shape} does not match grid 2M={grid.n}")
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(field))) / grid.n


def idft(modes: np.ndarray, grid: Grid) -> np.ndarray:
    """Inverse transform: values_k = sum_j coeff_j exp(i j x_k), real output.

    Raises SymmetryError if the reconstructed field is not real to
    1e-8 relative (i.e. the input was not Hermitian-symmetric).
    """
    modes = np.asarray(modes, dtype=complex)
    if modes.shape != (grid.n,):
        raise ValueError(f"mode vector length {modes.shape} does not match grid 2M={grid.n}")
    vals = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(modes))) * grid.n
    scale = np.max(np.abs(vals))
    if scale > 0 and np.max(np.abs(vals.imag)) > 1e-8 * scale:
        raise SymmetryError("inverse transform produced a non-real field")
    return vals.real


def symmetry_residual(modes: np.ndarray) -> float:
    """Max deviation from coeff(-j) = conj(coeff(j)), scaled by max|coeff|."""
    c = np.asarray(modes, dtype=complex)
    M = c.size // 2
    scale = np.max(np.abs(c))
    if scale == 0:
        return 0.0
    res = max(abs(c[0].imag), abs(c[M].imag))
    if M > 1:
        inner = c[M + 1:]            # j = 1..M-1
        mirror = c[1:M][::-1]        # j = -1..-(M-1)
        res = max(res, np.max(np.abs(inner - np.conj(mirror))))
    return res / scale


def check_symmetry(modes: np.ndarray, tol: float = 1e-12) -> None:
    """Raise SymmetryError unless the Hermitian-symmetry residual is <= tol."""
    r = symmetry_residual(modes)
    if r > tol:
        raise SymmetryError(f"Hermitian symmetry residual {r:.3e} exceeds {tol:.1e}")


def sobolev_norm(modes: np.ndarray, freqs: FrequencyTable, s: float) -> float:
    """Weighted norm (sum'' omega_j^{2s} |coeff_j|^2)^{1/2}."""
    if s < 0:
        raise ValueError(f"s must be nonnegative, got {s}")
    c = np.asarray(modes)
    w = double_prime_weights(freqs.M)
    return float(np.sqrt(np.sum(w * freqs.omega ** (2 * s) * np.abs(c) ** 2)))
