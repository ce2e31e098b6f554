"""Non-resonance condition checkers and enumeration of near-resonant
index pairs.  Desk-scale diagnostic tools; the solver never needs them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

import numpy as np

from .integrator import phi
from .spectral import FrequencyTable

ENUMERATION_LIMIT = 20


class EnumerationTooLargeError(ValueError):
    """Requested k-lattice enumeration exceeds the desk-scale guard."""


@dataclass(frozen=True)
class ResonanceParams:
    epsilon: float
    h: float
    N: int
    M: int
    sigma: float = 0.0
    C0: float = 1.0

    def __post_init__(self):
        if not (0 <= self.epsilon <= 1):
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.h <= 0:
            raise ValueError(f"h must be positive, got {self.h}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")


@dataclass(frozen=True)
class KVector:
    """Integer mode-combination vector k = (k_0, ..., k_M)."""

    k: Tuple[int, ...]
    norm1: int
    k_dot_omega: float

    @staticmethod
    def make(k: Tuple[int, ...], omega_pos: np.ndarray) -> "KVector":
        k = tuple(int(x) for x in k)
        return KVector(k=k, norm1=sum(abs(x) for x in k),
                       k_dot_omega=float(np.dot(k, omega_pos[:len(k)])))

    def negate(self) -> Tuple[int, ...]:
        return tuple(-x for x in self.k)


def unit_kvector(j: int, M: int) -> Tuple[int, ...]:
    """Unit coordinate vector with entry 1 at position |j|."""
    k = [0] * (M + 1)
    k[abs(j)] = 1
    return tuple(k)


def _iter_k(length: int, budget: int) -> Iterator[Tuple[int, ...]]:
    # lexicographic over k_0, then the tail, within the 1-norm budget
    if length == 0:
        yield ()
        return
    for k0 in range(-budget, budget + 1):
        for tail in _iter_k(length - 1, budget - abs(k0)):
            yield (k0,) + tail


def enumerate_kvectors(freqs: FrequencyTable, params: ResonanceParams) -> List[KVector]:
    """All integer vectors over l = 0..M with 1-norm <= 2N, lexicographic."""
    if (params.M + 1) * params.N > ENUMERATION_LIMIT:
        raise EnumerationTooLargeError(
            f"(M+1)*N = {(params.M + 1) * params.N} exceeds {ENUMERATION_LIMIT}")
    return [KVector.make(k, freqs.omega_pos)
            for k in _iter_k(params.M + 1, 2 * params.N)]


def check_pair_nonres(j: int, k: KVector, freqs: FrequencyTable,
                      params: ResonanceParams) -> bool:
    """Stepsize non-resonance for the pair (j, k):

    |sin(h/2 (omega_j - k.w)) sin(h/2 (omega_j + k.w))|
        >= sqrt(eps) h^2 (omega_j + |k.w|).
    """
    h = params.h
    wj = float(freqs.omega_pos[abs(j)])
    kw = k.k_dot_omega
    lhs = abs(np.sin(0.5 * h * (wj - kw)) * np.sin(0.5 * h * (wj + kw)))
    rhs = np.sqrt(params.epsilon) * h * h * (wj + abs(kw))
    return bool(lhs >= rhs)


def near_resonant_set(freqs: FrequencyTable,
                      params: ResonanceParams) -> List[Tuple[int, KVector]]:
    """All (j, k) with |j| <= M, ||k|| <= 2N, k != +-<j>, that fail the
    stepsize non-resonance inequality.  Sorted by (j, lexicographic k)."""
    out = []
    kvecs = enumerate_kvectors(freqs, params)
    for j in range(-params.M, params.M + 1):
        unit = unit_kvector(j, params.M)
        neg_unit = tuple(-x for x in unit)
        for k in kvecs:
            if k.k == unit or k.k == neg_unit:
                continue
            if not check_pair_nonres(j, k, freqs, params):
                out.append((j, k))
    out.sort(key=lambda jk: (jk[0], jk[1].k))
    return out


def check_numerical_nonres(freqs: FrequencyTable,
                           params: ResonanceParams) -> np.ndarray:
    """Per-mode flags for |sin(h omega_j)| >= h sqrt(eps), l = 0..M."""
    lhs = np.abs(np.sin(params.h * freqs.omega_pos[:params.M + 1]))
    return lhs >= params.h * np.sqrt(params.epsilon)


def check_two_mode_nonres(j1: int, j2: int, signs: Tuple[int, int],
                          freqs: FrequencyTable, params: ResonanceParams,
                          c: float) -> bool:
    """Improved-estimate condition for j = j1 + j2 and k = s1<j1> + s2<j2>:

    |sin(h/2 (omega_j - k.w)) sin(h/2 (omega_j + k.w))| >= c h^2 |2 phi2((h omega_j)^2)|.
    """
    s1, s2 = signs
    if abs(s1) != 1 or abs(s2) != 1:
        raise ValueError("signs must be +-1")
    j = j1 + j2
    if abs(j) > params.M:
        raise ValueError(f"|j1 + j2| = {abs(j)} exceeds M = {params.M}")
    h = params.h
    wj = float(freqs.omega_pos[abs(j)])
    kw = s1 * float(freqs.omega_pos[abs(j1)]) + s2 * float(freqs.omega_pos[abs(j2)])
    lhs = abs(np.sin(0.5 * h * (wj - kw)) * np.sin(0.5 * h * (wj + kw)))
    rhs = c * h * h * abs(2.0 * phi(2, (h * wj) ** 2))
    return bool(lhs >= rhs)


def resonance_report(freqs: FrequencyTable, params: ResonanceParams) -> dict:
    """Structured summary: near-resonant pairs, per-mode numerical
    non-resonance flags, and the near-resonant supremum versus C0 eps^N."""
    pairs = near_resonant_set(freqs, params)
    numerical = check_numerical_nonres(freqs, params)

    sup = 0.0
    sup_pair = None
    for j, k in pairs:
        wj = float(freqs.omega_pos[abs(j)])
        wk = float(np.prod(freqs.omega_pos[:params.M + 1]
                           ** (params.sigma * np.abs(k.k))))
        val = wj ** params.sigma / wk * params.epsilon ** (k.norm1 / 2.0)
        if val > sup:
            sup, sup_pair = val, (j, k.k)
    threshold = params.C0 * params.epsilon ** params.N

    return {
        "near_resonant_pairs": [(j, k.k) for j, k in pairs],
        "near_resonant_count": len(pairs),
        "numerical_nonres_flags": numerical,
        "numerical_nonres_all_pass": bool(np.all(numerical)),
        "sup_near_resonant": sup,
        "sup_pair": sup_pair,
        "threshold": threshold,
        "verdict_pass": bool(sup <= threshold),
    }


def format_report(report: dict, params: ResonanceParams) -> str:
    """Render the report as deterministic key: value lines."""
    lines = [
        f"epsilon: {params.epsilon:.17g}",
        f"h: {params.h:.17g}",
        f"N: {params.N}",
        f"M: {params.M}",
        f"sigma: {params.sigma:.17g}",
        f"C0: {params.C0:.17g}",
        f"near_resonant_count: {report['near_resonant_count']}",
    ]
    for j, k in report["near_resonant_pairs"]:
        lines.append(f"near_resonant_pair: j={j} k={','.join(map(str, k))}")
    flags = "".join("1" if f else "0" for f in report["numerical_nonres_flags"])
    lines.append(f"numerical_nonres_flags: {flags}")
    lines.append(f"numerical_nonres_all_pass: {report['numerical_nonres_all_pass']}")
    lines.append(f"sup_near_resonant: {report['sup_near_resonant']:.17g}")
    lines.append(f"threshold_C0_epsN: {report['threshold']:.17g}")
    lines.append(f"verdict: {'pass' if report['verdict_pass'] else 'fail'}")
    return "\n".join(lines)
