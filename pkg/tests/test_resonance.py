import itertools

import numpy as np
import pytest

from aavfwave import (
    EnumerationTooLargeError,
    KVector,
    ResonanceParams,
    build_frequencies,
    check_numerical_nonres,
    check_pair_nonres,
    check_two_mode_nonres,
    near_resonant_set,
    resonance_report,
)
from aavfwave.integrator import phi
from aavfwave.resonance import enumerate_kvectors, format_report, unit_kvector


def brute_force_near_resonant(freqs, params):
    """Independent enumeration with itertools and inline condition checks."""
    M, N, h, eps = params.M, params.N, params.h, params.epsilon
    om = freqs.omega_pos
    out = []
    ranges = [range(-2 * N, 2 * N + 1)] * (M + 1)
    for j in range(-M, M + 1):
        for k in itertools.product(*ranges):
            if sum(abs(x) for x in k) > 2 * N:
                continue
            unit = [0] * (M + 1)
            unit[abs(j)] = 1
            if list(k) == unit or list(k) == [-x for x in unit]:
                continue
            kw = sum(kl * om[l] for l, kl in enumerate(k))
            lhs = abs(np.sin(h / 2 * (om[abs(j)] - kw))
                      * np.sin(h / 2 * (om[abs(j)] + kw)))
            rhs = np.sqrt(eps) * h * h * (om[abs(j)] + abs(kw))
            if lhs < rhs:
                out.append((j, tuple(k)))
    out.sort()
    return out


def test_pair_k_equals_unit_fails():
    fr = build_frequencies(0.5, 2)
    params = ResonanceParams(epsilon=1e-4, h=0.05, N=1, M=2)
    k = KVector.make(unit_kvector(1, 2), fr.omega_pos)
    # lhs contains sin(0) -> 0 < rhs
    assert not check_pair_nonres(1, k, fr, params)


def test_pair_direct_evaluation():
    fr = build_frequencies(0.5, 1)
    params = ResonanceParams(epsilon=1e-4, h=0.05, N=1, M=1)
    k = KVector.make((0, 2), fr.omega_pos)  # k = 2<1>
    h, eps = 0.05, 1e-4
    wj = fr.omega_pos[0]
    kw = 2 * fr.omega_pos[1]
    lhs = abs(np.sin(h / 2 * (wj - kw)) * np.sin(h / 2 * (wj + kw)))
    rhs = np.sqrt(eps) * h * h * (wj + abs(kw))
    assert check_pair_nonres(0, k, fr, params) == (lhs >= rhs)


def test_pair_monotone_in_epsilon():
    fr = build_frequencies(0.5, 2)
    rng = np.random.default_rng(1)
    for _ in range(50):
        k = KVector.make(tuple(rng.integers(-2, 3, size=3)), fr.omega_pos)
        j = int(rng.integers(-2, 3))
        big = ResonanceParams(epsilon=1e-2, h=0.05, N=1, M=2)
        small = ResonanceParams(epsilon=1e-6, h=0.05, N=1, M=2)
        if check_pair_nonres(j, k, fr, big):
            assert check_pair_nonres(j, k, fr, small)


def test_pair_symmetric_in_k_sign():
    fr = build_frequencies(0.5, 2)
    params = ResonanceParams(epsilon=1e-3, h=0.07, N=1, M=2)
    rng = np.random.default_rng(2)
    for _ in range(50):
        kt = tuple(int(x) for x in rng.integers(-2, 3, size=3))
        k = KVector.make(kt, fr.omega_pos)
        kneg = KVector.make(k.negate(), fr.omega_pos)
        j = int(rng.integers(-2, 3))
        assert check_pair_nonres(j, k, fr, params) \
            == check_pair_nonres(j, kneg, fr, params)


def test_kvector_count_m1_n1():
    fr = build_frequencies(0.5, 1)
    params = ResonanceParams(epsilon=1e-4, h=0.05, N=1, M=1)
    assert len(enumerate_kvectors(fr, params)) == 13


def test_enumeration_guard():
    fr = build_frequencies(0.5, 64)
    params = ResonanceParams(epsilon=1e-4, h=0.05, N=2, M=64)
    with pytest.raises(EnumerationTooLargeError):
        near_resonant_set(fr, params)


def test_near_resonant_excludes_unit_vectors():
    fr = build_frequencies(0.5, 2)
    params = ResonanceParams(epsilon=0.5, h=0.3, N=1, M=2)
    pairs = near_resonant_set(fr, params)
    for j, k in pairs:
        assert k.k != unit_kvector(j, 2)
        assert k.k != tuple(-x for x in unit_kvector(j, 2))


@pytest.mark.parametrize("M,N", [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2),
                                 (2, 2), (5, 1), (0, 6), (1, 3)])
def test_near_resonant_matches_brute_force(M, N):
    fr = build_frequencies(0.5, max(M, 2))
    params = ResonanceParams(epsilon=1e-2, h=0.05, N=N, M=M)
    got = sorted((j, k.k) for j, k in near_resonant_set(fr, params))
    assert got == brute_force_near_resonant(fr, params)


def test_near_resonant_monotone_in_epsilon():
    fr = build_frequencies(0.5, 2)
    big = ResonanceParams(epsilon=0.5, h=0.3, N=1, M=2)
    small = ResonanceParams(epsilon=1e-3, h=0.3, N=1, M=2)
    set_big = {(j, k.k) for j, k in near_resonant_set(fr, big)}
    set_small = {(j, k.k) for j, k in near_resonant_set(fr, small)}
    assert set_small <= set_big


def test_numerical_nonres_benchmark_value():
    fr = build_frequencies(0.5, 64)
    params = ResonanceParams(epsilon=0.01, h=0.05, N=1, M=64)
    flags = check_numerical_nonres(fr, params)
    lhs0 = abs(np.sin(0.05 * np.sqrt(0.5)))
    assert abs(lhs0 - 0.0353480) < 1e-6
    assert flags[0]  # 0.0353480 >= 0.05*0.1 = 0.005


def test_numerical_nonres_sine_zero_fails():
    # h*omega_1 = pi exactly
    fr = build_frequencies(0.5, 1)
    h = np.pi / fr.omega_pos[1]
    params = ResonanceParams(epsilon=1e-10, h=h, N=1, M=1)
    flags = check_numerical_nonres(fr, params)
    assert not flags[1]


def test_numerical_nonres_epsilon_zero_all_pass():
    fr = build_frequencies(0.5, 8)
    params = ResonanceParams(epsilon=0.0, h=0.05, N=1, M=8)
    assert np.all(check_numerical_nonres(fr, params))


def test_numerical_nonres_threshold_scaling():
    fr = build_frequencies(0.5, 8)
    small = ResonanceParams(epsilon=1e-4, h=0.3, N=1, M=8)
    big = ResonanceParams(epsilon=4e-4, h=0.3, N=1, M=8)  # doubles sqrt(eps)
    f_small = check_numerical_nonres(fr, small)
    f_big = check_numerical_nonres(fr, big)
    assert not np.any(~f_small & f_big)


def test_two_mode_trivial_c_zero():
    fr = build_frequencies(0.5, 4)
    params = ResonanceParams(epsilon=1e-4, h=0.05, N=1, M=4)
    assert check_two_mode_nonres(1, 2, (1, -1), fr, params, c=0.0)


def test_two_mode_direct_evaluation():
    # j1 = j2 = 1 with opposite signs: k.w = 0, j = 2
    fr = build_frequencies(0.5, 4)
    params = ResonanceParams(epsilon=1e-4, h=0.05, N=1, M=4)
    h, c = 0.05, 0.01
    wj = fr.omega_pos[2]
    lhs = np.sin(h / 2 * wj) ** 2
    rhs = c * h * h * abs(2 * phi(2, (h * wj) ** 2))
    assert check_two_mode_nonres(1, 1, (1, -1), fr, params, c=c) == (lhs >= rhs)


def test_two_mode_small_h_limit():
    # as h -> 0 the boolean is decided by |w_j^2 - (k.w)^2| >= 4c
    fr = build_frequencies(0.5, 4)
    j1, j2, signs = 1, 2, (1, 1)
    wj = fr.omega_pos[3]
    kw = fr.omega_pos[1] + fr.omega_pos[2]
    for c in (0.01, 0.1, 1.0, 10.0):
        limit = abs(wj ** 2 - kw ** 2) / 4 >= c
        params = ResonanceParams(epsilon=1e-4, h=1e-4, N=1, M=4)
        assert check_two_mode_nonres(j1, j2, signs, fr, params, c=c) == limit


def test_report_empty_set_passes():
    # large epsilon + huge h makes everything non-resonant? use tiny h and
    # tiny eps so the inequality holds for all pairs
    fr = build_frequencies(0.5, 1)
    params = ResonanceParams(epsilon=1e-12, h=0.05, N=1, M=1)
    rep = resonance_report(fr, params)
    if rep["near_resonant_count"] == 0:
        assert rep["sup_near_resonant"] == 0.0
        assert rep["verdict_pass"]


def test_report_single_pair_sup():
    fr = build_frequencies(0.5, 2)
    params = ResonanceParams(epsilon=0.3, h=0.4, N=1, M=2, sigma=1.0, C0=1.0)
    rep = resonance_report(fr, params)
    if rep["near_resonant_count"] > 0:
        j, k = rep["sup_pair"]
        wj = fr.omega_pos[abs(j)]
        wk = np.prod(fr.omega_pos ** (params.sigma * np.abs(np.array(k))))
        norm1 = sum(abs(x) for x in k)
        val = wj ** params.sigma / wk * params.epsilon ** (norm1 / 2)
        assert abs(rep["sup_near_resonant"] - val) < 1e-15


def test_report_deterministic_and_sorted():
    fr = build_frequencies(0.5, 2)
    params = ResonanceParams(epsilon=0.5, h=0.3, N=1, M=2)
    r1 = resonance_report(fr, params)
    r2 = resonance_report(fr, params)
    assert format_report(r1, params) == format_report(r2, params)
    pairs = r1["near_resonant_pairs"]
    assert pairs == sorted(pairs)


def test_params_validation():
    with pytest.raises(ValueError):
        ResonanceParams(epsilon=2.0, h=0.05, N=1, M=2)
    with pytest.raises(ValueError):
        ResonanceParams(epsilon=0.1, h=-1.0, N=1, M=2)
    with pytest.raises(ValueError):
        ResonanceParams(epsilon=0.1, h=0.05, N=0, M=2)
