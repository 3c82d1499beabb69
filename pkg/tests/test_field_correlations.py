import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from unruh_oqs.errors import ConvergenceError, DomainError
from unruh_oqs.field_correlations import (QuadratureConfig, TrajectoryParams, fourier_g,
                                          fourier_g_numeric, hilbert_k_acc, unruh_beta,
                                          wightman_along_trajectory)


def test_unruh_beta_roundtrip():
    assert unruh_beta(2 * math.pi) == pytest.approx(1.0, rel=1e-15)
    p = TrajectoryParams.from_beta(0.37)
    assert p.beta_u == pytest.approx(0.37, rel=1e-15)
    with pytest.raises(DomainError):
        unruh_beta(0.0)


def test_zero_frequency_limit():
    for beta in (0.1, 1.0, 10.0):
        assert fourier_g(0.0, beta) == pytest.approx(1 / (2 * math.pi * beta), rel=1e-15)
        # continuity through lambda = 0
        assert fourier_g(1e-9, beta) == pytest.approx(fourier_g(0.0, beta), rel=1e-8)


def test_closed_form_values():
    assert fourier_g(1.0, 1.0) == pytest.approx(0.25177941275449167, rel=1e-14)
    assert fourier_g(-1.0, 1.0) == pytest.approx(math.exp(-1) * 0.25177941275449167, rel=1e-14)


def test_vectorized_matches_scalar():
    lams = np.linspace(-4, 4, 17)
    vec = fourier_g(lams, 0.8)
    assert np.allclose(vec, [fourier_g(float(x), 0.8) for x in lams], rtol=1e-15, atol=0)


def test_large_arguments_do_not_overflow():
    assert fourier_g(-800.0, 1.0) >= 0.0
    assert fourier_g(800.0, 1.0) == pytest.approx(800 / (2 * math.pi), rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(lam=st.floats(0.01, 20), beta=st.floats(0.05, 20))
def test_kms_property(lam, beta):
    g_plus, g_minus = fourier_g(lam, beta), fourier_g(-lam, beta)
    assert g_minus == pytest.approx(math.exp(-beta * lam) * g_plus, rel=1e-12)
    assert g_plus - g_minus == pytest.approx(lam / (2 * math.pi), rel=1e-12)


def test_wightman_short_distance_and_time_reversal():
    p = TrajectoryParams(acceleration=1.0, epsilon=1e-2)
    t = 1e-1
    w = wightman_along_trajectory(p, t)
    flat = -1 / (4 * math.pi ** 2 * (t - 1j * p.epsilon) ** 2)
    assert abs(w - flat) / abs(flat) < 2e-3
    # reversing time conjugates the regulated function
    assert wightman_along_trajectory(p, -t) == pytest.approx(np.conj(w), rel=1e-14)


@pytest.mark.parametrize("lam", [-2.0, -0.5, 0.0, 0.5, 1.0, 2.0])
def test_numeric_fourier_matches_closed_form(lam):
    p = TrajectoryParams(acceleration=2 * math.pi)
    assert fourier_g_numeric(lam, p) == pytest.approx(fourier_g(lam, 1.0), rel=1e-9)


def test_numeric_fourier_other_acceleration():
    p = TrajectoryParams(acceleration=0.7)
    assert fourier_g_numeric(0.3, p) == pytest.approx(fourier_g(0.3, p.beta_u), rel=1e-8)


def test_numeric_fourier_rejects_oversized_regulator():
    p = TrajectoryParams(acceleration=400.0)
    with pytest.raises(DomainError):
        fourier_g_numeric(1.0, p)


def test_numeric_fourier_reports_unconverged_extrapolation():
    with pytest.raises(ConvergenceError):
        fourier_g_numeric(10.0, TrajectoryParams(acceleration=2 * math.pi))


def test_quadrature_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(nodes=4)
    with pytest.raises(DomainError):
        QuadratureConfig(eps_ladder=(0.01, 0.02))
    with pytest.raises(DomainError):
        QuadratureConfig(pv_window=0.0)


def _k_reference(lam, beta):
    """Independent principal values via QUADPACK's Cauchy weight."""
    def n(z):
        return z / math.expm1(beta * z) if z > 0 else 1 / beta

    def pv(c):
        zmax = abs(c) + 60 / beta
        if c <= 0:
            return integrate.quad(lambda z: n(z) / (z - c), 0, zmax, limit=400,
                                  epsabs=1e-15, epsrel=1e-13)[0]
        return integrate.quad(n, 0, zmax, weight="cauchy", wvar=c, limit=400,
                              epsabs=1e-15, epsrel=1e-13)[0]

    return (pv(lam) - pv(-lam)) / (2 * math.pi ** 2)


@pytest.mark.parametrize("beta", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("lam", [0.1, 1.0, 3.0, -2.0])
def test_hilbert_transform_against_quadpack(lam, beta):
    assert hilbert_k_acc(lam, beta) == pytest.approx(_k_reference(lam, beta), rel=1e-9, abs=1e-14)


def test_hilbert_transform_odd_and_vanishing_at_zero():
    assert hilbert_k_acc(0.0, 1.0) == 0.0
    assert hilbert_k_acc(-1.3, 0.7) == pytest.approx(-hilbert_k_acc(1.3, 0.7), rel=1e-12)


def test_hilbert_transform_fades_at_low_temperature():
    # the finite-temperature piece vanishes as beta_u grows
    vals = [abs(hilbert_k_acc(1.0, b)) for b in (1.0, 5.0, 50.0)]
    assert vals[0] > vals[1] > vals[2]
