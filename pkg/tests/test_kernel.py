import math

import mpmath
import numpy as np
import pytest

from causalwavelet.errors import InvalidParam, SupportUnbounded
from causalwavelet.kernel import WaveletParams, effective_support, psi
from causalwavelet.mlf import MlfMode, MlfParams, modulation


def stretched(alpha, causal=True, eps=1e-6):
    return WaveletParams.create(alpha, causal, MlfMode.STRETCHED_EXP, eps)


def test_causal_zero_branch():
    assert psi(stretched(2.0), -1.0) == 0j


def test_value_at_origin():
    assert psi(stretched(2.0), 0.0) == 1 + 0j
    assert psi(stretched(2.0, causal=False), 0.0) == 1 + 0j


def test_quarter_period():
    # direct evaluation exp(-(pi/2)^2) * (cos(pi/2) + i sin(pi/2)), done in mpmath
    with mpmath.workdps(30):
        expected = complex(mpmath.exp(-((mpmath.pi / 2) ** 2)) * mpmath.expj(mpmath.pi / 2))
    got = psi(stretched(2.0), math.pi / 2)
    assert got.real == pytest.approx(expected.real, abs=1e-15)
    assert got.imag == pytest.approx(expected.imag, rel=1e-14)
    assert got.imag == pytest.approx(0.0848049725, abs=1e-10)


def test_causal_kernel_vanishes_for_negative_lag():
    for alpha in (0.5, 1.0, 2.0):
        p = WaveletParams.create(alpha, True)
        assert np.all(psi(p, np.linspace(-20, -1e-9, 500)) == 0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 4.0])
@pytest.mark.parametrize("causal", [True, False])
def test_magnitude_bounded_by_modulation(alpha, causal):
    p = WaveletParams.create(alpha, causal)
    sigma = np.linspace(-12, 12, 961)
    mag = np.abs(psi(p, sigma))
    m = np.abs(modulation(p.mlf, sigma))
    assert np.all(mag <= m + 1e-15)
    assert np.all(m <= 1 + 1e-15)
    pos = sigma >= 0
    np.testing.assert_allclose(mag[pos], m[pos], rtol=1e-14, atol=1e-300)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 4.0])
def test_real_and_imaginary_parts(alpha):
    p = WaveletParams.create(alpha, True)
    assert psi(p, 0.0).real == 1.0
    assert psi(p, 0.0).imag == 0.0
    sigma = np.linspace(1e-3, 4.0, 4000)
    im = psi(p, sigma).imag
    first_zero = sigma[np.flatnonzero(np.diff(np.sign(im)) != 0)[0]]
    assert first_zero == pytest.approx(math.pi, abs=2e-3)


def test_support_gaussian():
    assert effective_support(stretched(2.0)) == pytest.approx(math.sqrt(math.log(1e6)), rel=1e-9)


def test_support_exponential_series_mode():
    p = WaveletParams.create(1.0, True, MlfMode.SERIES_AUTO, 1e-6)
    assert effective_support(p) == pytest.approx(math.log(1e6), rel=1e-9)


def test_support_alpha_half_against_grid_scan():
    # dense geometric scan of exp(s) erfc(sqrt(s)) = E_{1/2}(-sqrt(s)) in mpmath brackets the
    # crossing of 1e-3 to [318302.46, 318328.12]
    p = WaveletParams.create(0.5, True, MlfMode.SERIES_AUTO, 1e-3)
    got = effective_support(p)
    assert 318302.46 <= got <= 318328.12
    assert modulation(p.mlf, got) < 1e-3 <= modulation(p.mlf, got * (1 - 1e-9))


def test_support_alpha_half_stretched_closed_form():
    assert effective_support(stretched(0.5, eps=1e-3)) == pytest.approx(math.log(1e3) ** 2, rel=1e-9)


def test_larger_alpha_smaller_support():
    radii = [effective_support(stretched(a)) for a in (0.5, 1.0, 2.0, 4.0)]
    assert all(b < a for a, b in zip(radii, radii[1:]))


def test_support_unbounded():
    p = WaveletParams.create(0.5, True, MlfMode.SERIES_AUTO, 1e-6)
    with pytest.raises(SupportUnbounded):
        effective_support(p, limit=1e6)


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.5])
def test_invalid_support_eps(eps):
    with pytest.raises(InvalidParam):
        WaveletParams(2.0, True, None, eps)


def test_mismatched_alpha_rejected():
    with pytest.raises(InvalidParam):
        WaveletParams(2.0, True, MlfParams(1.0), 1e-6)


def test_default_params_are_gaussian_causal():
    p = WaveletParams()
    assert p.causal and p.alpha == 2.0 and p.mlf.mode is MlfMode.STRETCHED_EXP
