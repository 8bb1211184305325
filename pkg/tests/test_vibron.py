import math

import numpy as np
import pytest

from revivalqpt.spectral import ValidationError
from revivalqpt.vibron import (
    CHI_C,
    VibronParams,
    build_vibron,
    vibron_exact_times,
    vibron_gap_thermodynamic,
    vibron_spectrum,
)


def test_dimension():
    for n, d in ((2, 2), (3, 2), (7, 4), (100, 51), (1001, 501)):
        assert VibronParams(n, 0.5).dim == d
        assert len(vibron_spectrum(VibronParams(n, 0.0))) == d


def test_chi0_harmonic():
    levels = vibron_spectrum(VibronParams(100, 0.0)).levels
    assert np.allclose(levels, 2.0 * np.arange(51), rtol=0, atol=1e-10)


def test_chi1_quadratic():
    n = 100
    levels = vibron_spectrum(VibronParams(n, 1.0)).levels
    k = np.arange(len(levels), dtype=float)
    exact = (4.0 / (n - 1.0)) * ((n + 0.5) * k - k ** 2)
    assert np.all(np.abs(levels - exact) <= 1e-8 * np.abs(exact) + 1e-10)


def test_n2_matrix_and_spectrum():
    m = build_vibron(VibronParams(2, 0.5))
    assert np.allclose(m.diag, [1.0, 3.0], rtol=0, atol=1e-14)
    assert np.allclose(m.offdiag, [math.sqrt(2.0)], rtol=0, atol=1e-14)
    levels = vibron_spectrum(VibronParams(2, 0.5)).levels
    expect = [2.0 - math.sqrt(3.0), 2.0 + math.sqrt(3.0)]
    assert np.allclose(levels, expect, rtol=0, atol=1e-12)


def test_n3_chi1_spectrum():
    levels = vibron_spectrum(VibronParams(3, 1.0)).levels
    assert np.allclose(levels, [0.0, 5.0], rtol=0, atol=1e-12)


def test_matrix_elements_against_direct_loop():
    n, chi = 7, 0.3
    m = build_vibron(VibronParams(n, chi))

    def a(k):
        return (n - k) * (k + 2) + (n - k + 1) * k

    for i in range(4):
        diag = (1 - chi) * 2 * i + (chi / (n - 1)) * (n * (n + 1) - a(2 * i))
        assert m.diag[i] == pytest.approx(diag, rel=1e-14)
    for i in range(3):
        off = (chi / (n - 1)) * (2 * i + 2) * math.sqrt(
            (n - 2 * i) * (n - 2 * i - 1)
        )
        assert m.offdiag[i] == pytest.approx(off, rel=1e-14)


def test_strictly_increasing_levels():
    for chi in (0.0, 0.2, 0.5, 1.0):
        levels = vibron_spectrum(VibronParams(200, chi)).levels
        assert np.all(np.diff(levels) > 0)


def test_continuity_in_chi():
    a = vibron_spectrum(VibronParams(50, 0.3)).levels
    b = vibron_spectrum(VibronParams(50, 0.3 + 1e-9)).levels
    assert np.max(np.abs(a - b)) < 1e-6


def test_gap_thermodynamic():
    assert vibron_gap_thermodynamic(0.5) == pytest.approx(
        math.sqrt(3.75), rel=1e-15
    )
    assert vibron_gap_thermodynamic(1.0) == pytest.approx(4.0, rel=1e-15)
    for chi in (0.2, 0.1):
        with pytest.raises(ValidationError):
            vibron_gap_thermodynamic(chi)


def test_exact_times_chi0():
    ts = vibron_exact_times(VibronParams(100, 0.0), 10)
    assert ts.t_cl == pytest.approx(math.pi, rel=1e-15)
    assert math.isinf(ts.t_r) and math.isinf(ts.t_sr)


def test_exact_times_chi1_boundary():
    n = 3
    ts = vibron_exact_times(VibronParams(n, 1.0), 0)
    assert ts.t_cl == pytest.approx(2 * math.pi / 5, rel=1e-15)
    assert ts.t_r == pytest.approx((n - 1) * math.pi / 2, rel=1e-15)
    # the first slot carries the gap at k0=0
    assert ts.derivative_values[0] == pytest.approx(5.0, rel=1e-15)


def test_exact_times_chi1_interior():
    n = 1001
    ts = vibron_exact_times(VibronParams(n, 1.0), 100)
    assert ts.t_cl == pytest.approx(1000 * math.pi / 1603, rel=1e-15)
    assert ts.t_r == pytest.approx(500 * math.pi, rel=1e-15)
    assert math.isinf(ts.t_sr)


def test_exact_times_need_limit_chi():
    with pytest.raises(ValidationError):
        vibron_exact_times(VibronParams(100, 0.5), 10)
    with pytest.raises(ValidationError):
        vibron_exact_times(VibronParams(100, 1.0), 51)


def test_numeric_matches_exact_at_chi1():
    from revivalqpt.timescales import timescales_at

    params = VibronParams(1001, 1.0)
    spectrum = vibron_spectrum(params)
    for k0 in (0, 100, 250):
        num = timescales_at(spectrum, k0)
        ex = vibron_exact_times(params, k0)
        assert num.t_cl == pytest.approx(ex.t_cl, rel=1e-8)
        assert num.t_r == pytest.approx(ex.t_r, rel=1e-8)
        # exact third derivative vanishes; numeric is rounding noise
        assert abs(num.derivative_values[2]) < 1e-10


def test_params_validation():
    with pytest.raises(ValidationError):
        VibronParams(1, 0.5)
    with pytest.raises(ValidationError):
        VibronParams(100, -0.1)
    with pytest.raises(ValidationError):
        VibronParams(100, 1.5)


def test_critical_coupling_constant():
    assert CHI_C == 0.2
