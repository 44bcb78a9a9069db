import math

import pytest

from mmrelay.quadrature import DEFAULT_SETTINGS, QuadratureError, QuadratureSettings, integrate


def test_polynomial_exact():
    assert integrate(lambda t: 3.0 * t * t, 0.0, 2.0) == pytest.approx(8.0, rel=1e-12)


def test_empty_interval():
    assert integrate(lambda t: 1.0 / t, 5.0, 5.0) == 0.0


def test_settings_validation():
    with pytest.raises(ValueError):
        QuadratureSettings(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSettings(abs_tol=-1e-9)
    with pytest.raises(ValueError):
        QuadratureSettings(max_subdivisions=0)
    with pytest.raises(ValueError):
        QuadratureSettings(nlos_truncation_radius=-10.0)


def test_default_settings():
    assert DEFAULT_SETTINGS.rel_tol == 1e-8
    assert DEFAULT_SETTINGS.abs_tol == 1e-12
    assert DEFAULT_SETTINGS.nlos_truncation_radius is None


def test_nonconvergence_carries_partial_estimate():
    # wildly oscillatory integrand with a tiny subdivision budget
    settings = QuadratureSettings(rel_tol=1e-12, abs_tol=1e-14, max_subdivisions=2)
    with pytest.raises(QuadratureError) as info:
        integrate(lambda t: math.sin(1.0 / t), 1e-6, 1.0, settings)
    assert isinstance(info.value.estimate, float)
    assert math.isfinite(info.value.estimate)
