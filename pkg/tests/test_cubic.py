import numpy as np
import pytest
from numpy.testing import assert_allclose

from miso_pareto.config import SOLVER_CONFIG
from miso_pareto.errors import AllZeroCoefficients
from miso_pareto.services.cubic import CubicCoefficients, real_roots, roots_in_unit_interval


def _from_roots(roots, lead=1.0):
    c3, c2, c1, c0 = lead * np.poly(roots)
    return CubicCoefficients(float(c3), float(c2), float(c1), float(c0))


def test_random_root_constructed_cubics():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 10_000:
        roots = np.sort(rng.uniform(-2.0, 2.0, size=3))
        if np.min(np.diff(roots)) < 1e-3:
            continue
        lead = rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 10.0)
        found = real_roots(_from_roots(roots, lead))
        assert len(found) == 3
        assert_allclose(found, roots, atol=1e-8, rtol=0)
        checked += 1


def test_single_real_root_with_complex_pair():
    rng = np.random.default_rng(7)
    for _ in range(500):
        r = rng.uniform(-2, 2)
        re, im = rng.uniform(-2, 2), rng.uniform(0.1, 2)
        found = real_roots(_from_roots([r, complex(re, im), complex(re, -im)]))
        assert len(found) == 1
        assert abs(found[0] - r) < 1e-8


def test_double_root():
    found = real_roots(_from_roots([0.5, 0.5, -1.0]))
    assert_allclose(found, [-1.0, 0.5], atol=1e-7)


def test_degenerate_leading_coefficients():
    # 2l^2 - 3l + 1 = (2l - 1)(l - 1)
    assert_allclose(real_roots(CubicCoefficients(0.0, 2.0, -3.0, 1.0)), [0.5, 1.0])
    assert_allclose(real_roots(CubicCoefficients(0.0, 0.0, 4.0, -1.0)), [0.25])
    assert real_roots(CubicCoefficients(0.0, 0.0, 0.0, 3.0)) == []
    with pytest.raises(AllZeroCoefficients):
        real_roots(CubicCoefficients(0.0, 0.0, 0.0, 0.0))


def test_unit_interval_selection():
    roots = roots_in_unit_interval(_from_roots([-0.5, 0.25, 1.5]))
    assert_allclose(roots, [0.25])
    # roots within 1e-9 of the interval are clamped onto it
    edge = roots_in_unit_interval(_from_roots([1.0 + 5e-10, 3.0, -4.0]))
    assert edge == [1.0]


def test_unit_interval_tolerance_comes_from_the_config(monkeypatch):
    cubic = _from_roots([1.0 + 5e-10, 3.0, -4.0])
    monkeypatch.setattr(SOLVER_CONFIG, "root_tolerance", 1e-12)
    assert roots_in_unit_interval(cubic) == []
    assert roots_in_unit_interval(cubic, tol=1e-9) == [1.0]
