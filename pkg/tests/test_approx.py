import numpy as np
import pytest
from scipy.integrate import quad

from trapeze import MollifierKernel, lipschitz_constants, mollify
from trapeze import fixtures as F
from trapeze.approx import admissible_angle, polygon_fourier, rescale_to_area
from trapeze.curves import PolygonCurve
from trapeze.errors import NotGraphical

KERNEL = MollifierKernel()


def test_kernel_has_unit_mass_and_support():
    assert KERNEL.mass_error < 1e-12
    assert KERNEL(1.0) == 0 and KERNEL(-1.2) == 0 and KERNEL(0.0) > 0
    assert KERNEL.fourier(0.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("xi", [0.5, 3.7, 12.0, 40.0])
def test_kernel_transform_against_adaptive_quadrature(xi):
    ref, _ = quad(lambda u: float(KERNEL(u)), -1, 1, weight="cos", wvar=2 * np.pi * xi,
                  limit=500, epsabs=1e-15)
    assert abs(KERNEL.fourier(xi) - ref) < 1e-12


def test_polygon_coefficients_against_sampled_transform():
    poly = PolygonCurve([[0, 0], [2, 0], [2.5, 1], [0.5, 1.5]])
    m = 1 << 18
    spec = np.fft.fft(poly.eval(np.arange(m) / m)) / m
    K = 24
    k = np.arange(-K, K + 1)
    assert np.max(np.abs(polygon_fourier(poly, K) - spec[np.mod(k, m)])) < 1e-9


def test_circle_modes_are_scaled_by_the_transform():
    eps = 0.05
    m = mollify(F.circle(), eps)
    # only the k = 1 mode is present
    assert m.eval(0.0) == pytest.approx(KERNEL.fourier(eps), abs=1e-14)


def test_mollified_square_converges():
    devs = [mollify(F.unit_square(), e).deviation for e in (0.04, 0.02, 0.01)]
    assert devs[0] > devs[1] > devs[2]
    # corners are cut by about eps times the perimeter
    assert devs[2] < 4 * 0.01


def test_mollify_rejects_nonpositive_eps():
    with pytest.raises(ValueError):
        mollify(F.circle(), 0.0)


def test_rescale_to_area():
    m = mollify(F.unit_square(), 0.02)
    assert m.area < 1
    assert rescale_to_area(m, 1.0).area == pytest.approx(1.0, rel=1e-12)


def test_square_constants():
    c = lipschitz_constants(F.unit_square(), 1.0)
    # a unit-slope window over a corner of the square is sqrt(2) - 1 long
    assert c.mu_K == pytest.approx(np.sqrt(2) - 1, rel=2e-3)
    assert c.mu == pytest.approx(0.5, rel=1e-3)
    with pytest.raises(NotGraphical):
        lipschitz_constants(F.unit_square(), 0.5)


def test_circle_constants():
    c = lipschitz_constants(F.circle(), 1.0)
    assert c.mu_K == pytest.approx(np.sin(np.pi / 4), rel=1e-2)
    assert c.mu > 0.99
    # a larger K admits longer windows
    assert lipschitz_constants(F.circle(), 2.0).mu_K > c.mu_K


def test_admissible_angle():
    assert admissible_angle(F.unit_square(), 0.25) == pytest.approx(4 / 3)
