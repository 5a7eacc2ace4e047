import math

import numpy as np
import pytest

from thermopauli import oracle


@pytest.mark.parametrize("k", [0, 2, 4, 6])
def test_gauss_hermite_exact_on_gaussian_moments(k):
    # integral x^k exp(-x^2) = Gamma((k+1)/2)
    grid = oracle.gauss_hermite(20)
    got = grid.integrate(lambda x: x[0] ** k * np.exp(-x[0] ** 2)).real
    assert got == pytest.approx(math.gamma((k + 1) / 2), rel=1e-13)


def test_gauss_hermite_2d():
    grid = oracle.gauss_hermite(20, scale=0.5, center=[0.1, -0.2], dim=2)
    got = grid.integrate(lambda x: np.exp(-((x[0] - 0.1) ** 2 + (x[1] + 0.2) ** 2) / 0.25)).real
    assert got == pytest.approx(math.pi * 0.25, rel=1e-13)


def test_trapezoid_error_shrinks():
    def fn(x):
        return np.exp(-x[0] ** 2 / 0.3) * np.cos(x[0])
    want = math.sqrt(0.3 * math.pi) * math.exp(-0.3 / 4)
    errs = [abs(oracle.trapezoid(0.3, n=n, cutoff=4.0).integrate(fn).real - want)
            for n in (11, 21, 41)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-10


def test_fourier_of_gaussian():
    # unitary transform of exp(-x^2/(2h)) is itself
    h = 0.5
    grid = oracle.trapezoid(h, n=2001)
    for y in (0.0, 0.4, -1.0):
        got = oracle.h_fourier_quadrature(lambda x: np.exp(-x[0] ** 2 / (2 * h)), h, grid, y)
        assert abs(got - math.exp(-y * y / (2 * h))) < 1e-12
    vec = oracle.h_fourier_quadrature(lambda X: np.exp(-X[:, 0] ** 2 / (2 * h)), h, grid, 0.4,
                                      vectorized=True)
    assert abs(vec - math.exp(-0.16 / (2 * h))) < 1e-12


@pytest.mark.parametrize("order", range(1, 7))
def test_finite_differences_of_exp(order):
    est, err = oracle.finite_diff_derivatives(math.exp, 0.3, order)
    # the reported error must cover the true one
    assert abs(est - math.exp(0.3)) <= 10 * err
    if order <= 4:
        assert est == pytest.approx(math.exp(0.3), rel=1e-6)


def test_finite_differences_limits():
    with pytest.raises(oracle.OracleError):
        oracle.finite_diff_derivatives(math.exp, 0.0, 7)
    assert oracle.finite_diff_derivatives(math.exp, 0.0, 0) == (1.0, 0.0)


def test_grid_legendre_of_parabola():
    # max_E (-E^2/2 - b E) = b^2/2
    grid = np.linspace(-5, 5, 101)
    assert oracle.grid_legendre(lambda E: -E * E / 2, 1.3, grid) == pytest.approx(0.845, abs=1e-12)
    with pytest.raises(oracle.InconclusiveError):
        oracle.grid_legendre(lambda E: -E * E / 2, 9.0, grid)


def test_link_symbolic_first_terms():
    # rational input stays rational through the symbolic replay
    vals = oracle.link_symbolic([1, 2, 0, 0], 3)
    assert len(vals) == 4
    assert all(v.is_rational for v in vals)


def test_heat_convolution_of_polynomial():
    # exp((h/2) d^2) x^2 = x^2 + h
    got = oracle.heat_convolution(lambda x: x * x, 0.3, 0.7)
    assert abs(got - (0.49 + 0.3)) < 1e-12
