import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermopauli import oracle
from thermopauli.fluctuations import (CoherentPair, CoherentState, ComplexGaussian1,
                                      DegenerateBasisError, DensityMatrix2, FluctKernel,
                                      FluctuationError, branch_gram, build_wavefunction,
                                      deformed_moments, density_extensive, density_intensive,
                                      h_fourier_analytic, landau_lifshits_map, moments,
                                      orthonormal_basis, sample_density, symmetrized_covariance)


def spd(rng, n):
    M = rng.normal(size=(n, n))
    return M @ M.T + n * np.eye(n)


@pytest.mark.parametrize("n", [1, 2])
def test_densities_normalized(n):
    k = FluctKernel(spd(np.random.default_rng(n), n), kB=0.3)
    grid = oracle.trapezoid(1.0, n=401 if n == 1 else 161, cutoff=4.0, dim=n)
    assert grid.integrate(lambda x: density_extensive(k, x)).real == pytest.approx(1, abs=1e-8)
    wide = oracle.trapezoid(1.0, n=401 if n == 1 else 201, cutoff=12.0, dim=n)
    assert wide.integrate(lambda y: density_intensive(k, y)).real == pytest.approx(1, abs=1e-8)


def test_wavefunction_modulus_is_density():
    k = FluctKernel([[2.0, 0.3], [0.3, 1.0]], kB=0.5)
    psi = build_wavefunction(k)
    for x in ([0.1, -0.4], [1.0, 0.7]):
        assert abs(psi(x)) ** 2 == pytest.approx(density_extensive(k, x), rel=1e-12)


def test_wavefunction_unit_norm():
    psi = CoherentState(FluctKernel([[1.5]], kB=0.25), x0=0.3, y0=-0.2)
    grid = oracle.gauss_hermite(80, scale=1.0, center=0.3)
    assert oracle.overlap_quadrature(psi, psi, grid).real == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("x0,y0", [(0.0, 0.0), (0.4, -0.3), (-1.0, 0.5)])
def test_fourier_analytic_matches_quadrature(x0, y0):
    psi = CoherentState(FluctKernel([[1.7]], kB=0.2), x0=x0, y0=y0, phase=0.3)
    hat = h_fourier_analytic(psi)
    grid = oracle.trapezoid(0.4, n=4001, cutoff=6.0)
    for y in (-0.5, 0.0, 0.8):
        got = oracle.h_fourier_quadrature(psi, 0.4, grid, y)
        assert abs(got - hat(y)) < 1e-10


def test_fourier_2d_matches_quadrature():
    psi = CoherentState(FluctKernel([[2.0, 0.5], [0.5, 1.0]], kB=0.5), x0=[0.2, -0.1],
                        y0=[0.3, 0.0])
    hat = h_fourier_analytic(psi)
    grid = oracle.trapezoid(1.0, n=161, cutoff=7.0, dim=2)
    for y in ([0.0, 0.0], [0.5, -0.4]):
        assert abs(oracle.h_fourier_quadrature(psi, 1.0, grid, y) - hat(y)) < 1e-9


def test_parseval():
    a = CoherentState(FluctKernel([[1.3]], kB=0.3), x0=0.2, y0=0.1)
    b = CoherentState(FluctKernel([[0.8]], kB=0.3), x0=-0.1, y0=0.4)
    grid = oracle.trapezoid(0.6, n=4001, cutoff=10.0)
    lhs = oracle.overlap_quadrature(a, b, grid)
    rhs = oracle.overlap_quadrature(h_fourier_analytic(a), h_fourier_analytic(b), grid)
    assert abs(lhs - rhs) < 1e-10


def test_moments_match_quadrature():
    k = FluctKernel([[1.4]], kB=0.35)
    psi = CoherentState(k, x0=0.3, y0=-0.2)
    grid = oracle.trapezoid(0.7, n=4001, cutoff=8.0)
    for m in range(5):
        want = grid.integrate(lambda x: x[0] ** m * abs(psi(x)) ** 2).real
        assert moments(psi, "E", 0, m) == pytest.approx(want, abs=1e-10)
        hat = h_fourier_analytic(psi)
        want_b = grid.integrate(lambda y: y[0] ** m * abs(hat(y)) ** 2).real
        assert moments(psi, "beta", 0, m) == pytest.approx(want_b, abs=1e-10)
    with pytest.raises(FluctuationError):
        moments(psi, "E", 0, 5)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 20), st.floats(0.01, 5))
def test_coherent_product_saturates_floor(a, kB):
    psi = CoherentState(FluctKernel([[a]], kB=kB))
    vE, vB = moments(psi, "E", 0, 2), moments(psi, "beta", 0, 2)
    assert vE * vB == pytest.approx(kB * kB, rel=1e-12)


def test_symmetrized_covariance_against_quadrature():
    psi = CoherentState(FluctKernel([[1.2]], kB=0.25), x0=0.3, y0=0.7)
    h = psi.kernel.h
    grid = oracle.trapezoid(h, n=4001, cutoff=6.0)

    def dpsi(x):
        e = 1e-5
        return (psi(x + e) - psi(x - e)) / (2 * e)
    # <(PQ + QP)/2> with P = -i h d/dx: Re of <psi| x P |psi>
    xp = grid.integrate(lambda x: np.conj(psi(x)) * x[0] * (-1j * h) * dpsi(x))
    cov = xp.real - psi.x0[0] * psi.y0[0]
    assert abs(cov) < 1e-8
    assert symmetrized_covariance(psi) == 0.0


def test_complex_gaussian_fourier_and_chirp():
    g = ComplexGaussian1(1 + 0.5j, 0.4)
    assert g.overlap(g).real == pytest.approx(1, abs=1e-14)
    hat = g.fourier()
    grid = oracle.trapezoid(0.4, n=4001, cutoff=8.0)
    for y in (0.0, 0.6):
        assert abs(oracle.h_fourier_quadrature(g, 0.4, grid, y) - hat(y)) < 1e-10
    assert symmetrized_covariance(g) != 0


def test_landau_lifshits_is_linear():
    H = [[-2.0, 0.3], [0.3, -1.0]]
    a, b = np.array([0.1, 0.2]), np.array([-0.3, 0.05])
    assert np.allclose(landau_lifshits_map(H, a + 2 * b),
                       landau_lifshits_map(H, a) + 2 * landau_lifshits_map(H, b))


def test_kernel_errors():
    with pytest.raises(FluctuationError):
        FluctKernel([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(FluctuationError):
        FluctKernel([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(FluctuationError):
        FluctKernel([[1.0]], kB=0.0)


def test_density_matrix_errors():
    with pytest.raises(FluctuationError):
        DensityMatrix2([[0.5, 0.0], [0.0, 0.6]])
    with pytest.raises(FluctuationError):
        DensityMatrix2([[1.5, 0.0], [0.0, -0.5]])
    with pytest.raises(FluctuationError):
        DensityMatrix2([[0.5, 0.1j], [0.1j, 0.5]])


def test_sigma_zero_degenerate_basis():
    with pytest.raises(DegenerateBasisError):
        orthonormal_basis(CoherentPair(0.0, 0.5))


def test_gram_matches_direct_overlap():
    pair = CoherentPair(0.8, 0.5)
    G = branch_gram(pair)
    a, b = pair.branch(0), pair.branch(1)
    assert abs(a.overlap(b) - G[0, 1]) < 1e-14
    grid = oracle.trapezoid(0.5, n=4001, cutoff=6.0)
    assert abs(oracle.overlap_quadrature(a, b, grid) - G[0, 1]) < 1e-10
    T = orthonormal_basis(pair)
    assert np.allclose(T.conj() @ G @ T.T, np.eye(2), atol=1e-13)


def random_density(rng):
    M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    P = M @ M.conj().T
    return DensityMatrix2(P / np.trace(P))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(0.1, 3), st.floats(0.1, 2))
def test_deformed_uncertainty_floor(seed, sigma, h):
    pair = CoherentPair(sigma, h)
    vE, vB, cov = deformed_moments(pair, random_density(np.random.default_rng(seed)))
    floor = pair.kB ** 2
    assert vE * vB - cov * cov >= floor * (1 - 1e-10)
    assert vE * vB >= vE * vB - cov * cov


def test_deformed_moments_affine_in_P():
    pair = CoherentPair(1.2, 0.6)
    rng = np.random.default_rng(5)
    P, Q = random_density(rng), random_density(rng)
    t = 0.3
    mix = DensityMatrix2(t * P.matrix + (1 - t) * Q.matrix)
    lhs = np.array(deformed_moments(pair, mix))
    rhs = t * np.array(deformed_moments(pair, P)) + (1 - t) * np.array(deformed_moments(pair, Q))
    assert np.allclose(lhs, rhs, atol=1e-13)


def test_deformed_moments_pure_branch():
    # P = |psi_0><psi_0| is the first branch state itself
    pair = CoherentPair(0.7, 0.5)
    g = pair.branch(0)
    vE, vB, cov = deformed_moments(pair, DensityMatrix2([[1, 0], [0, 0]]))
    assert vE == pytest.approx(g.Q2(g).real, rel=1e-12)
    assert vB == pytest.approx(g.P2(g).real, rel=1e-12)
    assert cov == pytest.approx(g.expect_R().real, rel=1e-12)


def test_sample_density_rows():
    k = FluctKernel([[2.0, 0.0], [0.0, 1.0]], kB=0.5)
    rows = sample_density(k, "E", np.linspace(-1, 1, 5))
    assert len(rows) == 5
    assert rows[2][1] == pytest.approx(density_extensive(k, [0.0, 0.0]))
