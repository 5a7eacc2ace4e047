import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thermopauli import oracle
from thermopauli.series_core import (EXACT, FLOAT, SingularSeriesError, TruncatedSeries1,
                                     TruncatedSeries2, TruncationError, even_odd_split,
                                     heat_apply, legendre_link_seq, series_exp, series_log,
                                     series_mul, series_reciprocal, series_sqrt,
                                     series_substitute_ix, tritriangular)

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gauss_rational = st.tuples(small, small)


def exact_series(degree, nonzero_const=False):
    coeff = gauss_rational
    head = gauss_rational.filter(lambda c: c != (0, 0)) if nonzero_const else coeff
    return st.tuples(head, st.lists(coeff, min_size=degree, max_size=degree)).map(
        lambda t: TruncatedSeries1.from_values([t[0], *t[1]], "x", EXACT))


def same(a, b):
    return a.coeffs == b.coeffs


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10).flatmap(lambda d: st.tuples(exact_series(d), exact_series(d),
                                                      exact_series(d))))
def test_ring_axioms(abc):
    a, b, c = abc
    one = TruncatedSeries1.unit(a.degree, "x", EXACT)
    assert same(series_mul(series_mul(a, b), c), series_mul(a, series_mul(b, c)))
    assert same(series_mul(a, one), a)
    assert same(series_mul(a, b + c), series_mul(a, b) + series_mul(a, c))
    assert same(series_mul(a, b), series_mul(b, a))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 8).flatmap(lambda d: exact_series(d, nonzero_const=True)))
def test_reciprocal_two_sided(a):
    one = TruncatedSeries1.unit(a.degree, "x", EXACT)
    r = series_reciprocal(a)
    assert same(series_mul(a, r), one)
    assert same(series_mul(r, a), one)


def test_reciprocal_needs_constant():
    with pytest.raises(SingularSeriesError):
        series_reciprocal(TruncatedSeries1.from_values([0, 1, 2], "x", EXACT))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 7).flatmap(lambda d: exact_series(d, nonzero_const=True)),
       gauss_rational.filter(lambda c: c != (0, 0)))
def test_link_homogeneity(f, lam):
    lam_c = EXACT.coerce(lam)
    L = legendre_link_seq(f, f.degree)
    Ls = legendre_link_seq(f.scale(lam_c), f.degree)
    for n, (a, b) in enumerate(zip(L, Ls)):
        assert b * lam_c ** (n + 1) == a


def test_link_matches_sympy_replay():
    coeffs = [1, Fraction(1, 2), Fraction(-1, 3), 2, Fraction(1, 5), -1]
    f = TruncatedSeries1.from_values(coeffs, "x", EXACT)
    got = legendre_link_seq(f, 5)
    want = oracle.link_symbolic(coeffs, 5)
    for g, w in zip(got, want):
        assert EXACT.real(g) == Fraction(str(w)) and EXACT.imag(g) == 0


def test_link_truncation_guard():
    with pytest.raises(TruncationError):
        legendre_link_seq(TruncatedSeries1.from_values([1, 2], "x", FLOAT), 3)


@pytest.mark.parametrize("n", range(5, 9))
def test_link_expansion_coefficients(n):
    # leading terms of the n-fold link expansion in f, f', f'', ...; from n = 5
    # on the four monomials are distinct
    d = oracle.link_general_form(n)
    assert d[(-(n + 2), (n,))] == -1
    assert d[(-(n + 3), (1, n - 1))] == math.comb(n + 2, 2)
    assert d[(-(n + 3), (2, n - 2))] == math.comb(n + 2, 3)
    assert d[(-(n + 4), (1, 1, n - 2))] == -tritriangular(n)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8).flatmap(lambda d: exact_series(d)))
def test_substitute_ix(a):
    twice = series_substitute_ix(series_substitute_ix(a))
    for m, (c, t) in enumerate(zip(a.coeffs, twice.coeffs)):
        assert t == (-c if m % 2 else c)
    real = a._like(EXACT.make(EXACT.real(c)) for c in a.coeffs)
    parts = even_odd_split(series_substitute_ix(real))
    assert all(EXACT.imag(c) == 0 for c in parts.even.coeffs)
    assert all(EXACT.real(c) == 0 for c in parts.odd.coeffs)


def series2(rows):
    return TruncatedSeries2.from_values(rows, "x", EXACT)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.lists(small, min_size=7, max_size=7), min_size=3, max_size=3),
       st.lists(st.lists(small, min_size=7, max_size=7), min_size=3, max_size=3), small)
def test_heat_linear_and_commutes_with_derivative(ra, rb, s):
    a, b = series2(ra), series2(rb)
    sc = EXACT.coerce(s)
    assert heat_apply(a + b.scale(sc)).coeffs == (heat_apply(a) + heat_apply(b).scale(sc)).coeffs
    # d/dx drops the top x-order, so compare below it
    lhs = heat_apply(a).derivative_x()
    rhs = heat_apply(a.derivative_x())
    m0, n0 = rhs.degrees
    for m in range(m0 + 1):
        for n in range(n0 + 1 - 2 * m):
            assert lhs[m, n] == rhs[m, n]


def test_heat_matches_convolution():
    # p(x) = 1 + x - x^2/2 + x^4/24 under exp((h/2) d^2), at z = 0.4 and h = 0.3
    rows = [[1, 1, -1, 0, 1, 0, 0], [0] * 7, [0] * 7, [0] * 7]
    H = heat_apply(TruncatedSeries2.from_values(rows, "x", FLOAT))
    h, z = 0.3, 0.4
    total = 0.0
    for m in range(4):
        row = TruncatedSeries1(H.slice(m).coeffs, "x", FLOAT)
        total += row.evaluate(z).real * h ** m / math.factorial(m)
    want = oracle.heat_convolution(lambda x: 1 + x - x * x / 2 + x ** 4 / 24, h, z)
    assert abs(total - want.real) < 1e-12


def test_exp_log_sqrt_roundtrip():
    a = TruncatedSeries1.from_values([0, 1, Fraction(1, 2), -2, 3, 0, 1], "x", EXACT)
    assert same(series_log(series_exp(a)), a)
    b = series_mul(series_exp(a), series_exp(a))
    r = series_sqrt(b)
    assert same(series_mul(r, r), b)
    f = TruncatedSeries1.from_values([0.3, 1, 0.5, -2, 3, 0, 1], "x", FLOAT)
    e = series_exp(f)
    d = [oracle.finite_diff_derivatives(lambda t: np.exp(f.evaluate(t).real), 0.0, k)[0]
         for k in range(1, 4)]
    assert np.allclose([c.real for c in e.coeffs[1:4]], d, rtol=1e-6)


def test_sqrt_inexact_in_exact_backend():
    from thermopauli.series_core import InexactError
    with pytest.raises(InexactError):
        series_sqrt(TruncatedSeries1.from_values([2, 1], "x", EXACT))


def test_json_roundtrip_both_backends():
    for field in (EXACT, FLOAT):
        a = TruncatedSeries2.from_values([[1, Fraction(1, 3)], [0, (2, -1)]], "x", field)
        back = TruncatedSeries2.from_json(a.to_json(), "x", field)
        assert back.coeffs == a.coeffs


@pytest.mark.parametrize("n,value", [(1, 3), (2, 15), (3, 45), (10, 2145)])
def test_tritriangular_values(n, value):
    assert tritriangular(n) == value


def test_tritriangular_rejects_zero():
    with pytest.raises(ValueError):
        tritriangular(0)
