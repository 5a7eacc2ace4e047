"""Brute-force reference computations used by the tests.

Nothing here shares numerical kernels with the modules it checks: Fourier
transforms are done by quadrature, derivatives by Richardson-extrapolated
finite differences, Legendre transforms by grid search, and the link
operator and h-series by sympy differentiation of explicit expressions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np
import sympy as sp
from scipy.optimize import minimize_scalar


class OracleError(ValueError):
    pass


class InconclusiveError(OracleError):
    pass


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and weights with sum(w f(x)) ~ integral of f.

    For Gauss-Hermite the weights already include the exp(t^2) factor, so
    the rule is exact for Gaussian-times-polynomial integrands whose width
    matches ``scale``.
    """

    points: np.ndarray
    weights: np.ndarray
    scheme: str

    def integrate(self, fn) -> complex:
        vals = np.array([fn(p) for p in self.points])
        return complex(np.sum(self.weights * vals))

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def gauss_hermite(n: int = 64, scale: float = 1.0, center=0.0, dim: int = 1) -> QuadratureGrid:
    """Tensor-product Gauss-Hermite rule for integrands ~ exp(-|x - c|^2 / scale^2)."""
    t, w = np.polynomial.hermite.hermgauss(n)
    w1 = w * np.exp(t * t) * scale
    x1 = t * scale
    center = np.broadcast_to(np.asarray(center, dtype=float), (dim,))
    pts = np.array(list(itertools.product(x1, repeat=dim))) + center
    wts = np.array([np.prod(c) for c in itertools.product(w1, repeat=dim)])
    return QuadratureGrid(pts, wts, "gauss-hermite")


def trapezoid(h: float, n: int = 2001, cutoff: float | None = None, dim: int = 1) -> QuadratureGrid:
    """Uniform rule on [-cutoff, cutoff]^dim, cutoff defaulting to 12 sqrt(h)."""
    L = 12 * np.sqrt(h) if cutoff is None else cutoff
    x = np.linspace(-L, L, n)
    w = np.full(n, x[1] - x[0])
    w[0] = w[-1] = w[0] / 2
    pts = np.array(list(itertools.product(x, repeat=dim)))
    wts = np.array([np.prod(c) for c in itertools.product(w, repeat=dim)])
    return QuadratureGrid(pts, wts, "trapezoid")


def h_fourier_quadrature(fn, h: float, grid: QuadratureGrid, y, vectorized=False) -> complex:
    """(2 pi h)^(-n/2) * integral exp(-i y.x / h) fn(x) dx.

    With ``vectorized`` fn receives the whole (N, dim) node array at once.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = grid.dim
    if vectorized:
        vals = np.asarray(fn(grid.points), dtype=complex)
    else:
        vals = np.array([fn(p) for p in grid.points], dtype=complex)
    phase = np.exp(-1j * (grid.points @ y) / h)
    return complex(np.sum(grid.weights * vals * phase) / (2 * np.pi * h) ** (n / 2))


def overlap_quadrature(f, g, grid: QuadratureGrid) -> complex:
    """(f, g) = integral conj(f) g."""
    return grid.integrate(lambda x: np.conj(f(x)) * g(x))


# --------------------------------------------------------------------------
# finite differences


def _central(fn, at, order, step):
    s = 0.0
    for j in range(order + 1):
        s += (-1) ** j * comb(order, j) * fn(at + (order / 2 - j) * step)
    return s / step ** order


def finite_diff_derivatives(fn, at: float, order: int, step: float | None = None,
                            levels: int = 6):
    """Richardson-extrapolated central difference; returns (estimate, error)."""
    if order > 6:
        raise OracleError("finite differences limited to order <= 6")
    if order < 1:
        return fn(at), 0.0
    h = (0.1 if step is None else step) * max(1.0, abs(at))
    table = []
    for i in range(levels):
        row = [_central(fn, at, order, h / 2 ** i)]
        for k in range(1, i + 1):
            f = 4 ** k
            row.append(row[k - 1] + (row[k - 1] - table[i - 1][k - 1]) / (f - 1))
        table.append(row)
    # high orders hit round-off as the step shrinks: keep the steadiest diagonal entry
    cands = [(abs(table[i][i] - table[i - 1][i - 1]), table[i][i]) for i in range(1, levels)]
    err, best = min(cands)
    return best, err


# --------------------------------------------------------------------------
# Legendre transform on a grid


def grid_legendre(fn, beta: float, grid) -> float:
    """max over E of fn(E) - beta E, located on the grid then refined."""
    grid = np.asarray(grid, dtype=float)
    vals = np.array([fn(E) - beta * E for E in grid])
    k = int(np.argmax(vals))
    if k == 0 or k == len(grid) - 1:
        raise InconclusiveError("maximizer at the grid boundary")
    res = minimize_scalar(lambda E: -(fn(E) - beta * E), bounds=(grid[k - 1], grid[k + 1]),
                          method="bounded", options={"xatol": 1e-12})
    return float(-res.fun)


# --------------------------------------------------------------------------
# symbolic replays


_X = sp.Symbol("x")


def _to_sympy(c):
    if isinstance(c, (int, Fraction)):
        return sp.Rational(c.numerator, c.denominator)
    if isinstance(c, complex):
        return sp.nsimplify(c.real) + sp.I * sp.nsimplify(c.imag)
    if hasattr(c, "x") and hasattr(c, "y"):
        return sp.Rational(str(c.x)) + sp.I * sp.Rational(str(c.y))
    return sp.nsimplify(c)


def _poly(coeffs):
    return sum(_to_sympy(c) * _X ** m / sp.factorial(m) for m, c in enumerate(coeffs))


def link_symbolic(coeffs, n_max: int) -> list:
    """((1/f) d/dx)^n (1/f) at 0 for f = sum c_m x^m/m!, by sympy differentiation."""
    f = sum(_to_sympy(c) * _X ** m / sp.factorial(m) for m, c in enumerate(coeffs))
    g = 1 / f
    out = [sp.simplify(g.subs(_X, 0))]
    for _ in range(n_max):
        g = sp.diff(g, _X) / f
        out.append(sp.expand(g.subs(_X, 0)))
    return out


def link_general_form(n: int):
    """((1/f) d/dx)^n (1/f) for an undetermined f, expanded as a sum over
    monomials in f, f', f'', ...  Returns {(exponent of f, derivative orders): coeff};
    the exponent of f is negative."""
    f = sp.Function("f")(_X)
    g = 1 / f
    for _ in range(n):
        g = sp.diff(g, _X) / f
    g = sp.expand(g)
    out = {}
    derivs = {sp.Derivative(f, (_X, k)) if k else f: k for k in range(n + 1)}
    for term in sp.Add.make_args(g):
        coeff, rest = term.as_coeff_Mul()
        powers = rest.as_powers_dict()
        fpow = 0
        orders = []
        for base, e in powers.items():
            k = derivs.get(base)
            if k is None:
                raise OracleError(f"unexpected factor {base}")
            if k == 0:
                fpow += int(e)
            else:
                orders.extend([k] * int(e))
        key = (fpow, tuple(sorted(orders)))
        out[key] = out.get(key, 0) + int(coeff)
    return out


def q_series_order1(A_rows, f_rows, n0: int):
    """Q at order h^1 from (h/2)[(Ahat')^2 + Ahat''] of Ahat_0 = A_0 + i f_0,
    as divided-power coefficients through x^n0 (sympy, exact)."""
    a0 = _poly(A_rows[0]) + sp.I * _poly(f_rows[0])
    expr = sp.expand((sp.diff(a0, _X) ** 2 + sp.diff(a0, _X, 2)) / 2)
    return [sp.expand(sp.diff(expr, _X, n).subs(_X, 0)) for n in range(n0 + 1)]


def c_from_formula(A_rows, B_rows, n0: int):
    """c(x) re-derived by sympy: -(B1)_even(ix) + (A1)_even + [(A0')^2 + A0'']_even/2
    - (d/dx of -i (B0)_odd(ix))^2 / 2, returned as divided-power coefficients."""
    def even(e):
        return sp.expand((e + e.subs(_X, -_X)) / 2)

    def odd(e):
        return sp.expand((e - e.subs(_X, -_X)) / 2)

    A0, A1 = _poly(A_rows[0]), _poly(A_rows[1])
    B0, B1 = _poly(B_rows[0]), _poly(B_rows[1])
    B1i = B1.subs(_X, sp.I * _X)
    B0i = B0.subs(_X, sp.I * _X)
    f0o = sp.expand(-sp.I * odd(B0i))
    c = (-even(B1i) + even(A1) + even(sp.diff(A0, _X) ** 2 + sp.diff(A0, _X, 2)) / 2
         - sp.diff(f0o, _X) ** 2 / 2)
    c = sp.expand(c)
    return [sp.expand(sp.diff(c, _X, n).subs(_X, 0)) for n in range(n0 + 1)]


def heat_convolution(fn, h: float, z: float, n: int = 80) -> complex:
    """(2 pi h)^(-1/2) * integral exp(-(x - z)^2/(2h)) fn(x) dx by Gauss-Hermite."""
    grid = gauss_hermite(n, scale=np.sqrt(2 * h), center=z)
    return grid.integrate(lambda x: np.exp(-(x[0] - z) ** 2 / (2 * h)) * fn(x[0])) / np.sqrt(
        2 * np.pi * h)


def series_product_fd(fa, fb, at: float, order: int):
    """n-th derivative of fa*fb at ``at`` by finite differences."""
    return finite_diff_derivatives(lambda t: fa(t) * fb(t), at, order)


def factorial_weighted(coeffs):
    """Divided-power to ordinary Taylor coefficients."""
    return [c / factorial(m) for m, c in enumerate(coeffs)]
