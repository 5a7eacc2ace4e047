"""Truncated subtropical problem.

Data are two real polynomials in (h, x), ``A`` and ``B``.  Unknown are real
``f`` and ``g`` such that, with ``Ahat = A + h P(h) + i f`` and
``Bhat = B + i g``,

    exp(Bhat(i x)) = exp((h/2) d^2/dx^2) exp(Ahat(x))

through h-order m0 and x-order n0.  Taking logarithms gives
``Bhat(ix) = Ahat(x) + Q(x)`` with

    Q = log(1 + sum_m (h/2)^m/m! [(Ahat' + d/dx)^{2m} 1]).

Q at order h^j involves Ahat_0..Ahat_{j-1} only, so the real/imaginary and
even/odd projections can be solved one h-order at a time:

* real, even x-degree, order j >= 1: the x^0 coefficient fixes P_{j-1}; the
  rest fixes the even part of f_{j-1} (a square root for j = 1, a linear
  division for j >= 2);
* imaginary, odd x-degree: the odd part of f_j;
* real odd and imaginary even: g_j.

All series are treated as polynomials of degree n0 in x, so products and
the heat operator are evaluated on zero-padded data.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, factorial

from .series_core import (
    FLOAT, InexactError, TruncatedSeries1, TruncatedSeries2, even_odd_split,
    get_field, h_power, heat_apply, series2_exp, series2_log, series2_mul,
    series_sqrt, series_substitute_ix)


class SubtropicalError(ValueError):
    """Admissibility failure (CLI exit status 2)."""


class InconsistentOrderZeroError(SubtropicalError):
    pass


class NoRealBranchError(SubtropicalError):
    pass


class DegenerateCError(SubtropicalError):
    pass


@dataclass(frozen=True)
class SubtropicalProblem:
    A: TruncatedSeries2
    B: TruncatedSeries2

    def __post_init__(self):
        if self.A.degrees != self.B.degrees:
            raise ValueError("A and B must share truncation degrees")

    @property
    def m0(self) -> int:
        return self.A.degrees[0]

    @property
    def n0(self) -> int:
        return self.A.degrees[1]

    @property
    def field(self):
        return self.A.field

    def to_field(self, field):
        return SubtropicalProblem(self.A.to_field(field), self.B.to_field(field))


@dataclass(frozen=True)
class SubtropicalSolution:
    """``phase[m]`` is the constant of g at h-order m.

    It is kept apart from ``g`` so that ``g`` has the normalized zero
    constant terms, while the link itself still needs the constant.
    """

    f: TruncatedSeries2
    g: TruncatedSeries2
    P: tuple
    branch: int
    phase: tuple
    residual_norm: float = dc_field(default=0.0, compare=False)


@dataclass(frozen=True)
class CSeriesReport:
    c: TruncatedSeries1
    c_at_0: object
    c2: object
    nonneg_on_grid: bool
    grid_radius: float = 0.0


def _parity_sign(n: int) -> int:
    """(-1)^(n/2) for even n, (-1)^((n-1)/2) for odd n."""
    return -1 if (n // 2) % 2 else 1


def _real_series(field, values, label="x"):
    return TruncatedSeries1(tuple(field.make(v) for v in values), label, field)


def _re(s: TruncatedSeries1) -> list:
    return [s.field.real(c) for c in s.coeffs]


def _im(s: TruncatedSeries1) -> list:
    return [s.field.imag(c) for c in s.coeffs]


def _d(s: TruncatedSeries1) -> TruncatedSeries1:
    """Derivative of a degree-n polynomial, kept at degree n."""
    return s.derivative().pad(s.degree)


def _check_order_zero(p: SubtropicalProblem):
    field = p.field
    A0, B0 = p.A.slice(0), p.B.slice(0)
    lhs = even_odd_split(series_substitute_ix(B0)).even
    rhs = even_odd_split(A0).even
    scale = max(1.0, A0.max_abs(), B0.max_abs())
    for n in range(0, p.n0 + 1, 2):
        if not field.is_zero(lhs[n] - rhs[n], scale=scale):
            raise InconsistentOrderZeroError(
                f"inconsistent: (B0)_even(ix) != (A0)_even(x) at x-degree {n}")


def _grid_radius(c: TruncatedSeries1) -> float:
    """Radius inside which every higher term of c is below c2 x^2 / (2 n0).

    With c(0) = 0 and c2 > 0 this makes c positive on the punctured disc,
    so the grid check agrees with the series-level criterion.
    """
    vals = [abs(c.field.to_complex(v)) for v in c.coeffs]
    c2 = vals[2] if len(vals) > 2 else 0.0
    if c2 == 0:
        return 1.0
    n0 = max(c.degree, 3)
    r = 1.0
    for n in range(3, len(vals)):
        if vals[n]:
            r = min(r, (factorial(n) * c2 / (2 * n0 * vals[n])) ** (1.0 / (n - 2)))
    return r


def compute_c(p: SubtropicalProblem, grid_points: int = 41) -> CSeriesReport:
    """c(x) = -(B1)_even(ix) + (A1)_even + [(A0')^2 + A0'']_even / 2 - (f0_odd')^2 / 2,
    where f0_odd = -i (B0)_odd(ix)."""
    if p.m0 < 1:
        raise SubtropicalError("c(x) needs data through h-order 1")
    _check_order_zero(p)
    field = p.field
    A0, A1 = p.A.slice(0), p.A.slice(1)
    B0, B1 = p.B.slice(0), p.B.slice(1)
    b1e = even_odd_split(series_substitute_ix(B1)).even
    a1e = even_odd_split(A1).even
    dA0 = _d(A0)
    bracket = even_odd_split(dA0 * dA0 + _d(dA0)).even
    f0o = even_odd_split(series_substitute_ix(B0)).odd.scale(field.make(0, -1))
    df0o = _d(f0o)
    half = field.make(1) / 2
    c = -b1e + a1e + bracket.scale(half) - (df0o * df0o).scale(half)
    c = c.real_part()
    c0 = field.real(c[0])
    c2 = field.real(c[2]) if c.degree >= 2 else field.real(field.zero)
    shifted = c - TruncatedSeries1.unit(c.degree, c.var_label, field).scale(c[0])
    radius = _grid_radius(shifted)
    ok = True
    for k in range(grid_points):
        x = radius * (2 * k / (grid_points - 1) - 1)
        if shifted.evaluate(x).real < -1e-14 * max(1.0, abs(float(c2)) * x * x):
            ok = False
            break
    return CSeriesReport(c=c, c_at_0=c0, c2=c2, nonneg_on_grid=ok, grid_radius=radius)


def _ahat(A: TruncatedSeries2, f_rows, field) -> TruncatedSeries2:
    m0, n0 = A.degrees
    i = field.make(0, 1)
    rows = []
    for m in range(m0 + 1):
        a = A.slice(m)
        fm = f_rows[m] if m < len(f_rows) else TruncatedSeries1.zeros(n0, "x", field)
        rows.append(a + fm.scale(i))
    return TruncatedSeries2.from_slices(rows)


def _q_from_ahat(ahat: TruncatedSeries2, order: int) -> TruncatedSeries2:
    field = ahat.field
    n0 = ahat.degrees[1]
    big = n0 + 2 * order
    a = ahat.resize(order, big)
    da = a.map_slices(_d)

    def apply_op(F):
        # (Ahat' + d/dx) F; the top coefficient of dF is unknown and zeroed,
        # which only spoils degrees above big - (applications so far)
        return series2_mul(da, F) + F.map_slices(_d)

    F = h_power(0, order, big, "x", field)
    rows = [list(r) for r in F.coeffs]
    for m in range(1, order + 1):
        F = apply_op(apply_op(F))
        # (h/2)^m/m! times F: row k of F lands in row m + k, weight C(m+k, m)/2^m
        for k in range(order - m + 1):
            w = field.make(Fraction(comb(m + k, m), 2 ** m))
            rows[m + k] = [a + w * b for a, b in zip(rows[m + k], F.coeffs[k])]
    total = TruncatedSeries2(tuple(tuple(r) for r in rows), "x", field)
    return series2_log(total).resize(order, n0)


def q_series(f_partial: TruncatedSeries2, A: TruncatedSeries2, order: int) -> TruncatedSeries2:
    """Q through h-order ``order`` and x-degree n0, using f_l for l < order."""
    field = A.field
    rows = [f_partial.slice(m) for m in range(min(order, f_partial.degrees[0] + 1))]
    ahat = _ahat(A.resize(order, A.degrees[1]), rows, field)
    return _q_from_ahat(ahat, order)


def _even_real_gap(p, f_rows, j):
    """Real even projection at h-order j with the current f:
    (B_j)_even(ix) - (A_j)_even - [Re Q_j]_even."""
    field = p.field
    n0 = p.n0
    ahat = _ahat(p.A.resize(j, n0), f_rows[:j], field)
    Qj = _q_from_ahat(ahat, j).slice(j)
    bje = even_odd_split(series_substitute_ix(p.B.slice(j))).even
    aje = even_odd_split(p.A.slice(j)).even
    gap = bje - aje - even_odd_split(Qj.real_part()).even
    return gap.real_part()


def _odd_f(p, f_rows, j):
    field = p.field
    n0 = p.n0
    Bj = p.B.slice(j)
    if j == 0:
        im_q = [0] * (n0 + 1)
    else:
        ahat = _ahat(p.A.resize(j, n0), f_rows[:j], field)
        im_q = _im(_q_from_ahat(ahat, j).slice(j))
    vals = [0] * (n0 + 1)
    for n in range(1, n0 + 1, 2):
        vals[n] = _parity_sign(n) * field.real(Bj[n]) - im_q[n]
    return _real_series(field, vals)


def _keep_parity(s: TruncatedSeries1, parity: int) -> TruncatedSeries1:
    z = s.field.zero
    return s._like(c if n % 2 == parity else z for n, c in enumerate(s.coeffs))


def solve_subtropical(p: SubtropicalProblem, backend=None) -> list:
    """Both branches (sign of the leading coefficient of d(f0)_even/dx).

    The even part of f_{m0} would be fixed at h-order m0 + 1, beyond the
    data; it is set to zero, as is P_{m0}, which only shifts A at h-order
    m0 + 1.
    """
    if backend is not None:
        p = p.to_field(get_field(backend))
    field = p.field
    m0, n0 = p.m0, p.n0
    report = compute_c(p)
    c2 = report.c2
    scale = max(1.0, report.c.max_abs())
    if field.is_zero(field.make(c2), scale=scale):
        raise DegenerateCError("degenerate: c''(0) = 0 (the c = 0 case is out of scope)")
    if c2 < 0 or not report.nonneg_on_grid:
        raise NoRealBranchError("no real branch: c(x) is negative near 0")
    c_shift = report.c - TruncatedSeries1.unit(n0, "x", field).scale(report.c[0])
    s = (c_shift.scale(2)).div_x().div_x()
    zero_row = TruncatedSeries1.zeros(n0, "x", field)
    out = []
    for branch, sign in enumerate((1, -1)):
        P = [field.real(field.zero)] * (m0 + 1)
        P[0] = -report.c_at_0
        root = series_sqrt(s, sign)                  # d(f0)_even/dx divided by x
        df0e = root.mul_x()
        f0e = _keep_parity(df0e.antiderivative(), 0)
        f_rows = [zero_row] * (m0 + 1)
        f_rows[0] = _odd_f(p, f_rows, 0) + f0e
        denom = root.pad(n0 - 1)
        for j in range(1, m0 + 1):
            if j >= 2:
                gap = _even_real_gap(p, f_rows, j)
                g0 = gap[0]
                P[j - 1] = field.real(g0) / factorial(j)
                gap = gap - TruncatedSeries1.unit(n0, "x", field).scale(g0)
                # gap + j f0e' F = 0  with F = d(f_{j-1})_even/dx
                F = -(gap.div_x() * _recip(denom)).scale(field.one / j)
                fe = _keep_parity(F.antiderivative(), 0)
                f_rows[j - 1] = f_rows[j - 1] + fe
            f_rows[j] = _odd_f(p, f_rows, j)
        f = TruncatedSeries2.from_slices(f_rows)
        g, phase = _g_from_f(p, f)
        sol = SubtropicalSolution(f=f, g=g, P=tuple(P), branch=branch, phase=tuple(phase))
        res = verify_subtropical(p, sol)
        out.append(SubtropicalSolution(f, g, tuple(P), branch, tuple(phase), res))
    return out


def _recip(s):
    from .series_core import series_reciprocal
    return series_reciprocal(s)


def _g_from_f(p, f):
    field = p.field
    m0, n0 = p.m0, p.n0
    Q = q_series(f, p.A, m0) if m0 >= 1 else None
    rows, phase = [], []
    for j in range(m0 + 1):
        if j == 0:
            re_q = [0] * (n0 + 1)
            im_q = [0] * (n0 + 1)
        else:
            re_q, im_q = _re(Q.slice(j)), _im(Q.slice(j))
        fj = _re(f.slice(j))
        Aj = _re(p.A.slice(j))
        vals = [0] * (n0 + 1)
        for n in range(1, n0 + 1):
            if n % 2:
                vals[n] = -_parity_sign(n) * (Aj[n] + re_q[n])
            else:
                vals[n] = _parity_sign(n) * (fj[n] + im_q[n])
        phase.append(fj[0] + im_q[0])
        rows.append(_real_series(field, vals))
    return TruncatedSeries2.from_slices(rows), phase


def _adjusted_A(p: SubtropicalProblem, P) -> TruncatedSeries2:
    field = p.field
    rows = [list(r) for r in p.A.coeffs]
    for m in range(1, p.m0 + 1):
        rows[m][0] = rows[m][0] + field.make(P[m - 1]) * factorial(m)
    return TruncatedSeries2(tuple(tuple(r) for r in rows), p.A.var_label, field)


def _hats(A, f, B, g):
    field = A.field
    m0 = A.degrees[0]
    i = field.make(0, 1)
    ahat = TruncatedSeries2.from_slices(
        [A.slice(m) + f.slice(m).scale(i) for m in range(m0 + 1)])
    bhat = TruncatedSeries2.from_slices(
        [series_substitute_ix(B.slice(m) + g.slice(m).scale(i)) for m in range(m0 + 1)])
    return ahat, bhat


def _link_sides(ahat, bhat):
    m0, n0 = ahat.degrees
    shift = h_power(0, m0, n0, "x", ahat.field).scale(ahat[0, 0])
    lhs = series2_exp(bhat - shift)
    rhs = heat_apply(series2_exp((ahat - shift).resize(m0, n0 + 2 * m0))).resize(m0, n0)
    return lhs, rhs


def link_residual(A: TruncatedSeries2, f: TruncatedSeries2, B: TruncatedSeries2,
                  g: TruncatedSeries2) -> TruncatedSeries2:
    """exp(Bhat(ix) - c) - heat(exp(Ahat - c)) through (m0, n0), c = A_{0,0}."""
    lhs, rhs = _link_sides(*_hats(A, f, B, g))
    return lhs - rhs


def _abs2(s: TruncatedSeries2) -> TruncatedSeries2:
    return TruncatedSeries2(tuple(tuple(complex(abs(s.field.to_complex(c))) for c in r)
                                  for r in s.coeffs), s.var_label, FLOAT)


def link_majorant(A, f, B, g) -> TruncatedSeries2:
    """Coefficientwise bound on the absolute sums behind each link coefficient:
    both sides rebuilt from absolute values of the data (constant removed)."""
    ahat, bhat = _hats(A, f, B, g)
    ahat = _abs2(ahat - h_power(0, *ahat.degrees, "x", ahat.field).scale(ahat[0, 0]))
    bhat = _abs2(bhat - h_power(0, *bhat.degrees, "x", bhat.field).scale(bhat[0, 0]))
    lhs, rhs = _link_sides(ahat, bhat)
    return lhs + rhs


def verify_subtropical(p: SubtropicalProblem, s: SubtropicalSolution,
                       scaled=True) -> float:
    """Max |coefficient| of the link residual through (m0, n0).

    Constants common to both sides are factored out first.  In floating
    point, with ``scaled``, each coefficient is divided by max(1, M) where M
    comes from :func:`link_majorant`; random data easily produce
    coefficients near 1e10, so absolute errors say little there.  In the
    exact backend a constant mismatch at h^0 cannot be exponentiated, so the
    check falls back to floating point.
    """
    field = p.field
    A = _adjusted_A(p, s.P)
    g = s.g.to_field(field)
    rows = [list(r) for r in g.coeffs]
    for m in range(p.m0 + 1):
        rows[m][0] = rows[m][0] + field.make(s.phase[m])
    g = TruncatedSeries2(tuple(tuple(r) for r in rows), "x", field)
    f = s.f.to_field(field)
    args = (A, f, p.B, g)
    try:
        R = link_residual(*args)
    except InexactError:
        args = tuple(a.to_field(FLOAT) for a in args)
        R = link_residual(*args)
    if R.field is not FLOAT and not any(c for r in R.coeffs for c in r):
        return 0.0
    if not scaled:
        return R.max_abs()
    M = link_majorant(*(a.to_field(FLOAT) for a in args))
    return max(abs(R.field.to_complex(R[m, n])) / max(1.0, M[m, n].real)
               for m in range(p.m0 + 1) for n in range(p.n0 + 1))
