"""Truncated tropical problem: recover the imaginary parts of two
second-derivative series from their real parts.

Given real ``u_1..u_n0`` and ``w_1..w_n0`` the unknowns ``lambda_m`` and
``rho_m`` are tied by

    i^n (w_n + i rho_n) = ((1/f) d/dx)^n (1/f) |_{x=0},
    f(x) = 1 + sum_m (u_m + i lambda_m) x^m / m!.

Order 1 fixes ``lambda_1 = -w_1``, order 2 is a compatibility condition on
``w_2``, orders 3-4 give a quadratic for ``lambda_2`` and every later pair of
orders (2k+1, 2k+2) is a 2x2 linear system for ``(lambda_2k, lambda_2k+1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .series_core import (FLOAT, TruncatedSeries1, get_field, legendre_link_seq)

DEGENERACY_TOL = 1e-12
DISCRIMINANT_CLAMP = 1e-12


class TropicalError(ValueError):
    """Base class for admissibility failures (CLI exit status 2)."""


class InsufficientDataError(TropicalError):
    pass


class InconsistentInputError(TropicalError):
    pass


class NoRealSolutionError(TropicalError):
    pass


class DegenerateRecursionError(TropicalError):
    pass


@dataclass(frozen=True)
class TropicalProblem:
    u: tuple
    w: tuple
    n0: int

    def __post_init__(self):
        if len(self.u) != self.n0 or len(self.w) != self.n0:
            raise ValueError("u and w must both have n0 entries")

    @classmethod
    def from_lists(cls, u, w):
        return cls(tuple(u), tuple(w), len(u))


@dataclass(frozen=True)
class TropicalDiagnostics:
    q: object
    D: object
    cond_w2: bool
    cond_q: bool
    degenerate: bool


@dataclass(frozen=True)
class TropicalSolution:
    lambda_: tuple
    rho: tuple
    branch: int
    residual_norm: float = dc_field(default=0.0, compare=False)

    def to_json(self) -> dict:
        enc = _encoder(self.lambda_)
        return {"branch": self.branch,
                "lambda": [enc(v) for v in self.lambda_],
                "rho": [enc(v) for v in self.rho],
                "residual": float(self.residual_norm)}


def _encoder(values):
    if values and isinstance(values[0], Fraction):
        return str
    return float


def _num(field, x):
    """Real scalar in the backend's number type (float or Fraction)."""
    if field is FLOAT:
        return float(x)
    return x if isinstance(x, Fraction) else Fraction(x)


def _w2_target(u1, w1, u2):
    # u2 - 3 Re{(u1 - i w1)^2}
    return u2 - 3 * (u1 * u1 - w1 * w1)


def _q_value(u, w):
    u1, u2, u3, u4 = u[:4]
    w1, w3, w4 = w[0], w[2], w[3]
    im_cube = w1 ** 3 - 3 * u1 * u1 * w1          # Im (u1 - i w1)^3
    re_quart = u1 ** 4 - 6 * u1 * u1 * w1 * w1 + w1 ** 4  # Re (u1 - i w1)^4
    bracket = w3 - 10 * w1 * u2 - 15 * im_cube
    tail = (w4 + u4 - 15 * u1 * u3 - 10 * u2 * u2
            + 105 * (u1 * u1 - w1 * w1) * u2 - 105 * re_quart)
    return -3 * w1 * bracket / 2 + tail / 10


def check_admissibility(p: TropicalProblem, backend="float") -> TropicalDiagnostics:
    if p.n0 < 4:
        raise InsufficientDataError("the tropical problem needs n0 >= 4")
    field = get_field(backend)
    u = [_num(field, v) for v in p.u]
    w = [_num(field, v) for v in p.w]
    u1, w1 = u[0], w[0]
    target = _w2_target(u1, w1, u[1])
    if field is FLOAT:
        cond_w2 = abs(w[1] - target) <= DEGENERACY_TOL * max(1.0, abs(target))
    else:
        cond_w2 = w[1] == target
    q = _q_value(u, w)
    D = (6 * u1 * w1) ** 2 - 4 * q
    gap = q - (3 * u1 * w1) ** 2
    if field is FLOAT:
        degenerate = abs(gap) < DEGENERACY_TOL * max(1.0, abs(q))
        if -DISCRIMINANT_CLAMP <= D < 0:
            D = 0.0
    else:
        degenerate = gap == 0
    return TropicalDiagnostics(q=q, D=D, cond_w2=cond_w2, cond_q=not degenerate,
                               degenerate=degenerate)


def _series(u, lam, degree, field):
    vals = [field.one]
    for m in range(1, degree + 1):
        vals.append(field.make(u[m - 1], lam[m - 1]))
    return TruncatedSeries1(tuple(vals), "x", field)


def _link_values(u, lam, n, field):
    """L_0..L_n for the coefficients currently in ``lam``."""
    return legendre_link_seq(_series(u, lam, n, field), n)


def _rotate(field, L, n):
    """Return L * (-i)^n, whose real part must equal w_n."""
    turns = (field.one, field.make(0, -1), -field.one, field.make(0, 1))
    return L * turns[n % 4]


def _w_projection(u, lam, n, field):
    L = _link_values(u, lam, n, field)[n]
    return field.real(_rotate(field, L, n))


def _affine_fit(resid, x, steps):
    """Value and finite-step Jacobian of an affine map (exact for affine maps)."""
    r0 = resid(x)
    cols = []
    for j, dj in enumerate(steps):
        xj = list(x)
        xj[j] = xj[j] + dj
        rj = resid(xj)
        cols.append([(a - b) / dj for a, b in zip(rj, r0)])
    return r0, cols


def _solve_affine(resid, n, field, where):
    """Zero of an affine map in n <= 2 unknowns.

    Pass one starts from the origin.  In floating point the values can be
    many orders larger than the slopes, so steps are taken on the scale of
    the values, and later passes re-fit the slopes around the current
    estimate and apply the correction from there.
    """
    x = [_num(field, 0)] * n
    passes = 1 if field is not FLOAT else 3
    for it in range(passes):
        if field is not FLOAT:
            steps = [_num(field, 1)] * n
        elif it == 0:
            steps = [max(1.0, *(abs(r) for r in resid(x)))] * n
        else:
            steps = [max(1.0, abs(v)) for v in x]
        r0, cols = _affine_fit(resid, x, steps)
        if n == 1:
            a = cols[0][0]
            if (field is FLOAT and abs(a) <= DEGENERACY_TOL) or a == 0:
                raise DegenerateRecursionError(f"degenerate: vanishing slope at {where}")
            x = [x[0] - r0[0] / a]
            continue
        (a11, a21), (a12, a22) = cols
        det = a11 * a22 - a12 * a21
        scale = max(abs(a11 * a22), abs(a12 * a21))
        if (field is FLOAT and abs(det) <= DEGENERACY_TOL * scale) or det == 0:
            raise DegenerateRecursionError(f"degenerate: vanishing bracket at {where}")
        d0 = (r0[0] * a22 - r0[1] * a12) / det
        d1 = (r0[1] * a11 - r0[0] * a21) / det
        x = [x[0] - d0, x[1] - d1]
    return x


def _solve_single(u, w, lam, n, field):
    """Order n is linear in lambda_n."""
    def resid(x):
        trial = list(lam)
        trial[n - 1] = x[0]
        return (_w_projection(u, trial, n, field) - w[n - 1],)

    return _solve_affine(resid, 1, field, f"order {n}")[0]


def _solve_pair(u, w, lam, k, field):
    """Solve orders 2k+1 and 2k+2 for (lambda_2k, lambda_2k+1)."""
    i_even, i_odd = 2 * k - 1, 2 * k

    def resid(x):
        trial = list(lam)
        trial[i_even], trial[i_odd] = x
        L = _link_values(u, trial, 2 * k + 2, field)
        r1 = field.real(_rotate(field, L[2 * k + 1], 2 * k + 1)) - w[2 * k]
        r2 = field.real(_rotate(field, L[2 * k + 2], 2 * k + 2)) - w[2 * k + 1]
        return r1, r2

    le, lo = _solve_affine(resid, 2, field, f"orders {2 * k + 1}, {2 * k + 2}")
    return le, lo


def _branch_roots(diag, u1, w1, field):
    if field is FLOAT:
        root = diag.D ** 0.5
    else:
        root = field.real(field.sqrt(field.make(diag.D)))
    centre = -6 * u1 * w1
    plus, minus = (centre + root) / 2, (centre - root) / 2
    if field is FLOAT and root > 0:
        # the root on the side of the centre avoids cancellation; Vieta gives the other
        if centre >= 0:
            minus = diag.q / plus if plus else minus
        else:
            plus = diag.q / minus if minus else plus
    return plus, minus


def solve_tropical(p: TropicalProblem, backend="float") -> list:
    """Both solution branches, ordered by the sign of the root in lambda_2.

    Orders up to n0 do not fix the top even coefficient (lambda_n0 for even
    n0, lambda_{n0-1} for odd n0): it only enters the imaginary projection
    that defines rho.  It is set to zero.
    """
    field = get_field(backend)
    diag = check_admissibility(p, backend)
    if not diag.cond_w2:
        raise InconsistentInputError("inconsistent: w2 != u2 - 3 Re{(u1 - i w1)^2}")
    if diag.D < 0:
        raise NoRealSolutionError("no real solution: negative discriminant")
    if diag.degenerate:
        raise DegenerateRecursionError("degenerate: q equals (3 u1 w1)^2")
    u = [_num(field, v) for v in p.u]
    w = [_num(field, v) for v in p.w]
    n0 = p.n0
    roots = _branch_roots(diag, u[0], w[0], field)
    if diag.D == 0:
        roots = roots[:1]
    out = []
    for branch, lam2 in enumerate(roots):
        lam = [_num(field, 0)] * n0
        lam[0] = -w[0]
        lam[1] = lam2
        lam[2] = _solve_single(u, w, lam, 3, field)
        k = 2
        while 2 * k + 2 <= n0:
            lam[2 * k - 1], lam[2 * k] = _solve_pair(u, w, lam, k, field)
            k += 1
        if n0 % 2 == 1 and n0 >= 5:
            lam[n0 - 1] = _solve_single(u, w, lam, n0, field)
        L = _link_values(u, lam, n0, field)
        rho = tuple(field.imag(_rotate(field, L[n], n)) for n in range(1, n0 + 1))
        sol = TropicalSolution(tuple(lam), rho, branch)
        res = verify_tropical(p, sol, backend)
        out.append(TropicalSolution(sol.lambda_, rho, branch, res))
    return out


def link_majorant(f: TruncatedSeries1, n_max: int) -> list:
    """Link values of 1 - sum |c_m| x^m/m!, which bound the absolute sum of
    every monomial in the corresponding link value of ``f``."""
    coeffs = (1 + 0j,) + tuple(-abs(f.field.to_complex(c)) + 0j for c in f.coeffs[1:])
    return [v.real for v in legendre_link_seq(TruncatedSeries1(coeffs), n_max)]


def verify_tropical(p: TropicalProblem, s: TropicalSolution, backend="float",
                    scaled=True) -> float:
    """Max over orders 1..n0 of |L_n - i^n (w_n + i rho_n)|.

    With ``scaled`` each order is divided by max(1, M_n), M_n from
    :func:`link_majorant`.  Low-order link values of moderate data are O(1)
    while order 12 involves terms near 1e17, so this is the meaningful
    floating-point measure; an exact residual is zero either way.
    """
    field = get_field(backend)
    u = [_num(field, v) for v in p.u]
    lam = [_num(field, v) for v in s.lambda_]
    f = _series(u, lam, p.n0, field)
    L = legendre_link_seq(f, p.n0)
    M = link_majorant(f, p.n0) if scaled else [1.0] * (p.n0 + 1)
    ipow = (field.one, field.make(0, 1), -field.one, field.make(0, -1))
    worst = 0.0
    for n in range(1, p.n0 + 1):
        rhs = ipow[n % 4] * field.make(_num(field, p.w[n - 1]), _num(field, s.rho[n - 1]))
        worst = max(worst, abs(field.to_complex(L[n] - rhs)) / max(1.0, M[n]))
    return worst


def closed_form_lambda3(u, w, lam2):
    """Explicit order-3 link: lambda_3 in terms of lambda_2."""
    u1, u2, w1, w3 = u[0], u[1], w[0], w[2]
    im_cube = w1 ** 3 - 3 * u1 * u1 * w1
    return 10 * u1 * lam2 + w3 - 10 * w1 * u2 - 15 * im_cube
