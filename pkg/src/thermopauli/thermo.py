"""Entropy models, Legendre transforms, reductions and the chemical/Gibbs scenarios.

Entropy is measured in units of ``kB`` (default 1).  Built-in models carry a
sympy expression, which provides gradients, Hessians and directional
derivatives of any order; models given only as a callable fall back to
central finite differences.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import sympy as sp
from scipy.optimize import brentq

from .series_core import FLOAT, TruncatedSeries1, series_mul


class ThermoError(ValueError):
    """Admissibility failure (CLI exit status 2)."""


class NotQuasiHomogeneousError(ThermoError):
    pass


class TransformUndefinedError(ThermoError):
    pass


class ConvergenceError(ThermoError):
    pass


class UnboundedEntropyError(ThermoError):
    pass


class InfeasibleScenarioError(ThermoError):
    pass


class DegenerateBasisError(ThermoError):
    pass


def _fd_step(x: float) -> float:
    return 1e-5 * (1.0 + abs(x))


@dataclass(frozen=True, eq=False)
class EntropyModel:
    name: str
    dim: int
    func: Callable
    grad_fn: Callable | None = None
    hess_fn: Callable | None = None
    domain: Callable | None = None
    extensive: bool = True
    expr: object = None
    symbols: tuple = ()
    params: dict = field(default_factory=dict)

    def eval(self, E) -> float:
        E = np.asarray(E, dtype=float)
        if not self.in_domain(E):
            raise ThermoError(f"{self.name}: point {E.tolist()} outside the model domain")
        return float(self.func(E))

    def in_domain(self, E) -> bool:
        return True if self.domain is None else bool(self.domain(np.asarray(E, dtype=float)))

    def grad(self, E) -> np.ndarray:
        E = np.asarray(E, dtype=float)
        if self.grad_fn is not None:
            return np.asarray(self.grad_fn(E), dtype=float)
        g = np.empty(self.dim)
        for i in range(self.dim):
            h = _fd_step(E[i])
            e = np.zeros(self.dim)
            e[i] = h
            g[i] = (self.func(E + e) - self.func(E - e)) / (2 * h)
        return g

    def hess(self, E) -> np.ndarray:
        E = np.asarray(E, dtype=float)
        if self.hess_fn is not None:
            return np.asarray(self.hess_fn(E), dtype=float)
        H = np.empty((self.dim, self.dim))
        for i in range(self.dim):
            h = _fd_step(E[i])
            e = np.zeros(self.dim)
            e[i] = h
            H[:, i] = (self.grad(E + e) - self.grad(E - e)) / (2 * h)
        return (H + H.T) / 2

    def directional_derivatives(self, E, direction, order: int) -> list:
        """[d^k/dt^k S(E + t e) at t = 0 for k = 0..order]."""
        E = np.asarray(E, dtype=float)
        e = np.asarray(direction, dtype=float)
        if self.expr is None:
            from .oracle import finite_diff_derivatives
            return [self.eval(E)] + [
                finite_diff_derivatives(lambda t: self.func(E + t * e), 0.0, k)[0]
                for k in range(1, order + 1)]
        t = sp.Symbol("t")
        line = self.expr.subs({s: sp.Float(E[i], 30) + t * sp.Float(e[i], 30)
                               for i, s in enumerate(self.symbols)}, simultaneous=True)
        out = []
        for k in range(order + 1):
            out.append(float(line.subs(t, 0).evalf(30)))
            line = sp.diff(line, t)
        return out


def sympy_model(name: str, expr, symbols: Sequence, domain=None, extensive=True,
                params=None) -> EntropyModel:
    symbols = tuple(symbols)
    f = sp.lambdify([symbols], expr, "numpy")
    gexpr = [sp.diff(expr, s) for s in symbols]
    g = sp.lambdify([symbols], gexpr, "numpy")
    h = sp.lambdify([symbols], [[sp.diff(ge, s) for s in symbols] for ge in gexpr], "numpy")
    return EntropyModel(name=name, dim=len(symbols), func=lambda E: f(tuple(E)),
                        grad_fn=lambda E: g(tuple(E)), hess_fn=lambda E: h(tuple(E)),
                        domain=domain, extensive=extensive, expr=expr, symbols=symbols,
                        params=dict(params or {}))


def sackur_tetrode(kB: float = 1.0, calib: float = 1.0) -> EntropyModel:
    """S(U, V, N) = kB N {log[calib (V/N) (U/N)^(3/2)] + 5/2}.

    ``calib`` bundles the molar-mass and Planck-constant factors.
    """
    U, V, N = sp.symbols("U V N", positive=True)
    expr = kB * N * (sp.log(calib * (V / N) * (U / N) ** sp.Rational(3, 2)) + sp.Rational(5, 2))
    return sympy_model("sackur_tetrode", expr, (U, V, N),
                       domain=lambda E: bool(np.all(E > 0)),
                       params={"kB": kB, "calib": calib})


def quadratic(H, offset: float = 0.0) -> EntropyModel:
    """S(E) = offset - E^T H E / 2 (not extensive)."""
    H = np.atleast_2d(np.asarray(H, dtype=float))
    syms = sp.symbols(f"E0:{H.shape[0]}")
    vec = sp.Matrix(syms)
    expr = sp.nsimplify(offset) - (vec.T * sp.Matrix(H) * vec)[0, 0] / 2
    return sympy_model("quadratic", expr, syms, extensive=False,
                       params={"H": H.tolist(), "offset": offset})


def product(*models: EntropyModel) -> EntropyModel:
    """Direct product: S(a) = sum of the component entropies."""
    sizes = [m.dim for m in models]
    cuts = np.cumsum([0] + sizes)

    def parts(E):
        return [E[cuts[k]:cuts[k + 1]] for k in range(len(models))]

    def func(E):
        return sum(m.func(p) for m, p in zip(models, parts(E)))

    def grad(E):
        return np.concatenate([m.grad(p) for m, p in zip(models, parts(E))])

    def hess(E):
        H = np.zeros((cuts[-1], cuts[-1]))
        for k, (m, p) in enumerate(zip(models, parts(E))):
            H[cuts[k]:cuts[k + 1], cuts[k]:cuts[k + 1]] = m.hess(p)
        return H

    def domain(E):
        return all(m.in_domain(p) for m, p in zip(models, parts(E)))

    expr, syms = None, ()
    if all(m.expr is not None for m in models):
        renamed, syms = [], []
        for k, m in enumerate(models):
            new = sp.symbols(" ".join(f"{s.name}_{k}" for s in m.symbols), positive=True,
                             seq=True)
            renamed.append(m.expr.subs(dict(zip(m.symbols, new)), simultaneous=True))
            syms.extend(new)
        expr, syms = sp.Add(*renamed), tuple(syms)
    return EntropyModel(name="product", dim=int(cuts[-1]), func=func, grad_fn=grad,
                        hess_fn=hess, domain=domain,
                        extensive=all(m.extensive for m in models), expr=expr, symbols=syms,
                        params={"components": [m.name for m in models]})


def linear_change(model: EntropyModel, C) -> EntropyModel:
    """The same system in coordinates E' = C E; intensive beta' = C^{-T} beta."""
    C = np.asarray(C, dtype=float)
    Ci = np.linalg.inv(C)

    def func(Ep):
        return model.func(Ci @ Ep)

    def grad(Ep):
        return Ci.T @ model.grad(Ci @ Ep)

    def hess(Ep):
        return Ci.T @ model.hess(Ci @ Ep) @ Ci

    def domain(Ep):
        return model.in_domain(Ci @ Ep)

    return EntropyModel(name="linear_change", dim=model.dim, func=func, grad_fn=grad,
                        hess_fn=hess, domain=domain, extensive=model.extensive,
                        params={"base": model.name, "C": C.tolist(),
                                "cond": float(np.linalg.cond(C))})


def shifted(model: EntropyModel, q: float) -> EntropyModel:
    """S + q."""
    return EntropyModel(name=model.name, dim=model.dim, func=lambda E: model.func(E) + q,
                        grad_fn=model.grad, hess_fn=model.hess, domain=model.domain,
                        extensive=model.extensive and q == 0,
                        expr=None if model.expr is None else model.expr + q,
                        symbols=model.symbols, params=dict(model.params))


MODELS = {"sackur_tetrode": sackur_tetrode, "quadratic": quadratic,
          "product": product, "linear_change": linear_change}


@dataclass(frozen=True)
class ThermoPoint:
    E: tuple
    beta: tuple

    @classmethod
    def at(cls, S: EntropyModel, E):
        E = np.asarray(E, dtype=float)
        return cls(tuple(E.tolist()), tuple(S.grad(E).tolist()))


@dataclass(frozen=True)
class ReductionSpec:
    C: tuple
    released: tuple

    def __post_init__(self):
        C = np.asarray(self.C, dtype=float)
        if C.shape[0] != C.shape[1] or abs(np.linalg.det(C)) < 1e-14:
            raise ThermoError("reduction matrix must be square and invertible")

    @property
    def cond(self) -> float:
        return float(np.linalg.cond(np.asarray(self.C, dtype=float)))


# --------------------------------------------------------------------------
# canonical entropy and stability


def canonicalize_entropy(S: EntropyModel, point=None, tol=1e-9):
    """Return (S - q, q) where S(lam E) = lam S(E) + q (1 - lam)."""
    E = np.ones(S.dim) if point is None else np.asarray(point, dtype=float)
    s1 = S.eval(E)
    q2 = (S.eval(2 * E) - 2 * s1) / (1 - 2)
    q3 = (S.eval(3 * E) - 3 * s1) / (1 - 3)
    if abs(q2 - q3) > tol * max(1.0, abs(q2), abs(s1)):
        raise NotQuasiHomogeneousError(
            f"not quasi-homogeneous: c(lam)/(1-lam) = {q2} at 2 but {q3} at 3")
    if q2 == 0:
        return S, 0.0
    out = shifted(S, -q2)
    return EntropyModel(name=out.name, dim=out.dim, func=out.func, grad_fn=out.grad_fn,
                        hess_fn=out.hess_fn, domain=out.domain, extensive=True,
                        expr=out.expr, symbols=out.symbols, params=out.params), q2


def check_linear_stability(S: EntropyModel, E):
    """(True, None) when every proper principal block of the Hessian is
    negative definite, else (False, offending index set)."""
    n = S.dim
    if n - 1 > 8:
        raise ThermoError("stability check limited to d <= 8")
    H = S.hess(E)
    scale = max(1.0, float(np.max(np.abs(H))))
    for k in range(1, n):
        for I in itertools.combinations(range(n), k):
            block = H[np.ix_(I, I)]
            if np.max(np.linalg.eigvalsh(block)) >= -1e-12 * scale:
                return False, I
    if n == 1 and H[0, 0] >= 0:
        return False, (0,)
    return True, None


# --------------------------------------------------------------------------
# Legendre transforms and reduction


def _newton_stationary(S, E, idx, target, max_iter=100, tol=1e-12):
    E = np.array(E, dtype=float)
    idx = list(idx)
    for _ in range(max_iter):
        r = S.grad(E)[idx] - target
        if np.max(np.abs(r)) <= tol * max(1.0, np.max(np.abs(target))):
            return E
        J = S.hess(E)[np.ix_(idx, idx)]
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError as exc:
            raise TransformUndefinedError("singular Hessian block") from exc
        t = 1.0
        while t > 1e-12:
            trial = E.copy()
            trial[idx] += t * step
            if S.in_domain(trial) and np.max(np.abs(S.grad(trial)[idx] - target)) < np.max(np.abs(r)):
                break
            t /= 2
        else:
            raise TransformUndefinedError("Newton iteration stalled")
        E = trial
    raise TransformUndefinedError("Newton iteration did not converge")


def legendre_transform_subset(S: EntropyModel, I, point: ThermoPoint):
    """S(E) - sum_{i in I} beta_i E_i at the E solving dS/dE_i = beta_i, i in I.

    The coordinates outside I are held at ``point.E``; the beta values are
    taken from ``point.beta``.  Returns (value, solved E).
    """
    I = sorted(I)
    beta = np.asarray(point.beta, dtype=float)
    E = _newton_stationary(S, point.E, I, beta[I])
    return S.eval(E) - float(beta[I] @ E[I]), E


def reduce(S: EntropyModel, spec: ReductionSpec, start, tol=1e-13, max_iter=500,
           trace=False):
    """Maximize S over the released E' = C E coordinates, holding the rest.

    Newton with backtracking on the released slice, falling back to damped
    gradient ascent when the block is not negative definite.  Returns a
    ThermoPoint in the original coordinates (and the entropy trace when
    asked).
    """
    C = np.asarray(spec.C, dtype=float)
    Ci = np.linalg.inv(C)
    r = list(spec.released)
    E0 = np.asarray(start.E if isinstance(start, ThermoPoint) else start, dtype=float)
    Ep = C @ E0
    s = S.eval(E0)
    hist = [s]
    if not r:
        out = ThermoPoint.at(S, E0)
        return (out, hist) if trace else out

    def grad_r(Ep):
        return (Ci.T @ S.grad(Ci @ Ep))[r]

    for _ in range(max_iter):
        g = grad_r(Ep)
        gscale = max(1.0, float(np.max(np.abs(Ci.T @ S.grad(Ci @ Ep)))))
        if np.max(np.abs(g)) < tol * gscale:
            out = ThermoPoint.at(S, Ci @ Ep)
            return (out, hist) if trace else out
        H = (Ci.T @ S.hess(Ci @ Ep) @ Ci)[np.ix_(r, r)]
        try:
            np.linalg.cholesky(-H)
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            step = g / max(1.0, float(np.linalg.norm(g)))
        slope = float(g @ step)
        t = 1.0
        if slope < 1e-13 * max(1.0, abs(s)):
            # predicted gain below rounding: plain Newton endgame
            trial = Ep.copy()
            trial[r] += step
            if S.in_domain(Ci @ trial):
                Ep, s = trial, max(s, S.eval(Ci @ trial))
                hist.append(s)
                continue
        while True:
            trial = Ep.copy()
            trial[r] += t * step
            Et = Ci @ trial
            if S.in_domain(Et):
                st = S.eval(Et)
                if st >= s + 1e-4 * t * slope:
                    break
            t /= 2
            if t < 1e-14:
                # no ascent possible at machine precision: accept the point
                if np.max(np.abs(g)) < 1e-6 * gscale:
                    out = ThermoPoint.at(S, Ci @ Ep)
                    return (out, hist) if trace else out
                raise ConvergenceError("line search failed")
        Ep, s = trial, st
        hist.append(s)
        if not np.isfinite(s) or np.max(np.abs(Ep)) > 1e15:
            raise UnboundedEntropyError("entropy unbounded on the released slice")
    raise ConvergenceError("reduction did not converge")


# --------------------------------------------------------------------------
# chemistry and the Gibbs scenario


@dataclass(frozen=True)
class ChemicalScenario:
    N0: float
    N1: float
    N2: float
    K: float
    U: float = 1.0
    V: float = 1.0

    def __post_init__(self):
        if min(self.N0, self.N1, self.N2) < 0:
            raise InfeasibleScenarioError("mole numbers must be non-negative")
        if not self.K > 0:
            raise InfeasibleScenarioError("equilibrium constant must be positive")


def chemical_shift(s: ChemicalScenario) -> float:
    """Reaction extent x of A + B = 2C with K = (N2 + 2x)^2 / ((N0 - x)(N1 - x)).

    On the admissible interval [-N2/2, min(N0, N1)] the residual
    (N2 + 2x)^2 - K (N0 - x)(N1 - x) is increasing, negative at the left end
    and positive at the right, so the root there is unique.
    """
    lo, hi = -s.N2 / 2, min(s.N0, s.N1)
    if hi < lo or (hi == lo == 0 and s.N2 == 0):
        raise InfeasibleScenarioError("no admissible reaction extent")

    def g(x):
        return (s.N2 + 2 * x) ** 2 - s.K * (s.N0 - x) * (s.N1 - x)

    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    scale = max(1.0, s.N0, s.N1, s.N2)
    return brentq(g, lo, hi, xtol=1e-15 * scale, rtol=4 * np.finfo(float).eps, maxiter=500)


def _smoothstep(t: float) -> float:
    t = min(1.0, max(0.0, t))
    return t * t * (3 - 2 * t)


def default_K_of_eps(eps: float, eps0: float) -> float:
    """log10 K rises linearly from -12 at eps0/2 to +12 at eps0."""
    t = (eps - eps0 / 2) / (eps0 / 2)
    return 10.0 ** (-12 + 24 * min(1.0, max(0.0, t)))


@dataclass(frozen=True)
class GibbsScenario:
    u: float
    v: float
    n: float
    M0: float
    M1: float
    eps0: float
    K_of_eps: Callable | None = None
    kB: float = 1.0
    calib: float = 1.0

    @property
    def M2(self) -> float:
        return (self.M0 + self.M1) / 2

    @property
    def eps(self) -> float:
        return abs(self.M0 - self.M1) / self.M2

    @property
    def K(self) -> float:
        fn = self.K_of_eps or default_K_of_eps
        return fn(self.eps, self.eps0)

    @property
    def distinguishability(self) -> float:
        """0 below eps0/2 (A, B, C indistinguishable), 1 above eps0."""
        return _smoothstep((self.eps - self.eps0 / 2) / (self.eps0 / 2))


def gibbs_entropy(g: GibbsScenario) -> EntropyModel:
    """S(U, V, N0, N1, N2) = S_M(U, V, N0 + N1 + N2) + chi kB N2 log 2.

    With chi = 0 the three substances are one gas; with chi = 1 each mole of
    the product carries the two-fold identity entropy of a red/blue pair.
    """
    U, V, N0, N1, N2 = sp.symbols("U V N0 N1 N2", positive=True)
    N = N0 + N1 + N2
    chi = g.distinguishability
    SM = g.kB * N * (sp.log(g.calib * (V / N) * (U / N) ** sp.Rational(3, 2)) + sp.Rational(5, 2))
    expr = SM + chi * g.kB * N2 * sp.log(2)
    return sympy_model("gibbs", expr, (U, V, N0, N1, N2),
                       domain=lambda E: bool(E[0] > 0 and E[1] > 0 and np.all(E[2:] >= 0)
                                             and np.sum(E[2:]) > 0))


@dataclass(frozen=True)
class GibbsResult:
    S_in: float
    S_out: float
    S_mix: float
    x: float
    K: float
    eps: float


def mixing_entropy(g: GibbsScenario) -> GibbsResult:
    S = gibbs_entropy(g)
    a0 = np.array([g.u, g.v, g.n, 0.0, 0.0])
    a1 = np.array([g.u, g.v, 0.0, g.n, 0.0])
    S_in = S.eval(a0) + S.eval(a1)
    # thermal contact first: release (U0 - U1)/2 with everything else held
    comp = product(S, S)
    C = np.eye(10)
    C[0, :] = 0
    C[0, 0] = C[0, 5] = 1
    C[5, :] = 0
    C[5, 0], C[5, 5] = 0.5, -0.5
    b = reduce(comp, ReductionSpec(tuple(map(tuple, C)), (5,)), np.concatenate([a0, a1]))
    Eb = np.asarray(b.E)
    merged = Eb[:5] + Eb[5:]
    K = g.K
    x = chemical_shift(ChemicalScenario(merged[2], merged[3], merged[4], K, merged[0], merged[1]))
    out = merged.copy()
    out[2:] += (-x, -x, 2 * x)
    out[2:] = np.maximum(out[2:], 0.0)
    S_out = S.eval(out)
    return GibbsResult(S_in=S_in, S_out=S_out, S_mix=S_out - S_in, x=x, K=K, eps=g.eps)


# --------------------------------------------------------------------------
# the pair of one-dimensional expansions


def _compose(F: TruncatedSeries1, X: TruncatedSeries1) -> TruncatedSeries1:
    """F(X) for X with zero constant term (divided-power coefficients)."""
    out = TruncatedSeries1.zeros(X.degree, X.var_label, X.field)
    power = TruncatedSeries1.unit(X.degree, X.var_label, X.field)
    for m in range(F.degree + 1):
        if m:
            power = series_mul(power, X)
        out = out + power.scale(F[m] / math.factorial(m))
    return out


def _reversion(F: TruncatedSeries1) -> TruncatedSeries1:
    """Compositional inverse of F with F(0) = 0, F'(0) != 0."""
    n = F.degree
    lin = F[1]
    y = TruncatedSeries1.from_values([0, 1] + [0] * (n - 1), "y", FLOAT)
    nonlin = F._like((0,) * 2 + F.coeffs[2:])
    nonlin = TruncatedSeries1(nonlin.coeffs, "y", FLOAT)
    X = y.scale(1 / lin)
    for _ in range(n):
        X = (y - _compose(nonlin, X)).scale(1 / lin)
    return X


def expansion_pair(S: EntropyModel, E, n0: int, direction=None):
    """Normalized second-derivative series U(x) and W(y) along ``direction``.

    U is S'' of S(E + x e), W is Phi'' of its one-dimensional Legendre
    transform, both rescaled so that U(0) = W(0) = 1 and the product of the
    unscaled second derivatives at 0 is -1.  W is computed by series
    reversion of the equation of state, not from the link formula, so the
    identities relating their coefficients are a genuine check.
    """
    if direction is None:
        direction = np.eye(S.dim)[-1]
    d = S.directional_derivatives(E, direction, n0 + 2)
    s2 = d[2]
    if not s2 < 0:
        raise ThermoError("not linearly stable along the chosen direction")
    a = -s2
    u = [1.0] + [d[m + 2] / s2 * a ** (-m / 2) for m in range(1, n0 + 1)]
    # beta shift y as a series in the energy shift xi: y = sum_{m>=1} d_{m+1} xi^m/m!
    F = TruncatedSeries1.from_values([0.0] + [d[m + 1] for m in range(1, n0 + 2)], "y", FLOAT)
    X = _reversion(F)
    w = [-a ** ((n + 2) / 2) * X[n + 1].real for n in range(n0 + 1)]
    return (TruncatedSeries1.from_values(u, "x", FLOAT),
            TruncatedSeries1.from_values(w, "y", FLOAT))


def pure_state_compatibility(U: TruncatedSeries1, W: TruncatedSeries1, tol=1e-6) -> bool:
    """True iff w2 = u2 and 2 u2 = 3 u1^2 within ``tol`` (relative)."""
    u1, u2 = U[1].real, U[2].real
    w2 = W[2].real
    scale = max(1.0, abs(u2), abs(w2), u1 * u1)
    return abs(w2 - u2) <= tol * scale and abs(2 * u2 - 3 * u1 * u1) <= tol * scale
