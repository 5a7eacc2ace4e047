"""Gaussian fluctuation statistics and their wavefunction description.

The h-Fourier transform is the unitary one,
``(2 pi h)^(-n/2) * integral exp(-i y.x/h) psi(x) dx``, with ``h = 2 kB``.
Position-type observables act by multiplication, momentum-type ones as
``-i h d/dx``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FluctuationError(ValueError):
    """Admissibility failure (CLI exit status 2)."""


class DegenerateBasisError(FluctuationError):
    pass


@dataclass(frozen=True)
class FluctKernel:
    A: tuple
    kB: float = 1.0

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        object.__setattr__(self, "A", tuple(map(tuple, A.tolist())))
        if A.shape[0] != A.shape[1]:
            raise FluctuationError("kernel matrix must be square")
        if np.max(np.abs(A - A.T)) > 1e-12 * max(1.0, np.max(np.abs(A))):
            raise FluctuationError("kernel matrix must be symmetric")
        if np.min(np.linalg.eigvalsh(A)) <= 0:
            raise FluctuationError("kernel matrix must be positive definite")
        if not self.kB > 0:
            raise FluctuationError("kB must be positive")

    @property
    def h(self) -> float:
        return 2.0 * self.kB

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.A, dtype=float)

    @property
    def n(self) -> int:
        return len(self.A)

    def inverse(self) -> "FluctKernel":
        return FluctKernel(np.linalg.inv(self.matrix), self.kB)


def _gauss_density(M, kB, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = len(M)
    return float(np.sqrt(np.linalg.det(M)) / (2 * np.pi * kB) ** (n / 2)
                 * np.exp(-(x @ M @ x) / (2 * kB)))


def density_extensive(k: FluctKernel, x) -> float:
    """Density of the extensive fluctuation: covariance kB A^{-1}."""
    return _gauss_density(k.matrix, k.kB, x)


def density_intensive(k: FluctKernel, y) -> float:
    """Density of the intensive fluctuation: covariance kB A."""
    return _gauss_density(np.linalg.inv(k.matrix), k.kB, y)


@dataclass(frozen=True)
class CoherentState:
    """exp(i phase) exp(i y0.x/h) phi_h(x - x0; A)."""

    kernel: FluctKernel
    x0: tuple = None
    y0: tuple = None
    phase: float = 0.0

    def __post_init__(self):
        n = self.kernel.n
        for name in ("x0", "y0"):
            v = getattr(self, name)
            v = (0.0,) * n if v is None else tuple(float(t) for t in np.atleast_1d(v))
            if len(v) != n:
                raise FluctuationError(f"{name} has the wrong dimension")
            object.__setattr__(self, name, v)

    @property
    def norm_const(self) -> float:
        k = self.kernel
        n = k.n
        return 2 ** (n / 4) * np.linalg.det(k.matrix) ** 0.25 / (2 * np.pi * k.h) ** (n / 4)

    def __call__(self, x) -> complex:
        k = self.kernel
        x = np.atleast_1d(np.asarray(x, dtype=float))
        d = x - np.asarray(self.x0)
        gauss = np.exp(-(d @ k.matrix @ d) / (2 * k.h))
        wave = np.exp(1j * ((np.asarray(self.y0) @ x) / k.h + self.phase))
        return complex(self.norm_const * gauss * wave)


def build_wavefunction(k: FluctKernel) -> CoherentState:
    """The centred coherent state whose |.|^2 is the extensive density."""
    return CoherentState(k)


def h_fourier_analytic(state: CoherentState) -> CoherentState:
    """Closed-form transform: A -> A^{-1}, (x0, y0) -> (y0, -x0).

    The global phase exp(i x0.y0/h) is carried in ``phase``.
    """
    k = state.kernel
    x0, y0 = np.asarray(state.x0), np.asarray(state.y0)
    return CoherentState(k.inverse(), tuple(y0), tuple(-x0),
                         state.phase + float(x0 @ y0) / k.h)


def _raw_moment(mu, var, m):
    if m == 0:
        return 1.0
    if m == 1:
        return mu
    if m == 2:
        return mu * mu + var
    if m == 3:
        return mu ** 3 + 3 * mu * var
    if m == 4:
        return mu ** 4 + 6 * mu * mu * var + 3 * var * var
    raise FluctuationError("closed-form moments only for m <= 4; use quadrature")


def moments(state: CoherentState, which: str, j: int, m: int) -> float:
    """<(dE_j)^m> (which="E") or <(dbeta_j)^m> (which="beta")."""
    k = state.kernel
    if which == "E":
        return _raw_moment(state.x0[j], k.kB * np.linalg.inv(k.matrix)[j, j], m)
    if which == "beta":
        return _raw_moment(state.y0[j], k.kB * k.matrix[j, j], m)
    raise FluctuationError("which must be 'E' or 'beta'")


def symmetrized_covariance(state, j: int = 0, l: int = 0) -> float:
    """<(P_j Q_l + Q_l P_j)/2> - <P_j><Q_l>.

    For a coherent state with real kernel this vanishes identically; for a
    one-dimensional complex Gaussian it is the chirp term.
    """
    if isinstance(state, ComplexGaussian1):
        return float(state.expect_R().real)
    # real kernel: P_j psi = (y0_j + i h [A(x - x0)]_j) psi; the imaginary part
    # is odd about x0 after symmetrization, leaving <R> = y0_j x0_l
    expect_R = state.y0[j] * state.x0[l]
    return float(expect_R - state.y0[j] * state.x0[l])


def landau_lifshits_map(hessian_block, dE) -> np.ndarray:
    """Linearized equations of state: dbeta = S'' dE."""
    return np.asarray(hessian_block, dtype=float) @ np.asarray(dE, dtype=float)


# --------------------------------------------------------------------------
# complex Gaussians and the two-branch deformation


@dataclass(frozen=True)
class ComplexGaussian1:
    """coef * exp(-a x^2 / (2h)) with Re a > 0 (one dimension)."""

    a: complex
    h: float
    coef: complex = None

    def __post_init__(self):
        if not complex(self.a).real > 0:
            raise FluctuationError("Re a must be positive")
        if self.coef is None:
            object.__setattr__(self, "coef",
                               complex((complex(self.a).real / (np.pi * self.h)) ** 0.25))

    def __call__(self, x) -> complex:
        x = float(np.atleast_1d(x)[0])
        return complex(self.coef * np.exp(-self.a * x * x / (2 * self.h)))

    def _integrals(self, other):
        # integral of conj(self) * other times x^0 and x^2
        s = (np.conj(self.a) + other.a) / (2 * self.h)
        I0 = np.sqrt(np.pi / s)
        return np.conj(self.coef) * other.coef, I0, I0 / (2 * s)

    def overlap(self, other) -> complex:
        c, I0, _ = self._integrals(other)
        return complex(c * I0)

    def Q2(self, other) -> complex:
        c, _, I2 = self._integrals(other)
        return complex(c * I2)

    def P2(self, other) -> complex:
        # P^2 g_a = (a h - a^2 x^2) g_a
        c, I0, I2 = self._integrals(other)
        a, h = other.a, self.h
        return complex(c * (a * h * I0 - a * a * I2))

    def R(self, other) -> complex:
        # (PQ + QP)/2 g_a = (i a x^2 - i h/2) g_a
        c, I0, I2 = self._integrals(other)
        a, h = other.a, self.h
        return complex(c * (1j * a * I2 - 0.5j * h * I0))

    def expect_R(self) -> complex:
        return self.R(self) / self.overlap(self)

    def fourier(self) -> "ComplexGaussian1":
        """Unitary h-Fourier transform: a -> 1/a, coef -> coef a^{-1/2}."""
        return ComplexGaussian1(1 / self.a, self.h, self.coef / np.sqrt(complex(self.a)))


@dataclass(frozen=True)
class CoherentPair:
    sigma: float
    h: float

    def __post_init__(self):
        if not self.h > 0:
            raise FluctuationError("h must be positive")

    @property
    def kB(self) -> float:
        return self.h / 2

    def branch(self, alpha: int) -> ComplexGaussian1:
        """(pi h)^(-1/4) exp(-x^2 [1 + (-1)^alpha i h sigma] / (2h))."""
        sgn = 1 if alpha == 0 else -1
        return ComplexGaussian1(1 + sgn * 1j * self.h * self.sigma, self.h,
                                (np.pi * self.h) ** -0.25)


@dataclass(frozen=True)
class DensityMatrix2:
    p: tuple

    def __post_init__(self):
        P = np.asarray(self.p, dtype=complex)
        if P.shape != (2, 2):
            raise FluctuationError("density matrix must be 2x2")
        if np.max(np.abs(P - P.conj().T)) > 1e-12:
            raise FluctuationError("density matrix must be Hermitian")
        if abs(np.trace(P) - 1) > 1e-12:
            raise FluctuationError("density matrix must have unit trace")
        if np.min(np.linalg.eigvalsh(P)) < -1e-12:
            raise FluctuationError("density matrix must be positive semidefinite")
        object.__setattr__(self, "p", tuple(map(tuple, P.tolist())))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.p, dtype=complex)


def branch_gram(pair: CoherentPair) -> np.ndarray:
    """Gram matrix of the two branch states; off-diagonal (1 - i h sigma)^(-1/2)
    on the principal branch."""
    c = 1 / np.sqrt(complex(1, -pair.h * pair.sigma))
    return np.array([[1, c], [np.conj(c), 1]], dtype=complex)


def orthonormal_basis(pair: CoherentPair) -> np.ndarray:
    """Rows T with psi_m = sum_k T[m, k] phi_k (Gram-Schmidt from phi_0)."""
    if pair.sigma == 0:
        raise DegenerateBasisError("sigma = 0: the two branch states coincide")
    c = branch_gram(pair)[0, 1]
    nrm = np.sqrt(1 - abs(c) ** 2)
    return np.array([[1, 0], [-c / nrm, 1 / nrm]], dtype=complex)


def _psi_matrix(pair: CoherentPair, op: str) -> np.ndarray:
    phis = [pair.branch(0), pair.branch(1)]
    G = np.array([[getattr(phis[k], op)(phis[l]) for l in range(2)] for k in range(2)])
    T = orthonormal_basis(pair)
    # M[n, m] = <psi_n|O|psi_m>
    return T.conj() @ G @ T.T


def deformed_moments(pair: CoherentPair, P: DensityMatrix2):
    """(varE, varBeta, cov) of rho = sum p_{m,n} |psi_m><psi_n|.

    Both branch states are even, so the first moments vanish and these are
    plain second moments.
    """
    Pm = P.matrix
    out = []
    for op in ("Q2", "P2", "R"):
        val = np.trace(Pm @ _psi_matrix(pair, op))
        out.append(float(val.real))
    return tuple(out)


def sample_density(k: FluctKernel, which: str, grid) -> list:
    """[(point, density)] along the first coordinate axis, for CSV export."""
    fn = density_extensive if which == "E" else density_intensive
    rows = []
    for t in grid:
        pt = np.zeros(k.n)
        pt[0] = t
        rows.append((float(t), fn(k, pt)))
    return rows
