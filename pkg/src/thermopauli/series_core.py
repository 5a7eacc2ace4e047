"""Truncated power series in one and two variables (divided-power convention).

A series of degree ``n0`` stores ``c_0..c_n0`` and stands for
``sum_m c_m x**m / m!``.  In this convention differentiation is a left shift
and products carry binomial weights, which keeps the solvers' bookkeeping
close to the coefficient symbols they manipulate.

Two scalar fields are supported: ``FLOAT`` (Python ``complex``) and
``EXACT`` (Gaussian rationals from sympy's ``QQ_I`` domain).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, isqrt
from typing import Sequence

from sympy.polys.domains import QQ, QQ_I


class SeriesError(ValueError):
    """Base class for series-arithmetic failures."""


class SingularSeriesError(SeriesError):
    """Raised when an operation needs a nonzero constant term."""


class TruncationError(SeriesError):
    """Raised when a request exceeds the available truncation order."""


class InexactError(SeriesError):
    """Raised when the exact field cannot represent a result."""


# --------------------------------------------------------------------------
# scalar fields


class FloatField:
    name = "float"
    zero = 0j
    one = 1 + 0j

    def coerce(self, x):
        if isinstance(x, (list, tuple)):
            return complex(float(x[0]), float(x[1]))
        if hasattr(x, "x") and hasattr(x, "y"):  # QQ_I element
            return complex(float(x.x), float(x.y))
        return complex(x)

    def make(self, re, im=0):
        return complex(float(re), float(im))

    def real(self, c):
        return c.real

    def imag(self, c):
        return c.imag

    def to_complex(self, c):
        return complex(c)

    def sqrt(self, c):
        return cmath.sqrt(c)

    def exp(self, c):
        return cmath.exp(c)

    def log(self, c):
        return cmath.log(c)

    def is_zero(self, c, scale=1.0, tol=1e-12):
        return abs(c) <= tol * max(1.0, scale)

    def encode(self, r):
        return float(r)

    def decode(self, v):
        return float(v)


def _qq(x):
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, float):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    return QQ(x)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _rational_sqrt(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    p, q = f.numerator, f.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


class ExactField:
    name = "exact"
    zero = QQ_I(0, 0)
    one = QQ_I(1, 0)

    def coerce(self, x):
        if isinstance(x, (list, tuple)):
            return QQ_I(_qq(x[0]), _qq(x[1]))
        if isinstance(x, complex):
            return QQ_I(_qq(x.real), _qq(x.imag))
        if hasattr(x, "x") and hasattr(x, "y"):
            return x
        return QQ_I(_qq(x), QQ(0))

    def make(self, re, im=0):
        return QQ_I(_qq(re), _qq(im))

    def real(self, c):
        return _frac(c.x)

    def imag(self, c):
        return _frac(c.y)

    def to_complex(self, c):
        return complex(float(c.x), float(c.y))

    def sqrt(self, c):
        if not c.y:
            r = _rational_sqrt(_frac(c.x))
            if r is not None:
                return self.make(r)
            r = _rational_sqrt(-_frac(c.x))
            if r is not None:
                return self.make(0, r)
        raise InexactError(f"square root of {c} is not a Gaussian rational")

    def exp(self, c):
        if not c:
            return self.one
        raise InexactError("exp of a nonzero constant is not rational")

    def log(self, c):
        if c == self.one:
            return self.zero
        raise InexactError("log of a constant other than 1 is not rational")

    def is_zero(self, c, scale=1.0, tol=0.0):
        return not c

    def encode(self, r):
        return str(r)

    def decode(self, v):
        return Fraction(v)


FLOAT = FloatField()
EXACT = ExactField()


def get_field(name: str):
    if name == "float":
        return FLOAT
    if name == "exact":
        return EXACT
    raise ValueError(f"unknown backend {name!r}")


@lru_cache(maxsize=None)
def _binom_row(n: int, field=None) -> tuple:
    row = tuple(comb(n, k) for k in range(n + 1))
    # exact arithmetic is much faster without int -> QQ_I conversion per product
    return row if field is None else tuple(field.coerce(c) for c in row)


# --------------------------------------------------------------------------
# one-variable series


@dataclass(frozen=True)
class TruncatedSeries1:
    """Series ``sum c_m x^m/m!`` known exactly through ``degree``."""

    coeffs: tuple
    var_label: str = "x"
    field: object = FLOAT

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise SeriesError("a series needs at least one coefficient")

    @classmethod
    def from_values(cls, values: Sequence, var_label="x", field=FLOAT):
        return cls(tuple(field.coerce(v) for v in values), var_label, field)

    @classmethod
    def zeros(cls, degree: int, var_label="x", field=FLOAT):
        return cls((field.zero,) * (degree + 1), var_label, field)

    @classmethod
    def unit(cls, degree: int, var_label="x", field=FLOAT):
        return cls((field.one,) + (field.zero,) * degree, var_label, field)

    @classmethod
    def from_taylor(cls, taylor: Sequence, var_label="x", field=FLOAT):
        """Build from ordinary Taylor coefficients ``t_m`` (c_m = m! t_m)."""
        vals = []
        for m, t in enumerate(taylor):
            vals.append(field.coerce(t) * factorial(m))
        return cls(tuple(vals), var_label, field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, m):
        return self.coeffs[m]

    def __len__(self):
        return len(self.coeffs)

    def _like(self, coeffs):
        return TruncatedSeries1(tuple(coeffs), self.var_label, self.field)

    def _check(self, other):
        if not isinstance(other, TruncatedSeries1):
            raise SeriesError("expected a TruncatedSeries1")
        if other.degree != self.degree or other.var_label != self.var_label:
            raise SeriesError(
                f"mismatched series: degree {self.degree}/{other.degree}, "
                f"label {self.var_label}/{other.var_label}")
        if other.field is not self.field:
            raise SeriesError("mixed scalar backends")

    def __add__(self, other):
        self._check(other)
        return self._like(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return self._like(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return self._like(-a for a in self.coeffs)

    def scale(self, s):
        s = self.field.coerce(s)
        return self._like(s * a for a in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries1):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def truncate(self, degree: int):
        if degree > self.degree:
            raise TruncationError("truncate cannot raise the degree; use pad")
        return self._like(self.coeffs[: degree + 1])

    def pad(self, degree: int):
        """Extend with zeros (valid when the series is a polynomial)."""
        if degree <= self.degree:
            return self.truncate(degree)
        return self._like(self.coeffs + (self.field.zero,) * (degree - self.degree))

    def derivative(self):
        """d/dx; the result is one degree shorter."""
        if self.degree == 0:
            raise TruncationError("derivative of a degree-0 series is unknown")
        return self._like(self.coeffs[1:])

    def antiderivative(self, const=0):
        return self._like((self.field.coerce(const),) + self.coeffs)

    def div_x(self):
        """Divide by x; requires c_0 = 0, loses one degree."""
        if not self.field.is_zero(self.coeffs[0], tol=1e-10):
            raise SingularSeriesError("division by x needs a vanishing constant term")
        return self._like(c / (m + 1) for m, c in enumerate(self.coeffs[1:]))

    def mul_x(self):
        """Multiply by x; gains one degree."""
        return self._like((self.field.zero,) + tuple(
            c * (m + 1) for m, c in enumerate(self.coeffs)))

    def real_part(self):
        f = self.field
        return self._like(f.make(f.real(c)) for c in self.coeffs)

    def imag_part(self):
        f = self.field
        return self._like(f.make(f.imag(c)) for c in self.coeffs)

    def taylor(self) -> list:
        """Ordinary Taylor coefficients c_m / m!."""
        return [c / factorial(m) for m, c in enumerate(self.coeffs)]

    def evaluate(self, x) -> complex:
        total, term = 0j, 1.0 + 0j
        for m, c in enumerate(self.coeffs):
            if m:
                term = term * x / m
            total += self.field.to_complex(c) * term
        return total

    def to_float(self):
        return TruncatedSeries1(
            tuple(self.field.to_complex(c) for c in self.coeffs), self.var_label, FLOAT)

    def to_field(self, field):
        return TruncatedSeries1(
            tuple(field.coerce(c) for c in self.coeffs), self.var_label, field)

    def max_abs(self) -> float:
        return max(abs(self.field.to_complex(c)) for c in self.coeffs)

    def to_json(self) -> dict:
        f = self.field
        return {"degree": self.degree,
                "coeffs": [[f.encode(f.real(c)), f.encode(f.imag(c))] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict, var_label="x", field=FLOAT):
        coeffs = obj["coeffs"]
        if len(coeffs) != obj["degree"] + 1:
            raise SeriesError("coeffs length must equal degree + 1")
        vals = [field.make(field.decode(re), field.decode(im)) for re, im in coeffs]
        return cls(tuple(vals), var_label, field)


@dataclass(frozen=True)
class EvenOddPair:
    even: TruncatedSeries1
    odd: TruncatedSeries1


def series_mul(a: TruncatedSeries1, b: TruncatedSeries1) -> TruncatedSeries1:
    """Divided-power Cauchy product: c_n = sum_k C(n,k) a_k b_{n-k}."""
    a._check(b)
    ac, bc = a.coeffs, b.coeffs
    zero = a.field.zero
    out = []
    for n in range(len(ac)):
        row = _binom_row(n, a.field)
        s = zero
        for k in range(n + 1):
            x, y = ac[k], bc[n - k]
            if x and y:
                s = s + row[k] * (x * y)
        out.append(s)
    return a._like(out)


def series_reciprocal(a: TruncatedSeries1) -> TruncatedSeries1:
    f = a.field
    if f.is_zero(a[0], tol=0.0):
        raise SingularSeriesError("reciprocal of a series with zero constant term")
    r0 = f.one / a[0]
    r = [r0]
    for n in range(1, a.degree + 1):
        row = _binom_row(n, f)
        s = f.zero
        for k in range(1, n + 1):
            if a[k]:
                s = s + row[k] * (a[k] * r[n - k])
        r.append(-r0 * s)
    return a._like(r)


def series_exp(a: TruncatedSeries1) -> TruncatedSeries1:
    f = a.field
    e = [f.exp(a[0])]
    for n in range(a.degree):
        row = _binom_row(n, f)
        s = f.zero
        for k in range(n + 1):
            if a[k + 1]:
                s = s + row[k] * (a[k + 1] * e[n - k])
        e.append(s)
    return a._like(e)


def series_log(a: TruncatedSeries1) -> TruncatedSeries1:
    """Logarithm with the principal branch on the constant term."""
    f = a.field
    if f.is_zero(a[0], tol=0.0):
        raise SingularSeriesError("log of a series with zero constant term")
    if a.degree == 0:
        return a._like([f.log(a[0])])
    r = series_reciprocal(a.truncate(a.degree - 1))
    dlog = series_mul(a.derivative(), r)
    return dlog.antiderivative(f.log(a[0]))


def series_sqrt(a: TruncatedSeries1, sign: int = 1) -> TruncatedSeries1:
    """Square root whose constant term is ``sign`` times the principal root."""
    f = a.field
    if f.is_zero(a[0], tol=0.0):
        raise SingularSeriesError("square root of a series with zero constant term")
    s0 = f.sqrt(a[0])
    if sign < 0:
        s0 = -s0
    s = [s0]
    inv = f.one / (2 * s0)
    for n in range(1, a.degree + 1):
        row = _binom_row(n, f)
        acc = a[n]
        for k in range(1, n):
            acc = acc - row[k] * (s[k] * s[n - k])
        s.append(acc * inv)
    return a._like(s)


def series_substitute_ix(a: TruncatedSeries1) -> TruncatedSeries1:
    """x -> i x, i.e. c_m -> i^m c_m."""
    f = a.field
    powers = (f.one, f.make(0, 1), -f.one, f.make(0, -1))
    return a._like(powers[m % 4] * c for m, c in enumerate(a.coeffs))


def even_odd_split(a: TruncatedSeries1) -> EvenOddPair:
    z = a.field.zero
    even = a._like(c if m % 2 == 0 else z for m, c in enumerate(a.coeffs))
    odd = a._like(c if m % 2 else z for m, c in enumerate(a.coeffs))
    return EvenOddPair(even, odd)


def legendre_link_seq(f: TruncatedSeries1, n_max: int) -> list:
    """Values at 0 of ``((1/f) d/dx)^n (1/f)`` for n = 0..n_max.

    Each application of ``(1/f) d/dx`` consumes one order, so ``n_max`` may
    not exceed the degree of ``f``.
    """
    if n_max > f.degree:
        raise TruncationError(f"n_max={n_max} exceeds series degree {f.degree}")
    if f.field.is_zero(f[0], tol=0.0):
        raise SingularSeriesError("link operator needs f(0) != 0")
    recip = series_reciprocal(f)
    g = recip
    out = [g[0]]
    for n in range(1, n_max + 1):
        dg = g.derivative()
        g = series_mul(recip.truncate(dg.degree), dg)
        out.append(g[0])
    return out


# --------------------------------------------------------------------------
# two-variable series


@dataclass(frozen=True)
class TruncatedSeries2:
    """Series ``sum c_{m,n} h^m x^n / (m! n!)``; rows are h-slices."""

    coeffs: tuple
    var_label: str = "x"
    field: object = FLOAT

    @classmethod
    def zeros(cls, m0: int, n0: int, var_label="x", field=FLOAT):
        row = (field.zero,) * (n0 + 1)
        return cls((row,) * (m0 + 1), var_label, field)

    @classmethod
    def from_values(cls, rows, var_label="x", field=FLOAT):
        rows = [tuple(field.coerce(v) for v in r) for r in rows]
        if len({len(r) for r in rows}) != 1:
            raise SeriesError("ragged coefficient matrix")
        return cls(tuple(rows), var_label, field)

    @classmethod
    def from_slices(cls, slices: Sequence[TruncatedSeries1]):
        s0 = slices[0]
        return cls(tuple(s.coeffs for s in slices), s0.var_label, s0.field)

    @property
    def degrees(self) -> tuple:
        return len(self.coeffs) - 1, len(self.coeffs[0]) - 1

    def __getitem__(self, mn):
        m, n = mn
        return self.coeffs[m][n]

    def slice(self, m: int) -> TruncatedSeries1:
        return TruncatedSeries1(self.coeffs[m], self.var_label, self.field)

    def slices(self) -> list:
        return [self.slice(m) for m in range(len(self.coeffs))]

    def _check(self, other):
        if not isinstance(other, TruncatedSeries2) or other.degrees != self.degrees:
            raise SeriesError("mismatched two-variable series")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries2(tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.coeffs, other.coeffs)),
            self.var_label, self.field)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncatedSeries2(tuple(tuple(-a for a in r) for r in self.coeffs),
                                self.var_label, self.field)

    def scale(self, s):
        s = self.field.coerce(s)
        return TruncatedSeries2(tuple(tuple(s * a for a in r) for r in self.coeffs),
                                self.var_label, self.field)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries2):
            return series2_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def map_slices(self, fn):
        return TruncatedSeries2.from_slices([fn(s) for s in self.slices()])

    def resize(self, m0: int, n0: int):
        """Truncate or zero-pad to degrees (m0, n0)."""
        z = self.field.zero
        rows = []
        for m in range(m0 + 1):
            if m < len(self.coeffs):
                r = self.coeffs[m][: n0 + 1]
                r = r + (z,) * (n0 + 1 - len(r))
            else:
                r = (z,) * (n0 + 1)
            rows.append(r)
        return TruncatedSeries2(tuple(rows), self.var_label, self.field)

    def derivative_x(self):
        return self.map_slices(lambda s: s.derivative())

    def max_abs(self) -> float:
        return max(abs(self.field.to_complex(c)) for r in self.coeffs for c in r)

    def to_field(self, field):
        return TruncatedSeries2(tuple(tuple(field.coerce(c) for c in r) for r in self.coeffs),
                                self.var_label, field)

    def to_json(self) -> dict:
        f = self.field
        m0, n0 = self.degrees
        return {"degrees": [m0, n0],
                "coeffs": [[[f.encode(f.real(c)), f.encode(f.imag(c))] for c in r]
                           for r in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict, var_label="x", field=FLOAT):
        m0, n0 = obj["degrees"]
        rows = obj["coeffs"]
        if len(rows) != m0 + 1 or any(len(r) != n0 + 1 for r in rows):
            raise SeriesError("coefficient matrix shape must be (m0+1) x (n0+1)")
        vals = tuple(tuple(field.make(field.decode(re), field.decode(im)) for re, im in r)
                     for r in rows)
        return cls(vals, var_label, field)


def series2_mul(a: TruncatedSeries2, b: TruncatedSeries2) -> TruncatedSeries2:
    a._check(b)
    sa, sb = a.slices(), b.slices()
    out = []
    for m in range(len(sa)):
        row = _binom_row(m)
        acc = None
        for j in range(m + 1):
            term = series_mul(sa[j], sb[m - j])
            if row[j] != 1:
                term = term.scale(row[j])
            acc = term if acc is None else acc + term
        out.append(acc)
    return TruncatedSeries2.from_slices(out)


def series2_reciprocal(a: TruncatedSeries2) -> TruncatedSeries2:
    sa = a.slices()
    r0 = series_reciprocal(sa[0])
    r = [r0]
    for m in range(1, len(sa)):
        row = _binom_row(m)
        acc = None
        for k in range(1, m + 1):
            term = series_mul(sa[k], r[m - k]).scale(row[k])
            acc = term if acc is None else acc + term
        r.append(-series_mul(r0, acc))
    return TruncatedSeries2.from_slices(r)


def series2_exp(a: TruncatedSeries2) -> TruncatedSeries2:
    """exp via the h-recursion E_{m+1} = sum_k C(m,k) F_{k+1} E_{m-k}."""
    sa = a.slices()
    e = [series_exp(sa[0])]
    for m in range(len(sa) - 1):
        row = _binom_row(m)
        acc = None
        for k in range(m + 1):
            term = series_mul(sa[k + 1], e[m - k]).scale(row[k])
            acc = term if acc is None else acc + term
        e.append(acc)
    return TruncatedSeries2.from_slices(e)


def series2_log(a: TruncatedSeries2) -> TruncatedSeries2:
    sa = a.slices()
    out = [series_log(sa[0])]
    if len(sa) == 1:
        return TruncatedSeries2.from_slices(out)
    r = series2_reciprocal(a).slices()
    for m in range(len(sa) - 1):
        row = _binom_row(m)
        acc = None
        for k in range(m + 1):
            term = series_mul(sa[k + 1], r[m - k]).scale(row[k])
            acc = term if acc is None else acc + term
        out.append(acc)
    return TruncatedSeries2.from_slices(out)


def h_power(m: int, m0: int, n0: int, var_label="x", field=FLOAT) -> TruncatedSeries2:
    """The monomial h^m / m! as a two-variable series."""
    z = TruncatedSeries2.zeros(m0, n0, var_label, field)
    if m > m0:
        return z
    rows = [list(r) for r in z.coeffs]
    rows[m][0] = field.one
    return TruncatedSeries2(tuple(tuple(r) for r in rows), var_label, field)


def heat_apply(a: TruncatedSeries2) -> TruncatedSeries2:
    """Apply exp((h/2) d^2/dx^2): c_{m,n} -> sum_k C(m,k) 2^-k c_{m-k,n+2k}.

    Coefficients that would need x-orders beyond n0 are taken as zero, so the
    caller pads ``a`` first when it stands for a longer series.
    """
    m0, n0 = a.degrees
    f = a.field
    rows = []
    for m in range(m0 + 1):
        row = _binom_row(m, f)
        out = []
        for n in range(n0 + 1):
            s = f.zero
            for k in range(m + 1):
                if n + 2 * k > n0:
                    break
                c = a[m - k, n + 2 * k]
                if c:
                    s = s + c * row[k] / (2 ** k)
            out.append(s)
        rows.append(tuple(out))
    return TruncatedSeries2(tuple(rows), a.var_label, f)


def tritriangular(n: int) -> int:
    """Tt_n = n(n+1)(n+2)(n+3)/8."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("tritriangular numbers are indexed from 1")
    return n * (n + 1) * (n + 2) * (n + 3) // 8
