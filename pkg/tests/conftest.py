import random
from fractions import Fraction

import pytest

from thermopauli.series_core import EXACT, FLOAT, TruncatedSeries2
from thermopauli.subtropical import SubtropicalProblem, compute_c
from thermopauli.tropical import TropicalProblem, _q_value

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def _rat(rng):
    return Fraction(rng.randint(-6, 6), rng.randint(1, 4))


def tropical_instance(n0, rng, exact=False, D=None):
    """Random data satisfying the w2 condition with D > 0 (or the given D).

    w4 is chosen last so that the two lambda_2 roots are prescribed (or so
    that the discriminant is D).
    """
    if exact:
        num = lambda: _rat(rng)  # noqa: E731
        zero = Fraction(0)
    else:
        num = lambda: rng.uniform(-1, 1)  # noqa: E731
        zero = 0.0
    u = [num() for _ in range(n0)]
    w = [num() for _ in range(n0)]
    w[1] = u[1] - 3 * (u[0] ** 2 - w[0] ** 2)
    w[3] = zero
    q0 = _q_value(u, w)
    s = -6 * u[0] * w[0]
    if D is None:
        r1 = num() * 2
        r2 = s - r1
        if abs(r1 - r2) < 0.5:
            r1, r2 = r1 + 1, r2 - 1
        q = r1 * r2
    else:
        q = (s * s - D) / 4
    w[3] = 10 * (q - q0)
    return TropicalProblem(tuple(u), tuple(w), n0)


def subtropical_instance(m0, n0, rng, field=EXACT):
    """Random rational data with consistent order zero and c''(0) a square."""
    A = [[_rat(rng) for _ in range(n0 + 1)] for _ in range(m0 + 1)]
    B = [[_rat(rng) for _ in range(n0 + 1)] for _ in range(m0 + 1)]
    for n in range(0, n0 + 1, 2):
        B[0][n] = (-1) ** (n // 2) * A[0][n]
    B[1][2] = Fraction(0)
    p = SubtropicalProblem(TruncatedSeries2.from_values(A, "x", EXACT),
                           TruncatedSeries2.from_values(B, "x", EXACT))
    s = Fraction(rng.randint(1, 6), rng.randint(1, 4))
    B[1][2] = s * s - compute_c(p).c2
    return SubtropicalProblem(TruncatedSeries2.from_values(A, "x", field),
                              TruncatedSeries2.from_values(B, "x", field))


def chirp_instance(sigma, m0=1, n0=4, field=EXACT):
    A = [[0] * (n0 + 1) for _ in range(m0 + 1)]
    B = [[0] * (n0 + 1) for _ in range(m0 + 1)]
    B[1][2] = Fraction(sigma) ** 2       # sigma^2 y^2 / 2 in divided powers
    return SubtropicalProblem(TruncatedSeries2.from_values(A, "x", field),
                              TruncatedSeries2.from_values(B, "x", field))


@pytest.fixture
def rng():
    return random.Random(20261016)


__all__ = ["tropical_instance", "subtropical_instance", "chirp_instance", "FLOAT", "EXACT"]
