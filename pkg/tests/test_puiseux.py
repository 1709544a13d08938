from fractions import Fraction

import numpy as np
import pytest

from zeroabel.monodromy import monodromy_data
from zeroabel.poly import ExactPoly
from zeroabel.puiseux import _mul_exact, principal_branch_value, puiseux_branch, puiseux_of_g


def residual_series(f: ExactPoly, K: int) -> list[Fraction]:
    """Coefficients of ``u**m (f(z1) - t)`` up to ``u**(K+1)``."""
    s = puiseux_branch(f, K, exact=True)
    n = K + 2
    Y = [s.coefficient(k - 1) for k in range(n)]  # z1 = Y(u) / u
    acc = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    m = f.degree
    for j in range(m + 1):
        if j:
            power = _mul_exact(power, Y, n)
        off = m - j
        for i in range(n - off):
            acc[i + off] += f[j] * power[i]
    acc[0] -= f.lc
    return acc


def test_branch_satisfies_equation(corpus):
    for f in corpus:
        K = 12
        assert all(c == 0 for c in residual_series(f, K))


def test_leading_term():
    f = ExactPoly([1, 0, -8, 0, 8])
    s = puiseux_branch(f, 4, exact=True)
    assert s.coefficient(-1) == 1


def test_numeric_matches_exact():
    f = ExactPoly([2, 1, 0, -1, 3])
    g = ExactPoly([0, 1, 1])
    ex = puiseux_of_g(f, g, 10, exact=True)
    nu = puiseux_of_g(f, g, 10, exact=False, rho=0.5)
    for k in range(ex.kmin, ex.kmax + 1):
        # numeric coefficients multiply (u/rho)**k
        assert abs(complex(nu.coefficient(k)) / 0.5**k - float(ex.coefficient(k))) < 1e-9 * (
            1 + abs(float(ex.coefficient(k)))
        )


@pytest.mark.parametrize("f", [ExactPoly([1, 0, -8, 0, 8]), ExactPoly([0, -3, 0, 1]),
                               ExactPoly([1, 1, 0, 0, 0, 1])])
def test_series_value_matches_fiber(f):
    data = monodromy_data(f)
    t = data.basepoint * 3
    z, tail = principal_branch_value(f, t)
    assert abs(np.polynomial.polynomial.polyval(z, f.to_complex()) - t) < 1e-8 * abs(t)
    s = puiseux_branch(f, 60)
    for b in range(f.degree):
        zb = s.evaluate(t, b)
        assert abs(np.polynomial.polynomial.polyval(zb, f.to_complex()) - t) < 1e-6 * abs(t)


def test_g_series_evaluates():
    f = ExactPoly([0, 1, 0, 1])
    g = ExactPoly([1, 0, 2])
    t = 50.0
    s = puiseux_of_g(f, g, 40)
    z = puiseux_branch(f, 40).evaluate(t)
    assert abs(s.evaluate(t) - (1 + 2 * z * z)) < 1e-9 * abs(1 + 2 * z * z)
