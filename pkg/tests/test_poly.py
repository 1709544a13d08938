from fractions import Fraction

import numpy as np
import pytest

from zeroabel.errors import InputError
from zeroabel.poly import (
    ExactPoly,
    LaurentPoly,
    compose,
    cyclotomic,
    decompose_degree,
    decomposition_set,
    divides_exact,
    divisors,
    h_adic_expansion,
    poly_gcd,
    prime_factors,
    roots_of,
    squarefree_decomposition,
    totient,
)

Z = ExactPoly.z()


def totient_by_product(n: int) -> int:
    out = n
    for p in {p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))}:
        out = out // p * (p - 1)
    return out


def test_arithmetic_exact():
    p = ExactPoly([1, 2, 3])
    q = ExactPoly([Fraction(1, 2), -1])
    assert (p * q) // q == p
    assert (p * q) % q == ExactPoly([])
    assert p - p == ExactPoly([])
    assert (Z + 1) ** 3 == ExactPoly([1, 3, 3, 1])
    assert p.derivative() == ExactPoly([2, 6])
    assert p.antiderivative().derivative() == p
    assert p(Fraction(1, 2)) == Fraction(1) + 1 + Fraction(3, 4)


def test_divmod_identity(rng):
    for _ in range(20):
        a = ExactPoly(rng.integers(-5, 6, size=7).tolist())
        b = ExactPoly(rng.integers(-5, 6, size=3).tolist() + [1])
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_gcd_and_squarefree():
    a = (Z - 1) ** 2 * (Z + 2)
    b = (Z - 1) * (Z + 3)
    assert poly_gcd(a, b) == Z - 1
    parts = squarefree_decomposition(a)
    rebuilt = ExactPoly([1])
    for factor, mult in parts:
        rebuilt = rebuilt * factor**mult
    assert rebuilt.monic() == a.monic()


@pytest.mark.parametrize("m", range(1, 65))
def test_cyclotomic_product_and_degree(m):
    prod = ExactPoly([1])
    for d in divisors(m):
        prod = prod * cyclotomic(d)
    assert prod == Z**m - 1
    assert cyclotomic(m).degree == totient(m) == totient_by_product(m)


def test_divides_exact():
    assert divides_exact(cyclotomic(4), Z**4 - 1)
    assert not divides_exact(cyclotomic(3), Z**4 - 1)


def test_prime_factors():
    assert prime_factors(210) == [2, 3, 5, 7]
    assert prime_factors(64) == [2]


@pytest.mark.parametrize("m", [2, 4, 6, 12, 30])
def test_decomposition_set_of_power(m):
    assert set(decomposition_set(Z**m)) == set(divisors(m))


def test_decompositions_compose_back(corpus):
    for f in corpus:
        for d, dec in decomposition_set(f).items():
            assert dec.inner.degree == d
            assert compose(dec.outer, dec.inner) == f


def test_chebyshev_decomposition():
    t4 = ExactPoly([1, 0, -8, 0, 8])
    dec = decompose_degree(t4, 2)
    assert dec is not None and compose(dec.outer, dec.inner) == t4
    assert decompose_degree(ExactPoly([1, 0, 1, 1]), 3).inner.degree == 3
    assert set(decomposition_set(Z**5 + Z**2 + 1)) == {1, 5}


def test_decompose_degree_rejects_nondivisor():
    with pytest.raises(InputError):
        decompose_degree(Z**4, 3)


def test_h_adic_expansion():
    h = Z**2 + Z
    g = ExactPoly([3, 0, 1])
    assert h_adic_expansion(compose(g, h), h) == g
    assert h_adic_expansion(Z**3, h) is None


def test_roots_residual_bound(rng):
    for _ in range(40):
        deg = int(rng.integers(1, 11))
        c = rng.integers(-10, 11, size=deg + 1).tolist()
        if c[-1] == 0:
            c[-1] = 1
        p = ExactPoly(c)
        rs = roots_of(p)
        assert len(rs) == p.degree
        pc = np.array([float(x) for x in p.coeffs])
        worst = max(
            abs(np.polynomial.polynomial.polyval(r, pc)) / max(1.0, abs(r)) ** p.degree
            for r in rs.roots
        )
        norm = max(abs(x) for x in c)
        # the reported bound is itself evaluated in floating point
        slack = 8 * np.finfo(float).eps * norm * (p.degree + 1)
        assert worst <= norm * rs.residual_bound + slack
        assert worst <= 1e-9 * (1 + norm)
        assert norm * rs.residual_bound <= 1e-9 * (1 + norm)


def test_roots_with_multiplicity():
    rs = roots_of((Z - 1) ** 3 * (Z + 2))
    vals = sorted(rs.roots, key=lambda r: r.real)
    assert abs(vals[0] + 2) < 1e-9
    assert all(abs(v - 1) < 1e-4 for v in vals[1:])


def test_laurent_basics():
    f = LaurentPoly({1: 1, -1: 1})
    assert f.low == -1 and f.high == 1
    assert (f * f).terms == {2: 1, 0: 2, -2: 1}
    assert f.derivative().terms == {0: 1, -2: -1}
    assert LaurentPoly({-1: 3, 2: 1}).residue() == 3
    assert abs(f(2.0) - 2.5) < 1e-15


def test_string_roundtrip():
    from zeroabel.parse import parse_poly

    for p in [ExactPoly([1, -2, 0, Fraction(3, 4)]), Z**7 - Z, ExactPoly([0, 0, -1])]:
        assert parse_poly(str(p)) == p
