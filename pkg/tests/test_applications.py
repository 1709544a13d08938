import itertools
from fractions import Fraction

import numpy as np
import pytest

from zeroabel.abelian import is_identically_zero
from zeroabel.applications import (
    OneCycle,
    RationalFunction,
    chebyshev,
    forbidden_residues,
    hyperelliptic_oracle,
    hyperelliptic_phi,
    hyperelliptic_phi_inverse,
    hyperelliptic_xm_condition,
    laurent_branches,
    laurent_is_identically_zero,
    laurent_moment_cycle,
    laurent_moment_oracle,
    moment_cycle,
    moment_oracle,
    radial_moment,
    slow_fast_gbar,
    slow_fast_I,
    zm_solutions,
)
from zeroabel.cycles import ZeroCycle
from zeroabel.errors import InputError
from zeroabel.parse import parse_laurent
from zeroabel.poly import ExactPoly, LaurentPoly, compose

Z = ExactPoly.z()

Z6_CYCLES = {
    (-1, 2, -2, 1, 0, 0): {2, 3, 4},
    (2, -1, -1, 2, -1, -1): {2, 4},
    (1, -1, 1, -1, 1, -1): {3},
}


def test_zm_z4_alternating():
    assert zm_solutions(4, [1, -1, 1, -1]) == {0, 1, 3}


@pytest.mark.parametrize("C, forbidden", Z6_CYCLES.items())
def test_zm_z6_forbidden(C, forbidden):
    assert forbidden_residues(6, C) == forbidden


def test_zm_rejects_unbalanced():
    with pytest.raises(InputError):
        zm_solutions(4, [1, -1, 0, 0])


@pytest.mark.parametrize("C", [(1, -1, 1, -1), *Z6_CYCLES])
def test_zm_rule_matches_evidence(C, rng):
    m = len(C)
    allowed = sorted(zm_solutions(m, C))
    forbidden = sorted(set(range(m)) - set(allowed))
    f = Z**m
    coeffs = [int(x) for x in rng.integers(1, 5, size=2 * m)]
    g = sum((coeffs[j] * Z**j for j in range(2 * m) if j % m in allowed), ExactPoly())
    assert is_identically_zero(f, g, C).passed
    for j in forbidden:
        assert not is_identically_zero(f, g + Z**j, C).passed


def test_chebyshev():
    assert chebyshev(4) == ExactPoly([1, 0, -8, 0, 8])
    assert chebyshev(2) == ExactPoly([-1, 0, 2])
    for a, b in itertools.product(range(1, 13), repeat=2):
        if a * b <= 12:
            assert compose(chebyshev(a), chebyshev(b)) == chebyshev(a * b)


def test_moment_oracle_values():
    f = Z**2 * (Z - 1) ** 2
    assert moment_oracle(f, ExactPoly([1]), 3) == [1, Fraction(1, 30), Fraction(1, 630)]
    assert all(x == 0 for x in moment_oracle(f, f.derivative(), 12))
    h = Z**2 - Z
    g = compose(Z**3 + Z, h)
    assert all(x == 0 for x in moment_oracle(f, g.derivative(), 12))


def test_moment_cycle_report():
    f = Z**2 * (Z - 1) ** 2
    rep = moment_cycle(f)
    assert rep.n0 == rep.n1 == 2
    assert sorted(rep.cycle.weights) == [-2, -2, 2, 2]
    assert rep.totally_unbalanced
    simple = moment_cycle(Z**2 - Z)
    assert sorted(simple.cycle.weights) == [-1, 1]
    with pytest.raises(InputError):
        moment_cycle(Z**2 + Z)


MOMENT_PAIRS = [
    (Z**2 * (Z - 1) ** 2, ExactPoly([1])),
    (Z**2 * (Z - 1) ** 2, None),  # q = f'
    (Z**2 * (Z - 1) ** 2, (Z**2 - Z).derivative()),
    (Z**2 * (Z - 1) ** 2, Z),
    (Z**3 - Z, None),
    (Z**3 - Z, Z**2),
    ((Z**2 - Z) ** 3 + (Z**2 - Z) ** 2, compose(Z**2, Z**2 - Z).derivative()),
    ((Z**2 - Z) ** 3 + (Z**2 - Z) ** 2, ExactPoly([1, 1])),
]


@pytest.mark.parametrize("f,q", MOMENT_PAIRS)
def test_moment_equivalence(f, q):
    q = f.derivative() if q is None else q
    moments = moment_oracle(f, q, 12)
    rep = moment_cycle(f)
    ev = is_identically_zero(f, q.antiderivative(), rep.cycle)
    assert all(x == 0 for x in moments) == ev.passed


def test_laurent_cycles():
    assert laurent_moment_cycle(parse_laurent("z + 1/z")).weights == (1, -1)
    assert laurent_moment_cycle(parse_laurent("z^2 + 1/z")).weights == (2, -1, -1)
    with pytest.raises(InputError):
        laurent_moment_cycle(parse_laurent("z^2"))


def test_laurent_branch_split():
    lb = laurent_branches(parse_laurent("z^2 + 2/z^3"))
    assert (lb.n, lb.m) == (3, 2)
    mags = np.abs(lb.fiber)
    assert mags[:3].max() * 100 < mags[3:].min()


def test_laurent_oracle_values():
    f = parse_laurent("z + 1/z")
    res = laurent_moment_oracle(f, parse_laurent("z - 1/z"), 3)
    # residue of (z + 1/z)(1 + 1/z^2) is 2
    assert res == [0, 2, 0]
    assert all(x == 0 for x in laurent_moment_oracle(f, f, 8))


@pytest.mark.parametrize(
    "f,g",
    [
        ("z + 1/z", "z"),
        ("z + 1/z", "z^2 + 1/z^2"),
        ("z + 1/z", "z - 1/z"),
        ("z^2 + 1/z", "z^2 + 1/z"),
        ("z^2 + 1/z", "z"),
        ("z^2 + 1/z^2", "z^2 + 1/z^2 + z^4 + 1/z^4"),
        ("z^2 + 1/z^2", "z + 1/z"),
    ],
)
def test_laurent_equivalence(f, g):
    F, G = parse_laurent(f), parse_laurent(g)
    oracle = all(x == 0 for x in laurent_moment_oracle(F, G, 12))
    assert laurent_is_identically_zero(F, G).passed == oracle


def test_phi_maps_and_inverts(rng):
    assert hyperelliptic_phi(OneCycle(4, [1, 0, 0])).weights == (-1, 1, 0, 0)
    assert hyperelliptic_phi(OneCycle(4, [1, 1, 0])).weights == (-1, 0, 1, 0)
    for m in [2, 4, 6, 8]:
        for _ in range(20):
            n = rng.integers(-5, 6, size=m - 1).tolist()
            gamma = OneCycle(m, n)
            assert hyperelliptic_phi_inverse(hyperelliptic_phi(gamma)) == gamma
        # matrix on the first m-1 coordinates is triangular with -1 on the diagonal
        M = np.array([hyperelliptic_phi(OneCycle(m, np.eye(m - 1, dtype=int)[i])).weights[:-1]
                      for i in range(m - 1)])
        assert round(abs(np.linalg.det(M))) == 1
    with pytest.raises(InputError):
        OneCycle(3, [1, 0])


def test_radial_moment_quadrature():
    from scipy import integrate

    for j, m in [(0, 4), (2, 4), (3, 6)]:
        val = integrate.quad(lambda s: s**j * np.sqrt(1 - s**m), 0, 1)[0]
        assert abs(val - radial_moment(j, m)) < 1e-10


@pytest.mark.parametrize(
    "kappa, expected",
    [("x^2", True), ("x^3", True), ("x", False), ("1", True), ("x^4+1", True), ("x^5", False)],
)
def test_hyperelliptic_x4(kappa, expected):
    from zeroabel.parse import parse_poly

    C = [1, -1, 1, -1]
    k = parse_poly(kappa)
    assert hyperelliptic_xm_condition(4, C, k) is expected
    assert hyperelliptic_oracle(4, C, k) is expected


def test_slow_fast_gbar_values():
    f = Z**2 / 2
    g1 = slow_fast_gbar(f, Z, h=Z**2)
    assert (g1.num, g1.den) == (ExactPoly([0, Fraction(-1, 2)]), ExactPoly([1]))
    g2 = slow_fast_gbar(f, Z**2 / 2, h=Z**2)
    assert (g2.num, g2.den) == (ExactPoly([Fraction(-1, 2)]), Z)


def test_slow_fast_integral():
    f = compose(Z / 2 + Z**2, Z**2)
    gbar = slow_fast_gbar(f, Z**2 + Z)
    ts = [0.01 * k for k in range(1, 11)]
    assert max(abs(v) for v in slow_fast_I(f, gbar, ts)) < 1e-8
    # the second critical value of z^2/2 + z^3 is 1/54
    small = [0.0015 * k for k in range(1, 11)]
    generic = slow_fast_I(Z**2 / 2 + Z**3, RationalFunction(ExactPoly([-1]), ExactPoly([1])), small)
    assert min(abs(v) for v in generic) > 1e-6


def test_slow_fast_rejects_bad_origin():
    with pytest.raises(InputError):
        slow_fast_gbar(Z**2 + Z, Z)
