import numpy as np
import pytest

from zeroabel.cycles import (
    ZeroCycle,
    as_cycle,
    congruence_system,
    is_balanced,
    is_totally_unbalanced,
    orbit_span_dimension,
    p_poly,
    project_cycle,
    trivial_projection_space,
)
from zeroabel.errors import InputError
from zeroabel.groups import Permutation
from zeroabel.monodromy import block_systems, conjugacy_class_tau, monodromy_data
from zeroabel.poly import ExactPoly, cyclotomic, totient

Z = ExactPoly.z()


def random_cycle(rng, m):
    while True:
        w = rng.integers(-5, 6, size=m)
        w[-1] -= w.sum()
        if np.any(w):
            return ZeroCycle(w.tolist())


def test_zero_cycle_validation():
    with pytest.raises(InputError):
        ZeroCycle([1, 1])
    with pytest.raises(InputError):
        ZeroCycle([])
    c = ZeroCycle.simple(4, 0, 2)
    assert c.weights == (1, 0, -1, 0)
    assert c.rotated(1).weights == (0, 1, 0, -1)
    assert not c.is_trivial() and ZeroCycle([0, 0]).is_trivial()
    p = Permutation.shift(4)
    assert c.permuted(p).weights == (0, 1, 0, -1)


def test_p_poly_shift():
    assert p_poly([1, -1, 1, -1]) == ExactPoly([1, -1, 1, -1])
    sigma = Permutation.from_cycles(4, [(1, 3, 2, 4)])
    assert p_poly([1, 2, -4, 1], sigma) == ExactPoly([1, -4, 2, 1])


def test_balanced_for_z4():
    shift = [Permutation.shift(4)]
    assert is_balanced([1, -1, 1, -1], shift).balanced
    res = is_balanced([1, -1, 0, 0], shift)
    assert not res.balanced and res.witness == Permutation.shift(4)


def test_balance_invariant_under_written_rotation(rng):
    # a different starting point multiplies P by z^k modulo z^m - 1
    m = 6
    sigma = Permutation.from_cycles(6, [(1, 4, 2, 6, 3, 5)])
    assert sigma.is_full_cycle()
    div = cyclotomic(1) * cyclotomic(m)
    for _ in range(20):
        C = random_cycle(rng, m)
        base = p_poly(C, sigma)
        for start in range(m):
            seq = sigma.cycle_sequence(start)
            rotated = ExactPoly([C.weights[i] for i in seq])
            k = seq.index(0)
            shifted = (rotated * Z ** ((m - k) % m)) % (Z**m - 1)
            assert shifted == base % (Z**m - 1)
            assert ((rotated % div).degree < 0) == ((base % div).degree < 0)


def test_balanced_implies_cyclotomic_division(corpus):
    for f in corpus:
        data = monodromy_data(f)
        gamma = sorted(conjugacy_class_tau(data))
        m = f.degree
        for C in [ZeroCycle([(-1) ** i for i in range(m)]) if m % 2 == 0 else None,
                  ZeroCycle.simple(m, 0, 1)]:
            if C is None:
                continue
            if is_balanced(C, gamma).balanced:
                for s in gamma:
                    P = p_poly(C, s)
                    assert P(1) == 0
                    assert (P % cyclotomic(m)).degree < 0


def test_projection_sums_to_zero(rng):
    f = (Z**2 + Z) ** 3
    data = monodromy_data(f)
    for _ in range(10):
        C = random_cycle(rng, 6)
        for bs in block_systems(data):
            proj = project_cycle(C, bs)
            assert sum(proj.weights) == 0
            assert proj.m == bs.n_blocks


def test_congruence_system():
    bs = congruence_system(6, 3)
    assert bs.blocks == ((0, 3), (1, 4), (2, 5))
    with pytest.raises(InputError):
        congruence_system(6, 4)


@pytest.mark.parametrize("m", range(2, 61))
def test_trivial_projection_dimension(m):
    basis = trivial_projection_space(m)
    assert len(basis) == totient(m)
    for C in basis:
        for bs in [congruence_system(m, m // p) for p in range(2, m + 1)
                   if m % p == 0 and all(p % q for q in range(2, p))]:
            assert project_cycle(C, bs).is_trivial()


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_prime_degree_cycles_totally_unbalanced(p, rng):
    f = Z**p + Z
    data = monodromy_data(f)
    for _ in range(25):
        assert is_totally_unbalanced(f, random_cycle(rng, p), data).totally_unbalanced


def test_classify_quadratic_sixth_power():
    f = (Z**2 + Z) ** 6
    C = ZeroCycle([2, -1, -1, 2, -1, -1] + [0] * 6)
    res = is_totally_unbalanced(f, C)
    kinds = {r.block_size: r.kind for r in res.projections if r.block_size not in (1, 12)}
    assert kinds == {2: "balanced", 4: "unbalanced", 6: "trivial"}
    assert not res.balanced
    assert not res.totally_unbalanced
    assert res.balanced_projection.block_size == 2


def test_orbit_span_dimension():
    f = Z**4
    data = monodromy_data(f)
    assert orbit_span_dimension(data, [1, -1, 1, -1]) == 1
    assert orbit_span_dimension(data, [1, -1, 0, 0]) == 3
    assert orbit_span_dimension(data, [0, 0, 0, 0]) == 0
    g = Z**4 + Z
    assert orbit_span_dimension(monodromy_data(g), [1, -1, 0, 0]) == 3


def test_as_cycle_passthrough():
    c = ZeroCycle([1, -1])
    assert as_cycle(c) is c
    assert as_cycle([2, -2]).weights == (2, -2)
