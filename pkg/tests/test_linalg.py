from fractions import Fraction

from zeroabel.linalg import IncrementalBasis, hnf, integer_scale, nullspace, rank, rref, solve_integer_combination


def dot(row, v):
    return sum(Fraction(row.get(j, 0)) * v[j] for j in range(len(v)))


def test_rref_and_rank():
    rows = [{0: 1, 1: 2, 2: 3}, {0: 2, 1: 4, 2: 6}, {0: 1, 2: 1}]
    red, piv = rref(rows, 3)
    assert piv == [0, 1]
    assert rank(rows, 3) == 2


def test_nullspace_is_annihilated():
    rows = [{0: 1, 1: 1, 2: 1, 3: 1}, {0: 1, 2: 1}]
    ns = nullspace(rows, 4)
    assert len(ns) == 2
    for v in ns:
        assert all(dot(r, v) == 0 for r in rows)


def test_integer_scale():
    assert integer_scale([Fraction(1, 2), Fraction(-1, 3), Fraction(0)]) == [3, -2, 0]
    assert integer_scale([Fraction(0), Fraction(0)]) == [0, 0]


def test_hnf_shape_and_lattice():
    a = [[2, 4, 6], [1, 3, 5], [3, 7, 11]]
    h = hnf(a)
    pivots = [next(j for j, x in enumerate(r) if x) for r in h]
    assert pivots == sorted(set(pivots))
    for i, r in enumerate(h):
        p = pivots[i]
        assert r[p] > 0
        for r2 in h[:i]:
            assert 0 <= r2[p] < r[p]
    # every original row lies in the row lattice of the result
    for r in a:
        c = solve_integer_combination(h, r)
        assert c is not None and all(x.denominator == 1 for x in c)


def test_solve_integer_combination_none():
    assert solve_integer_combination([[1, 0, 0]], [0, 1, 0]) is None


def test_incremental_basis():
    b = IncrementalBasis(3)
    assert b.add([1, 1, 0])
    assert b.add([0, 1, 1])
    assert not b.add([1, 2, 1])
    assert b.contains([2, 3, 1])
    assert not b.contains([0, 0, 1])
    assert b.dimension == 2
