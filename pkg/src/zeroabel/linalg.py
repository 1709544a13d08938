"""Exact rational linear algebra on sparse rows.

Rows are ``dict[int, Fraction]`` keyed by column. The equation systems
met here (block sums, orbit spans) are 0/1 sparse, and dictionary rows
keep elimination on a 247 x 210 system well under a second.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Row = dict[int, Fraction]


def _to_row(v) -> Row:
    if isinstance(v, dict):
        return {k: Fraction(x) for k, x in v.items() if x != 0}
    return {k: Fraction(x) for k, x in enumerate(v) if x != 0}


def rref(rows: Iterable, ncols: int) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [_to_row(r) for r in rows]
    work = [r for r in work if r]
    pivots: list[int] = []
    reduced: list[Row] = []
    for col in range(ncols):
        pick = None
        for i, r in enumerate(work):
            if col in r and (pick is None or len(r) < len(work[pick])):
                pick = i
        if pick is None:
            continue
        prow = work.pop(pick)
        inv = 1 / prow[col]
        prow = {k: v * inv for k, v in prow.items()}
        for r in work:
            f = r.get(col)
            if f:
                for k, v in prow.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        for r in reduced:
            f = r.get(col)
            if f:
                for k, v in prow.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        work = [r for r in work if r]
        reduced.append(prow)
        pivots.append(col)
    return reduced, pivots


def rank(rows: Iterable, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Iterable, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}``, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for prow, pc in zip(reduced, pivots):
            coef = prow.get(free)
            if coef:
                v[pc] = -coef
        basis.append(v)
    return basis


def integer_scale(v: Sequence[Fraction]) -> list[int]:
    """Smallest integer multiple of ``v`` with coprime entries."""
    den = 1
    for x in v:
        den = den // math.gcd(den, x.denominator) * x.denominator
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix.

    Rows of the result are nonzero, pivots strictly move right, pivots
    are positive and entries above a pivot lie in ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    out: list[list[int]] = []
    piv_cols: list[int] = []
    r0 = 0
    for col in range(ncols):
        nz = [i for i in range(r0, len(a)) if a[i][col] != 0]
        if not nz:
            continue
        # Euclid on the column until one nonzero entry remains
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(a[i][col]))
            p = nz[0]
            for i in nz[1:]:
                q = a[i][col] // a[p][col]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
            nz = [i for i in nz if a[i][col] != 0]
        p = nz[0]
        a[r0], a[p] = a[p], a[r0]
        if a[r0][col] < 0:
            a[r0] = [-x for x in a[r0]]
        piv = a[r0][col]
        for i in range(r0):
            q = a[i][col] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r0])]
        piv_cols.append(col)
        r0 += 1
        if r0 == len(a):
            break
    out = [row for row in a[:r0]]
    return out


def solve_integer_combination(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i basis_i == v`` over the rationals."""
    ncols = len(v)
    k = len(basis)
    # augmented system: columns are basis vectors
    rows = []
    for j in range(ncols):
        row = {i: Fraction(basis[i][j]) for i in range(k) if basis[i][j]}
        if v[j]:
            row[k] = Fraction(-v[j])
        rows.append(row)
    red, piv = rref(rows, k + 1)
    if k in piv:
        return None
    sol = [Fraction(0)] * k
    for r, pc in zip(red, piv):
        sol[pc] = -r.get(k, Fraction(0))
    return sol


class IncrementalBasis:
    """Echelon basis that accepts vectors one at a time."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[tuple[int, Row]] = []

    def _reduce(self, v: Row) -> Row:
        v = dict(v)
        for piv, row in self.rows:
            f = v.get(piv)
            if f:
                for k, x in row.items():
                    nv = v.get(k, 0) - f * x
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def contains(self, v) -> bool:
        return not self._reduce(_to_row(v))

    def add(self, v) -> bool:
        """Add ``v``; return True when it enlarged the span."""
        r = self._reduce(_to_row(v))
        if not r:
            return False
        piv = min(r)
        inv = 1 / r[piv]
        r = {k: x * inv for k, x in r.items()}
        self.rows.append((piv, r))
        return True

    @property
    def dimension(self) -> int:
        return len(self.rows)
