"""Puiseux expansions at infinity.

For ``f`` of degree ``m`` with leading coefficient ``lc`` put
``T = t / lc`` and ``u = T**(-1/m)`` (principal branch). The branch

    z_1(t) = u**-1 * y(u),   y(0) = 1,

solves ``y**m + sum_{j<m} (a_j/lc) u**(m-j) y**j = 1`` and ``y`` has
rational coefficients. Series are stored as coefficients of ``u**k``.

Going once counter-clockwise around a large circle sends ``u`` to
``u * eps**-1`` with ``eps = exp(2 pi i / m)``, so the branch labelled
``i`` (1-based) is the series evaluated at ``u * eps**-(i-1)``.

Numeric series accept a scale ``rho`` and return coefficients of
``(u / rho)**k``, which keeps long expansions inside floating range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .poly import ExactPoly, as_poly


def _mul_exact(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _mul_num(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    out = np.convolve(a[:n], b[:n])[:n]
    if len(out) < n:
        out = np.concatenate([out, np.zeros(n - len(out), dtype=out.dtype)])
    return out


def _pow(y, e: int, n: int, mul: Callable, one):
    result = one
    base = y
    while e:
        if e & 1:
            result = mul(result, base, n)
        e >>= 1
        if e:
            base = mul(base, base, n)
    return result


def _inverse(a, n: int, mul: Callable, one, exact: bool):
    """Series inverse by Newton doubling."""
    inv = [1 / a[0]] if exact else np.array([1.0 / a[0]], dtype=np.complex128)
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        ai = mul(a, inv, prec)
        if exact:
            corr = [-x for x in ai]
            corr[0] += 2
        else:
            corr = -ai
            corr[0] += 2.0
        inv = mul(inv, corr, prec)
    return inv


def _branch_y(f: ExactPoly, n: int, exact: bool, rho: float = 1.0):
    f = as_poly(f)
    m = f.degree
    coef = [f[j] / f.lc for j in range(m)]
    if exact:
        terms = [(j, coef[j]) for j in range(m) if coef[j] != 0]
        mul = _mul_exact
        one = [Fraction(1)] + [Fraction(0)] * (n - 1)
        y = [Fraction(1)]
    else:
        terms = [(j, complex(coef[j]) * rho ** (m - j)) for j in range(m) if coef[j] != 0]
        mul = _mul_num
        one = np.zeros(n, dtype=np.complex128)
        one[0] = 1.0
        y = np.array([1.0 + 0j])

    def pad(s, prec):
        if exact:
            s = list(s[:prec])
            return s + [Fraction(0)] * (prec - len(s))
        s = np.asarray(s[:prec], dtype=np.complex128)
        if len(s) < prec:
            s = np.concatenate([s, np.zeros(prec - len(s), dtype=np.complex128)])
        return s

    def shifted(s, k, prec):
        # multiply by u**k, truncate
        if exact:
            return ([Fraction(0)] * k + list(s))[:prec] + [Fraction(0)] * max(0, prec - len(s) - k)
        out = np.zeros(prec, dtype=np.complex128)
        if k < prec:
            out[k:] = s[: prec - k]
        return out

    if not terms:
        # f = lc z^m: y == 1 exactly
        return pad(one, n)

    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        y = pad(y, prec)
        onep = pad(one, prec)
        ypow_m1 = _pow(y, m - 1, prec, mul, onep)
        ypow_m = mul(ypow_m1, y, prec)
        F = ypow_m
        Fy = [m * x for x in ypow_m1] if exact else m * ypow_m1
        # lower-order terms
        cache = {0: onep, 1: y}
        for j, a in terms:
            if j not in cache:
                cache[j] = _pow(y, j, prec, mul, onep)
            if j - 1 not in cache and j >= 1:
                cache[j - 1] = _pow(y, j - 1, prec, mul, onep)
            tj = shifted(cache[j], m - j, prec)
            if exact:
                F = [x + a * v for x, v in zip(F, tj)]
            else:
                F = F + a * tj
            if j >= 1:
                tj1 = shifted(cache[j - 1], m - j, prec)
                if exact:
                    Fy = [x + j * a * v for x, v in zip(Fy, tj1)]
                else:
                    Fy = Fy + (j * a) * tj1
        if exact:
            F = list(F)
            F[0] -= 1
        else:
            F = F.copy()
            F[0] -= 1.0
        step = mul(F, _inverse(Fy, prec, mul, onep, exact), prec)
        if exact:
            y = [a - b for a, b in zip(y, step)]
        else:
            y = y - step
    return pad(y, n)


@dataclass(frozen=True)
class PuiseuxSeries:
    """Truncated series ``sum_k s_k u**k`` with ``u = (t/lc)**(-1/m)``.

    ``coeffs[k]`` holds ``s_k`` for ``kmin <= k <= kmax``; ``rho`` is the
    scale used for numeric coefficients (``s_k`` multiplies
    ``(u/rho)**k``). Exact series have ``rho == 1``.
    """

    m: int
    lc: Fraction
    kmin: int
    coeffs: tuple = field(repr=False)
    rho: float = 1.0
    exact: bool = False

    @property
    def kmax(self) -> int:
        return self.kmin + len(self.coeffs) - 1

    def coefficient(self, k: int):
        i = k - self.kmin
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0) if self.exact else 0j

    def as_dict(self) -> dict[int, object]:
        return {self.kmin + i: c for i, c in enumerate(self.coeffs) if c != 0}

    def u_of(self, t: complex) -> complex:
        return complex(t / complex(self.lc)) ** (-1.0 / self.m)

    def evaluate(self, t: complex, branch: int = 0) -> complex:
        """Value of branch ``branch`` (0-based) at ``t``."""
        u = self.u_of(t) * np.exp(-2j * np.pi * branch / self.m)
        v = u / self.rho
        ks = np.arange(self.kmin, self.kmax + 1)
        c = np.array([complex(x) for x in self.coeffs])
        return complex(np.sum(c * v**ks))

    def t_coefficients(self) -> dict[int, complex]:
        """Coefficients of ``t**(-k/m)`` (principal ``lc**(k/m)``)."""
        out = {}
        lcm = complex(self.lc)
        for k, c in self.as_dict().items():
            out[k] = complex(c) * lcm ** (k / self.m) / self.rho**k
        return out

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "lc": str(self.lc),
            "kmin": self.kmin,
            "kmax": self.kmax,
            "rho": self.rho,
            "coefficients": [
                str(c) if self.exact else [complex(c).real, complex(c).imag] for c in self.coeffs
            ],
        }


def puiseux_branch(f: ExactPoly, order: int, exact: bool = False, rho: float = 1.0) -> PuiseuxSeries:
    """Series of the principal branch ``z_1`` with ``-1 <= k <= order``."""
    f = as_poly(f)
    if order < 0:
        raise ValueError("order must be non-negative")
    y = _branch_y(f, order + 2, exact, rho)
    if exact:
        coeffs = tuple(y)
    else:
        coeffs = tuple(complex(v) / rho for v in y)
    return PuiseuxSeries(m=f.degree, lc=f.lc, kmin=-1, coeffs=coeffs, rho=rho, exact=exact)


def puiseux_of_g(f: ExactPoly, g: ExactPoly, order: int, exact: bool = False, rho: float = 1.0) -> PuiseuxSeries:
    """Series of ``g(z_1(t))`` for ``-deg g <= k <= order``."""
    f, g = as_poly(f), as_poly(g)
    e = max(g.degree, 0)
    n = order + e + 1
    if n <= 0:
        return PuiseuxSeries(m=f.degree, lc=f.lc, kmin=-e, coeffs=(), rho=rho, exact=exact)
    y = _branch_y(f, n, exact, rho)
    mul = _mul_exact if exact else _mul_num
    if exact:
        acc = [Fraction(0)] * n
        power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    else:
        acc = np.zeros(n, dtype=np.complex128)
        power = np.zeros(n, dtype=np.complex128)
        power[0] = 1.0
    # g(z1) = sum_j g_j u**-j y**j ; index i of the output is k = i - e
    for j in range(e + 1):
        if j:
            power = mul(power, y, n)
        gj = g[j]
        if gj == 0:
            continue
        # u**-j y**j contributes at k = i - j  ->  output index i - j + e
        off = e - j
        if exact:
            for i in range(n - off):
                acc[i + off] += gj * power[i]
        else:
            scale = complex(gj) * rho ** (-j)
            acc[off:] += scale * power[: n - off] if off < n else 0
    if exact:
        coeffs = tuple(acc)
    else:
        # coefficient of (u/rho)**k: c_k rho**k where c_k multiplies u**k
        coeffs = tuple(complex(v) for v in acc)
    return PuiseuxSeries(m=f.degree, lc=f.lc, kmin=-e, coeffs=coeffs, rho=rho, exact=exact)


def principal_branch_value(f: ExactPoly, t: complex, terms: int | None = None) -> tuple[complex, float]:
    """Approximate ``z_1(t)`` and the size of the last term used."""
    f = as_poly(f)
    m = f.degree
    n = terms or min(max(8 * m, 64), 4000)
    u = complex(t / complex(f.lc)) ** (-1.0 / m)
    rho = abs(u)
    y = _branch_y(f, n, exact=False, rho=rho)
    v = u / rho
    vals = y * v ** np.arange(n)
    return complex(np.sum(vals) / u), float(np.max(np.abs(vals[-4:])))
