"""Exact univariate polynomials over the rationals.

:class:`ExactPoly` stores ascending coefficients as :class:`fractions.Fraction`
and never rounds. Products are formed on integer numerators with a shared
denominator, which keeps degree-200 arithmetic fast enough in pure Python.
Complex root finding lives here too, but only as a consumer of exact data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, InputError

Rational = Fraction | int


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _int_convolve(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class ExactPoly:
    """Polynomial with exact rational coefficients in ascending order.

    The zero polynomial has ``degree == -1``. Instances are immutable and
    hashable so they can key caches.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c: tuple[Fraction, ...] = tuple(c)
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, a) -> "ExactPoly":
        return cls([a])

    @classmethod
    def z(cls) -> "ExactPoly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, a=1) -> "ExactPoly":
        if k < 0:
            raise InputError("monomial exponent must be non-negative")
        return cls([0] * k + [a])

    @classmethod
    def parse(cls, text: str) -> "ExactPoly":
        from .parse import parse_poly

        return parse_poly(text)

    # basic accessors
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    @property
    def lc(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c)

    def support(self) -> list[int]:
        return [k for k, c in enumerate(self._c) if c != 0]

    # equality and hashing
    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ExactPoly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("ExactPoly", self._c))
        return self._hash

    # arithmetic
    @staticmethod
    def _coerce(x) -> "ExactPoly":
        if isinstance(x, ExactPoly):
            return x
        return ExactPoly([x])

    def __add__(self, other) -> "ExactPoly":
        o = self._coerce(other)
        n = max(len(self._c), len(o._c))
        return ExactPoly([self[k] + o[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "ExactPoly":
        return ExactPoly([-c for c in self._c])

    def __sub__(self, other) -> "ExactPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ExactPoly":
        return self._coerce(other) - self

    def _scaled_ints(self) -> tuple[list[int], int]:
        den = 1
        for c in self._c:
            den = _lcm(den, c.denominator)
        return [int(c * den) for c in self._c], den

    def __mul__(self, other) -> "ExactPoly":
        if not isinstance(other, ExactPoly):
            a = _frac(other)
            return ExactPoly([a * c for c in self._c])
        if self.is_zero() or other.is_zero():
            return ExactPoly()
        a, da = self._scaled_ints()
        b, db = other._scaled_ints()
        den = da * db
        return ExactPoly([Fraction(x, den) for x in _int_convolve(a, b)])

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactPoly":
        a = _frac(other)
        if a == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        return ExactPoly([c / a for c in self._c])

    def __pow__(self, k: int) -> "ExactPoly":
        if k < 0:
            raise InputError("negative powers are not polynomials")
        result = ExactPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "ExactPoly") -> tuple["ExactPoly", "ExactPoly"]:
        d = self._coerce(other)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        dd = d.degree
        if len(r) - 1 < dd:
            return ExactPoly(), self
        q = [Fraction(0)] * (len(r) - dd)
        inv = 1 / d.lc
        dc = d._c
        for k in range(len(r) - 1 - dd, -1, -1):
            coef = r[k + dd] * inv
            q[k] = coef
            if coef:
                for j in range(dd + 1):
                    r[k + j] -= coef * dc[j]
        return ExactPoly(q), ExactPoly(r[:dd])

    def __floordiv__(self, other) -> "ExactPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "ExactPoly":
        return divmod(self, other)[1]

    # evaluation
    def __call__(self, x):
        if isinstance(x, ExactPoly):
            return compose(self, x)
        if isinstance(x, np.ndarray):
            return np.polynomial.polynomial.polyval(x, self.to_complex())
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self._c):
            if isinstance(acc, Fraction):
                acc = acc * x + c
            else:
                acc = acc * x + float(c)
        return acc

    def to_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self._c], dtype=np.complex128)

    def derivative(self) -> "ExactPoly":
        return ExactPoly([k * self._c[k] for k in range(1, len(self._c))])

    def antiderivative(self) -> "ExactPoly":
        """Primitive with zero constant term."""
        return ExactPoly([0] + [c / (k + 1) for k, c in enumerate(self._c)])

    def monic(self) -> "ExactPoly":
        if self.is_zero():
            return self
        return self / self.lc

    def primitive_integer(self) -> "ExactPoly":
        """Integer multiple with coprime integer coefficients and positive lc."""
        if self.is_zero():
            return self
        ints, _ = self._scaled_ints()
        g = 0
        for x in ints:
            g = math.gcd(g, x)
        sign = -1 if ints[-1] < 0 else 1
        return ExactPoly([sign * x // g for x in ints])

    def shift(self, b) -> "ExactPoly":
        """Return p(z + b)."""
        return compose(self, ExactPoly([b, 1]))

    # text
    def __repr__(self) -> str:
        return f"ExactPoly({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "z") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if a == 1:
                    body = mono
                elif a.denominator == 1:
                    body = f"{a}*{mono}"
                else:
                    body = f"({a})*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def to_json(self) -> list[str]:
        return [str(c) for c in self._c]


# free functions -----------------------------------------------------------


def as_poly(p) -> ExactPoly:
    if isinstance(p, ExactPoly):
        return p
    if isinstance(p, str):
        return ExactPoly.parse(p)
    if isinstance(p, (int, Fraction)):
        return ExactPoly([p])
    return ExactPoly(p)


def compose(p: ExactPoly, q: ExactPoly) -> ExactPoly:
    """Return ``p(q(z))`` exactly (Horner in the polynomial ring)."""
    p, q = as_poly(p), as_poly(q)
    result = ExactPoly()
    for c in reversed(p.coeffs):
        result = result * q + c
    return result


def poly_gcd(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    """Monic greatest common divisor (zero if both are zero)."""
    a, b = as_poly(a), as_poly(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(p: ExactPoly) -> list[tuple[ExactPoly, int]]:
    """Yun's algorithm: ``p = lc * prod a_i**i`` with squarefree coprime ``a_i``.

    Only factors of positive degree are returned.
    """
    p = as_poly(p)
    if p.degree < 1:
        return []
    f = p.monic()
    fp = f.derivative()
    a0 = poly_gcd(f, fp)
    b = f // a0
    c = fp // a0
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b // a
        c = d // a if not a.is_zero() else c
        d = c - b.derivative()
        if a.degree > 0:
            out.append((a, i))
        i += 1
    return out


def divides_exact(d: ExactPoly, p: ExactPoly) -> bool:
    d, p = as_poly(d), as_poly(p)
    if d.is_zero():
        raise InputError("divisor must be nonzero")
    return (p % d).is_zero()


def divisors(n: int) -> list[int]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def totient(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result = result // p * (p - 1)
    return result


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> ExactPoly:
    """The m-th cyclotomic polynomial, by exact division of z^m - 1."""
    if m < 1:
        raise InputError("cyclotomic index must be positive")
    p = ExactPoly.monomial(m) - 1
    for d in divisors(m)[:-1]:
        q, r = divmod(p, cyclotomic(d))
        assert r.is_zero()
        p = q
    return p


# decomposition ---------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """``source == compose(outer, inner)`` with a normalized inner factor."""

    outer: ExactPoly
    inner: ExactPoly
    normalized: bool = True

    @property
    def inner_degree(self) -> int:
        return self.inner.degree

    def compose(self) -> ExactPoly:
        return compose(self.outer, self.inner)

    def to_json(self) -> dict:
        return {
            "outer": str(self.outer),
            "inner": str(self.inner),
            "normalized": self.normalized,
        }


def _power_series_root(p: Sequence[Fraction], alpha: Fraction, n: int) -> list[Fraction]:
    """First ``n`` coefficients of ``P(x)**alpha`` for ``P(0) == 1``.

    J.C.P. Miller recurrence.
    """
    g = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, min(k, len(p) - 1) + 1):
            if p[j]:
                acc += ((alpha + 1) * j - k) * p[j] * g[k - j]
        g[k] = acc / k
    return g


def h_adic_expansion(f: ExactPoly, h: ExactPoly) -> ExactPoly | None:
    """Return ``g`` with ``f == compose(g, h)`` or None when none exists."""
    f, h = as_poly(f), as_poly(h)
    if h.degree < 1:
        raise InputError("inner polynomial must be nonconstant")
    if f.degree >= 0 and f.degree % h.degree:
        return None
    digits = []
    rem = f
    while not rem.is_zero():
        q, r = divmod(rem, h)
        if r.degree > 0:
            return None
        digits.append(r[0])
        rem = q
    return ExactPoly(digits)


def decompose_degree(f: ExactPoly, d: int) -> Decomposition | None:
    """Right factor of degree ``d`` (monic, zero constant term) if one exists.

    Kozen--Landau: the inner factor is read off the top ``d`` coefficients
    of the ``r``-th root of the monic ``f``; the outer factor then comes from
    the h-adic expansion, which must have constant digits.
    """
    f = as_poly(f)
    m = f.degree
    if m < 1:
        raise InputError("cannot decompose a constant polynomial")
    if d < 1 or m % d:
        raise InputError(f"{d} does not divide deg f = {m}")
    if d == 1:
        return Decomposition(outer=f, inner=ExactPoly.z())
    if d == m:
        lc = f.lc
        return Decomposition(
            outer=ExactPoly([f[0], lc]), inner=(f - f[0]) / lc
        )
    r = m // d
    fm = f.monic()
    rev = [fm[m - j] for j in range(d)]
    root = _power_series_root(rev, Fraction(1, r), d)
    h = ExactPoly([0] + [root[d - k] for k in range(1, d + 1)])
    outer = h_adic_expansion(f, h)
    if outer is None or outer.degree != r:
        return None
    return Decomposition(outer=outer, inner=h)


def decomposition_set(f: ExactPoly) -> dict[int, Decomposition]:
    """Map from inner degree ``d`` to a normalized decomposition."""
    f = as_poly(f)
    if f.degree < 2:
        raise InputError("decomposition_set needs deg f >= 2")
    out = {}
    for d in divisors(f.degree):
        dec = decompose_degree(f, d)
        if dec is not None:
            out[d] = dec
    return out


# complex roots ---------------------------------------------------------------


@dataclass(frozen=True)
class ComplexRootSet:
    """Roots with multiplicity plus a scaled residual bound.

    ``residual_bound`` bounds ``|p(r)| / max(1, |r|)**deg`` over the roots,
    with ``p`` normalized to unit max-norm.
    """

    roots: tuple[complex, ...]
    residual_bound: float

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=np.complex128)

    def to_json(self) -> dict:
        return {
            "roots": [[r.real, r.imag] for r in self.roots],
            "residual_bound": self.residual_bound,
        }


def scaled_residual(coeffs: np.ndarray, roots: np.ndarray) -> float:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if len(roots) == 0:
        return 0.0
    deg = len(coeffs) - 1
    norm = np.max(np.abs(coeffs))
    vals = np.abs(np.polynomial.polynomial.polyval(roots, coeffs / norm))
    return float(np.max(vals / np.maximum(1.0, np.abs(roots)) ** deg))


def _numeric_roots(coeffs: np.ndarray) -> np.ndarray:
    from . import _kernels

    roots, ok, _ = _kernels.aberth(np.ascontiguousarray(coeffs, dtype=np.complex128))
    if not ok:
        raise ConvergenceError(
            "simultaneous root iteration stalled before convergence; "
            "the polynomial is ill-conditioned"
        )
    return roots


def _sort_roots(roots: np.ndarray) -> np.ndarray:
    key = np.lexsort((np.round(roots.imag, 12), np.round(roots.real, 12)))
    return roots[key]


def roots_of(p) -> ComplexRootSet:
    """All complex roots with multiplicity.

    Exact input is first split by squarefree decomposition, so repeated
    roots come from simple roots of the squarefree parts. Complex
    coefficient arrays (ascending) go straight to the iteration.
    """
    if isinstance(p, (ExactPoly, str)):
        p = as_poly(p)
        if p.degree < 1:
            raise InputError("roots_of needs degree >= 1")
        pieces = []
        for factor, mult in squarefree_decomposition(p):
            r = _numeric_roots(factor.to_complex())
            pieces.extend([r] * mult)
        roots = _sort_roots(np.concatenate(pieces))
        coeffs = p.to_complex()
    else:
        coeffs = np.asarray(p, dtype=np.complex128)
        while len(coeffs) and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) < 2:
            raise InputError("roots_of needs degree >= 1")
        roots = _sort_roots(_numeric_roots(coeffs))
    return ComplexRootSet(
        roots=tuple(complex(r) for r in roots),
        residual_bound=scaled_residual(coeffs, roots),
    )


# Laurent polynomials ------------------------------------------------------------


class LaurentPoly:
    """Finite Laurent series ``sum a_k z^k`` with exact coefficients."""

    __slots__ = ("_c",)

    def __init__(self, terms: dict[int, object] | None = None):
        self._c: dict[int, Fraction] = {}
        for k, v in (terms or {}).items():
            v = _frac(v)
            if v != 0:
                self._c[int(k)] = v

    @classmethod
    def from_poly(cls, p: ExactPoly) -> "LaurentPoly":
        return cls({k: c for k, c in enumerate(p.coeffs)})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._c)

    @property
    def low(self) -> int:
        return min(self._c) if self._c else 0

    @property
    def high(self) -> int:
        return max(self._c) if self._c else 0

    @property
    def order_at_zero(self) -> int:
        """Pole order at 0 (the ``n`` of a proper Laurent polynomial)."""
        return max(0, -self.low)

    @property
    def order_at_infinity(self) -> int:
        return max(0, self.high)

    def is_zero(self) -> bool:
        return not self._c

    def is_polynomial(self) -> bool:
        return self.low >= 0

    def to_poly(self) -> ExactPoly:
        if not self.is_polynomial():
            raise InputError("Laurent polynomial has negative powers")
        top = self.high if self._c else -1
        return ExactPoly([self._c.get(k, 0) for k in range(top + 1)])

    def shifted_poly(self) -> tuple[ExactPoly, int]:
        """``(z^n * self, n)`` with ``n`` the pole order at 0."""
        n = self.order_at_zero
        top = self.high + n
        return ExactPoly([self._c.get(k - n, 0) for k in range(top + 1)]), n

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, ExactPoly):
            return self == LaurentPoly.from_poly(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("LaurentPoly", tuple(sorted(self._c.items()))))

    @staticmethod
    def _coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, ExactPoly):
            return LaurentPoly.from_poly(x)
        return LaurentPoly({0: x})

    def __add__(self, other) -> "LaurentPoly":
        o = self._coerce(other)
        out = dict(self._c)
        for k, v in o._c.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        o = self._coerce(other)
        out: dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in o._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LaurentPoly":
        o = self._coerce(other)
        if len(o._c) != 1:
            raise InputError("Laurent division only by a monomial")
        (k, a), = o._c.items()
        return LaurentPoly({i - k: v / a for i, v in self._c.items()})

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            if len(self._c) != 1:
                raise InputError("negative power of a non-monomial")
            (k, a), = self._c.items()
            return LaurentPoly({k * e: Fraction(1) / a ** (-e)})
        out = LaurentPoly({0: 1})
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({k - 1: k * v for k, v in self._c.items() if k})

    def residue(self) -> Fraction:
        return self._c.get(-1, Fraction(0))

    def __call__(self, x):
        x = complex(x)
        return sum(complex(v) * x**k for k, v in self._c.items())

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.complex128)
        out = np.zeros_like(x)
        for k, v in self._c.items():
            out = out + complex(v) * x**k
        return out

    def to_str(self, var: str = "z") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            c = self._c[k]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else (f"{a}*{mono}" if a.denominator == 1 else f"({a})*{mono}")
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += sign + body
        return out

    __str__ = to_str

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_str()!r})"
