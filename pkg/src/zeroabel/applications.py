"""Special families and reductions.

* ``f = z**m``: the complete list of admissible exponents for a balanced cycle.
* Chebyshev polynomials.
* Polynomial and Laurent moment problems and their distinguished cycles.
* Hyper-elliptic one-cycles for ``F = y**2 + x**m``.
* First-order canard centers of slow-fast systems.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .abelian import N_SAMPLES, SEED, TOL, BranchSystem, Evidence
from .cycles import ZeroCycle, as_cycle, is_totally_unbalanced, CycleClassification
from .errors import InconsistentEvidenceError, InputError, NumericalError
from .monodromy import plan_path, track_pencil
from .poly import (
    ExactPoly,
    LaurentPoly,
    as_poly,
    compose,
    cyclotomic,
    decomposition_set,
    divisors,
    h_adic_expansion,
    poly_gcd,
    roots_of,
)


# f = z^m -----------------------------------------------------------------------


def _is_balanced_zm(m: int, C: ZeroCycle) -> bool:
    P = ExactPoly(C.weights)
    return (P % (cyclotomic(1) * cyclotomic(m))).is_zero()


def zm_solutions(m: int, C) -> frozenset[int]:
    """Residues ``j`` mod ``m`` such that ``z**j`` may appear in a solution ``g``.

    ``j`` is allowed iff ``Phi_{m/gcd(m,j)}`` divides ``P_C``.
    """
    C = as_cycle(C)
    if C.m != m:
        raise InputError(f"cycle has {C.m} points, expected {m}")
    if m < 2:
        raise InputError("m must be at least 2")
    if not _is_balanced_zm(m, C):
        raise InputError("cycle is not balanced for z^m")
    P = ExactPoly(C.weights)
    ok = {e for e in divisors(m) if (P % cyclotomic(e)).is_zero()}
    return frozenset(j for j in range(m) if m // math.gcd(m, j) in ok)


def forbidden_residues(m: int, C) -> frozenset[int]:
    return frozenset(range(m)) - zm_solutions(m, C)


def chebyshev(m: int) -> ExactPoly:
    """``T_m`` from ``T_{n+1} = 2 z T_n - T_{n-1}``."""
    if m < 0:
        raise InputError("Chebyshev index must be non-negative")
    a, b = ExactPoly([1]), ExactPoly([0, 1])
    if m == 0:
        return a
    two_z = ExactPoly([0, 2])
    for _ in range(m - 1):
        a, b = b, two_z * b - a
    return b


# polynomial moment problem -------------------------------------------------------


def moment_oracle(f, q, K: int) -> list[Fraction]:
    """Exact moments ``int_0^1 f(w)**k q(w) dw`` for ``k = 0..K-1``."""
    f, q = as_poly(f), as_poly(q)
    if K < 1:
        raise InputError("K must be at least 1")
    out = []
    power = ExactPoly([1])
    for _ in range(K):
        F = (power * q).antiderivative()
        out.append(F(Fraction(1)) - F(Fraction(0)))
        power = power * f
    return out


def _root_multiplicity(p: ExactPoly, a: Fraction) -> tuple[int, ExactPoly]:
    lin = ExactPoly([-a, 1])
    n = 0
    while not p.is_zero():
        q, r = divmod(p, lin)
        if not r.is_zero():
            break
        p, n = q, n + 1
    return n, p


@dataclass
class MomentCycleReport:
    cycle: ZeroCycle
    n0: int
    n1: int
    totally_unbalanced: bool
    labels_near_0: list[int]
    labels_near_1: list[int]
    delta: float
    classification: CycleClassification | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "cycle": self.cycle.to_json(),
            "n0": self.n0,
            "n1": self.n1,
            "totally_unbalanced": self.totally_unbalanced,
            "labels_near_0": [i + 1 for i in self.labels_near_0],
            "labels_near_1": [i + 1 for i in self.labels_near_1],
            "delta": self.delta,
        }


def moment_cycle(f, data=None, cap: int = 10**6) -> MomentCycleReport:
    """The cycle ``n1 sum z_{a_i} - n0 sum z_{b_i}`` attached to ``f(0) == f(1)``.

    Branches ``z_{a_i}`` tend to 0 and ``z_{b_i}`` to 1 as ``t -> f(0)``;
    ``n0``/``n1`` are the multiplicities of 0 and 1 as roots of ``f - f(0)``.
    """
    f = as_poly(f)
    if f.degree < 2:
        raise InputError("need deg f >= 2")
    c0 = f(Fraction(0))
    if f(Fraction(1)) != c0:
        raise InputError("moment cycle needs f(0) == f(1)")
    p = f - c0
    n0, rest = _root_multiplicity(p, Fraction(0))
    n1, rest = _root_multiplicity(rest, Fraction(1))
    others = list(roots_of(rest).roots) if rest.degree > 0 else []
    r0 = 0.1 * min([abs(z) for z in others] + [1.0])
    r1 = 0.1 * min([abs(z - 1) for z in others] + [1.0])
    bs = BranchSystem(f, data)
    t_c = complex(c0)
    sigma = bs.data.critical_values
    far = [abs(s - t_c) for s in sigma if abs(s - t_c) > 1e-9 * (1 + abs(t_c))]
    delta = 0.25 * min(far) if far else 0.25 * abs(bs.basepoint - t_c)
    phi = cmath.phase(bs.basepoint - t_c)
    for _ in range(60):
        fib = bs.fiber_at(t_c + delta * cmath.exp(1j * phi))
        near0 = [i for i, z in enumerate(fib) if abs(z) < r0]
        near1 = [i for i, z in enumerate(fib) if abs(z - 1) < r1]
        if len(near0) == n0 and len(near1) == n1:
            break
        delta /= 2
    else:
        raise NumericalError("could not isolate the branches near 0 and 1")
    w = [0] * f.degree
    for i in near0:
        w[i] = n1
    for i in near1:
        w[i] = -n0
    C = ZeroCycle(w)
    cls = is_totally_unbalanced(f, C, bs.data, cap)
    if not cls.totally_unbalanced:
        raise InconsistentEvidenceError("moment cycle classified as not totally unbalanced")
    return MomentCycleReport(C, n0, n1, True, near0, near1, delta, cls)


# Laurent moment problem ------------------------------------------------------------


def laurent_moment_oracle(f: LaurentPoly, g: LaurentPoly, K: int) -> list[Fraction]:
    """Residues ``r_k`` with ``int_{|z|=1} f**k g' dz = 2 pi i r_k``, ``k = 0..K-1``."""
    if K < 1:
        raise InputError("K must be at least 1")
    dg = g.derivative()
    out = []
    power = LaurentPoly({0: 1})
    for _ in range(K):
        out.append((power * dg).residue())
        power = power * f
    return out


@dataclass
class LaurentBranches:
    """Labelled fiber of a proper Laurent polynomial.

    Labels ``0..n-1`` are the branches tending to 0 as ``t -> oo`` and
    ``n..n+m-1`` those tending to infinity, each group sorted by argument
    at the basepoint.
    """

    f: LaurentPoly
    n: int
    m: int
    basepoint: complex
    fiber: np.ndarray
    critical_values: tuple[complex, ...]

    @property
    def cycle(self) -> ZeroCycle:
        return ZeroCycle([self.m] * self.n + [-self.n] * self.m)

    def _pencil(self) -> tuple[np.ndarray, np.ndarray]:
        P, _ = self.f.shifted_poly()
        a = P.to_complex()
        b = np.zeros_like(a)
        b[self.n] = -1.0
        return a, b

    def fiber_at(self, t: complex) -> np.ndarray:
        path = plan_path(self.basepoint, complex(t), list(self.critical_values))
        a, b = self._pencil()
        return track_pencil(a, b, path, self.fiber)


def _laurent_critical_values(f: LaurentPoly) -> list[complex]:
    df = f.derivative()
    P, _ = df.shifted_poly()
    if P.degree < 1:
        return []
    vals = [f.evaluate(complex(z)) for z in roots_of(P).roots if abs(z) > 0]
    out: list[complex] = []
    for v in vals:
        if all(abs(v - w) > 1e-9 * (1 + abs(v)) for w in out):
            out.append(complex(v))
    return out


def laurent_branches(f: LaurentPoly) -> LaurentBranches:
    n = f.order_at_zero
    m = f.order_at_infinity
    if n < 1 or m < 1:
        raise InputError("need a proper Laurent polynomial (poles at 0 and infinity)")
    sigma = _laurent_critical_values(f)
    big = max([abs(s) for s in sigma] + [0.0])
    theta = 0.1
    R = 1.0 + 2.0 * big
    P, _ = f.shifted_poly()
    for _ in range(40):
        t = R * cmath.exp(1j * theta)
        c = P.to_complex()
        c[n] -= t
        roots = np.array(roots_of(c).roots)
        order = np.argsort(np.abs(roots))
        mags = np.abs(roots)[order]
        # clean split: n small roots, m large roots, separated by a wide gap
        if mags[n] > 100.0 * mags[n - 1]:
            small = sorted((complex(z) for z in roots[order[:n]]), key=cmath.phase)
            large = sorted((complex(z) for z in roots[order[n:]]), key=cmath.phase)
            fib = np.array(small + large, dtype=np.complex128)
            return LaurentBranches(f, n, m, t, fib, tuple(sigma))
        R *= 4.0
    raise NumericalError("branches near 0 and infinity did not separate")


def laurent_moment_cycle(f: LaurentPoly) -> ZeroCycle:
    """Weight ``m`` on the ``n`` branches near 0, ``-n`` on the ``m`` near infinity."""
    return laurent_branches(f).cycle


def laurent_is_identically_zero(f: LaurentPoly, g: LaurentPoly, *, n_samples: int = N_SAMPLES,
                                tol: float = TOL, seed: int = SEED) -> Evidence:
    """Sample-only evidence that ``sum n_i g(z_i(t))`` vanishes on the Laurent cycle."""
    lb = laurent_branches(f)
    C = lb.cycle
    rng = np.random.default_rng(seed)
    R = abs(lb.basepoint)
    w = np.array(C.weights, dtype=float)
    res = 0.0
    for _ in range(n_samples):
        t = R * rng.uniform(0.6, 2.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        fib = lb.fiber_at(t)
        vals = g.evaluate(fib)
        scale = float(np.sum(np.abs(w)) * np.max(np.abs(vals)))
        res = max(res, abs(complex(np.dot(w, vals))) / max(scale, 1e-300))
    ok = bool(res < tol)
    return Evidence(ok, ok, True, float(res), 0.0, None, n_samples, 0, tol)


# hyper-elliptic one-cycles -----------------------------------------------------------


@dataclass(frozen=True)
class OneCycle:
    """``sum n_i gamma_{i,i+1}`` for ``i = 1..m-1``."""

    m: int
    basis_coeffs: tuple[int, ...]

    def __init__(self, m: int, basis_coeffs: Sequence[int]):
        if m % 2:
            raise InputError("only even m is supported")
        coeffs = tuple(int(x) for x in basis_coeffs)
        if len(coeffs) != m - 1:
            raise InputError(f"need {m - 1} coefficients for m = {m}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "basis_coeffs", coeffs)

    def to_json(self) -> dict:
        return {"m": self.m, "basis_coeffs": list(self.basis_coeffs)}


def hyperelliptic_phi(gamma: OneCycle) -> ZeroCycle:
    """``C = sum n_i (x_{i+1} - x_i)``."""
    n = gamma.basis_coeffs
    m = gamma.m
    w = [0] * m
    for i, c in enumerate(n):
        w[i] -= c
        w[i + 1] += c
    return ZeroCycle(w)


def hyperelliptic_phi_inverse(C) -> OneCycle:
    C = as_cycle(C)
    acc, n = 0, []
    for x in C.weights[:-1]:
        acc += x
        n.append(-acc)
    return OneCycle(C.m, n)


def _check_hyper_input(m: int, C: ZeroCycle) -> None:
    if m % 2:
        raise InputError("only even m is supported")
    if C.m != m:
        raise InputError(f"cycle has {C.m} points, expected {m}")
    if not _is_balanced_zm(m, C):
        raise InputError("cycle is not balanced for z^m")


def hyperelliptic_xm_condition(m: int, C, kappa) -> bool:
    """Vanishing of ``int_gamma kappa(x) y dx`` on ``y**2 + x**m = t``.

    The zero-cycle integrand at ``x_i`` is ``sqrt(t) x_i**(j+1) B_j`` for
    ``kappa = x**j``, so exponent ``j`` is admissible iff ``j + 1`` is an
    admissible residue for ``z**m``.
    """
    C = as_cycle(C)
    kappa = as_poly(kappa)
    _check_hyper_input(m, C)
    allowed = zm_solutions(m, C)
    return all(kappa[j] == 0 or (j + 1) % m in allowed for j in range(kappa.degree + 1))


def radial_moment(j: int, m: int) -> float:
    """``int_0^1 s**j sqrt(1 - s**m) ds`` in closed form."""
    return float(special.beta((j + 1) / m, 1.5) / m)


def _radial_integral(kappa: np.ndarray, x: complex, m: int) -> complex:
    def part(s, fn):
        return fn(np.polynomial.polynomial.polyval(x * s, kappa) * math.sqrt(max(1.0 - s**m, 0.0)))

    kw = dict(epsabs=1e-14, epsrel=1e-13, limit=200)
    re = integrate.quad(part, 0.0, 1.0, args=(np.real,), **kw)[0]
    im = integrate.quad(part, 0.0, 1.0, args=(np.imag,), **kw)[0]
    return x * complex(re, im)


def hyperelliptic_samples(m: int, C, kappa, ts=None) -> list[tuple[complex, float]]:
    """``sum n_i G(x_i(t), t)`` by quadrature, with its normalizing scale.

    ``G(x, t) = int_0^x kappa(s) sqrt(t - s**m) ds`` along the ray from 0,
    starting on the sheet ``y(0) = sqrt(t)``; ``x_i`` are the labelled
    roots of ``x**m = t``.
    """
    C = as_cycle(C)
    kappa = as_poly(kappa)
    _check_hyper_input(m, C)
    bs = BranchSystem(ExactPoly.monomial(m))
    if ts is None:
        ts = bs.sample_points(10)
    kc = kappa.to_complex() if kappa.degree >= 0 else np.zeros(1, dtype=np.complex128)
    w = np.array(C.weights, dtype=float)
    out = []
    for t in ts:
        fib = bs.fiber_at(t)
        vals = np.array([cmath.sqrt(t) * _radial_integral(kc, x, m) for x in fib])
        scale = float(np.sum(np.abs(w)) * np.max(np.abs(vals))) if np.any(vals) else 0.0
        out.append((complex(np.dot(w, vals)), scale))
    return out


def hyperelliptic_oracle(m: int, C, kappa, ts=None, tol: float = TOL) -> bool:
    """True when every normalized sample lies below ``tol``."""
    return all(abs(v) <= tol * max(s, 1e-300) for v, s in hyperelliptic_samples(m, C, kappa, ts))


# slow-fast systems ----------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """``num / den`` in lowest terms with monic ``den``."""

    num: ExactPoly
    den: ExactPoly

    def __init__(self, num, den):
        num, den = as_poly(num), as_poly(den)
        if den.is_zero():
            raise InputError("zero denominator")
        if not num.is_zero():
            g = poly_gcd(num, den)
            num, den = num // g, den // g
        lc = den.lc
        object.__setattr__(self, "num", num / lc)
        object.__setattr__(self, "den", den / lc)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json(), "text": str(self)}


def _check_morse_origin(f: ExactPoly) -> None:
    if f[0] != 0 or f[1] != 0 or f[2] <= 0:
        raise InputError("need f(0) = f'(0) = 0 and f''(0) > 0")


def local_branches(f, t: float) -> tuple[float, float]:
    """Real roots of ``f = t`` closest to 0 on either side."""
    f = as_poly(f)
    c = f.to_complex()
    c[0] -= t
    roots = roots_of(c).roots
    real = [z.real for z in roots if abs(z.imag) <= 1e-9 * (1 + abs(z))]
    neg = [x for x in real if x < 0]
    pos = [x for x in real if x > 0]
    if not neg or not pos:
        raise NumericalError(f"no local real branches at t = {t}")
    return max(neg), min(pos)


def _default_slow_fast_t(f: ExactPoly) -> float:
    cps = [z for z in roots_of(f.derivative()).roots if abs(z) > 1e-12]
    real_vals = [f(z).real for z in cps if abs(z.imag) < 1e-9 and f(z).real > 0]
    return min(real_vals + [1.0])


def _find_h(f: ExactPoly, t: float) -> ExactPoly:
    z1, z2 = local_branches(f, t)
    for d, dec in sorted(decomposition_set(f).items()):
        if d < 2:
            continue
        h = dec.inner
        a, b = complex(h(z1)), complex(h(z2))
        if abs(a - b) <= 1e-8 * (1 + abs(a)):
            return h
    raise InputError("no decomposition of f identifies the two local branches")


def slow_fast_gbar(f, g0, h=None) -> RationalFunction:
    """``Gbar = -(f')**2 / (g0'(h) h')`` for a right factor ``h`` joining the local branches."""
    f, g0 = as_poly(f), as_poly(g0)
    _check_morse_origin(f)
    t = 0.25 * _default_slow_fast_t(f)
    if h is None:
        h = _find_h(f, t)
    else:
        h = as_poly(h)
        if h_adic_expansion(f, h) is None:
            raise InputError(f"f is not a polynomial in h = {h}")
        z1, z2 = local_branches(f, t)
        a, b = complex(h(z1)), complex(h(z2))
        if abs(a - b) > 1e-8 * (1 + abs(a)):
            raise InputError("h separates the two local branches")
    df = f.derivative()
    den = compose(g0.derivative(), h) * h.derivative()
    if den.is_zero():
        raise InputError("g0 must be nonconstant")
    return RationalFunction(-(df * df), den)


def slow_fast_I(f, gbar, ts) -> list[float]:
    """``I(t) = int_{z_1}^{z_2} -(f')**2 / Gbar`` between the local branches."""
    f = as_poly(f)
    _check_morse_origin(f)
    if not isinstance(gbar, RationalFunction):
        if isinstance(gbar, tuple):
            gbar = RationalFunction(*gbar)
        else:
            gbar = RationalFunction(gbar, 1)
    if gbar.num.is_zero():
        raise InputError("Gbar must be nonzero")
    df = f.derivative()
    # reduce exactly so removable singularities such as x = 0 disappear
    r = RationalFunction(-(df * df) * gbar.den, gbar.num)
    num = r.num.to_complex().real
    den = r.den.to_complex().real
    pv = np.polynomial.polynomial.polyval

    def integrand(x):
        return pv(x, num) / pv(x, den)

    out = []
    for t in ts:
        z1, z2 = local_branches(f, float(t))
        with warnings.catch_warnings():
            # an identically vanishing integral trips the roundoff detector
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(integrand, z1, z2, epsabs=1e-14, epsrel=1e-12, limit=200)
        out.append(float(val))
    return out
