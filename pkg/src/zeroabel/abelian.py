"""Zero-dimensional Abelian integrals and the tangential-center solver.

For a cycle ``C = sum n_i z_i`` on the labelled fiber of ``f`` the
integral of ``g`` is ``I(t) = sum n_i g(z_i(t))``. Near infinity

    g(z_i(t)) = sum_k s_k (u eps**-(i-1))**k,    u = (t/lc)**(-1/m),

so ``I`` vanishes identically iff ``s_k P_C(eps**-k) == 0`` for all ``k``.
Whether ``P_C(eps**-k)`` is zero is decided exactly: it vanishes iff
``Phi_{m/gcd(m,k)}`` divides ``P_C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cycles import (
    ZeroCycle,
    as_cycle,
    classify_projection,
    congruence_system,
    is_balanced,
)
from .errors import InconsistentEvidenceError, InputError, NumericalError
from .groups import iter_conjugacy_class, minimal_block
from .monodromy import (
    MonodromyData,
    Segment,
    block_to_decomposition,
    critical_values,
    monodromy_data,
    plan_path,
    track_pencil,
)
from .poly import (
    Decomposition,
    ExactPoly,
    as_poly,
    compose,
    cyclotomic,
    decomposition_set,
    h_adic_expansion,
    poly_gcd,
)
from .puiseux import PuiseuxSeries, _branch_y, puiseux_of_g

TOL = 1e-8
N_SAMPLES = 20
SEED = 20240917
DEFAULT_CAP = 10**6


# branches --------------------------------------------------------------------


class BranchSystem:
    """Labelled branches ``z_i(t)`` transported from the basepoint."""

    def __init__(self, f, data: MonodromyData | None = None):
        self.f = as_poly(f)
        self.data = data if data is not None else monodromy_data(self.f)
        self._coeffs = self.f.to_complex()
        self._cache: dict[complex, np.ndarray] = {}

    @property
    def m(self) -> int:
        return self.data.m

    @property
    def basepoint(self) -> complex:
        return self.data.basepoint

    @property
    def fiber(self) -> np.ndarray:
        return self.data.fiber_array()

    def fiber_at(self, t: complex) -> np.ndarray:
        t = complex(t)
        if t not in self._cache:
            path = plan_path(self.basepoint, t, self.data.critical_values)
            b = np.zeros_like(self._coeffs)
            b[0] = -1.0
            self._cache[t] = track_pencil(self._coeffs, b, path, self.fiber, self.data.ds_max)
        return self._cache[t]

    def sample_points(self, n: int = N_SAMPLES, seed: int = SEED) -> list[complex]:
        """Seeded points with ``|t|`` in ``[0.6, 2] |t0|``, clear of every critical value."""
        rng = np.random.default_rng(seed)
        R = abs(self.basepoint)
        radii = R * rng.uniform(0.6, 2.0, n)
        angles = rng.uniform(-math.pi, math.pi, n)
        return [complex(r * np.exp(1j * a)) for r, a in zip(radii, angles)]


def _check_cycle(f: ExactPoly, C) -> ZeroCycle:
    C = as_cycle(C)
    if C.m != f.degree:
        raise InputError(f"cycle has {C.m} points but deg f = {f.degree}")
    return C


def cycle_sum(g, C, fiber) -> tuple[complex, float]:
    """``sum n_i g(z_i)`` and the scale ``sum |n_i| * max |g(z_i)|``."""
    g = as_poly(g)
    vals = np.polynomial.polynomial.polyval(np.asarray(fiber), g.to_complex())
    w = np.array(as_cycle(C).weights, dtype=float)
    total = complex(np.dot(w, vals))
    scale = float(np.sum(np.abs(w)) * np.max(np.abs(vals))) if len(vals) else 0.0
    return total, scale


def integral_samples(f, g, C, ts, data: MonodromyData | None = None) -> list[complex]:
    """``sum n_i g(z_i(t))`` at each ``t`` with one consistent labelling."""
    f = as_poly(f)
    C = _check_cycle(f, C)
    if C.is_trivial():
        return [0j for _ in ts]
    bs = BranchSystem(f, data)
    return [cycle_sum(g, C, bs.fiber_at(t))[0] for t in ts]


# vanishing evidence ----------------------------------------------------------


@dataclass
class Evidence:
    passed: bool
    sample_passed: bool
    puiseux_passed: bool
    sample_residual: float
    puiseux_residual: float
    worst_k: int | None
    n_samples: int
    order: int
    tol: float
    exact: bool = False

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "sample_passed": self.sample_passed,
            "puiseux_passed": self.puiseux_passed,
            "sample_residual": self.sample_residual,
            "puiseux_residual": self.puiseux_residual,
            "worst_k": self.worst_k,
            "n_samples": self.n_samples,
            "order": self.order,
            "tol": self.tol,
            "exact": self.exact,
        }


def _exact_pass(order: int, tol: float) -> Evidence:
    return Evidence(True, True, True, 0.0, 0.0, None, 0, order, tol, exact=True)


def vanishing_root_orders(m: int, C) -> frozenset[int]:
    """Orders ``e | m`` with ``Phi_e | P_C``, i.e. ``P_C`` vanishes at primitive e-th roots."""
    return _vanishing_orders(m, as_cycle(C).weights)


@lru_cache(maxsize=256)
def _vanishing_orders(m: int, weights: tuple[int, ...]) -> frozenset[int]:
    from .poly import divisors

    P = ExactPoly(weights)
    if P.is_zero():
        return frozenset(divisors(m))
    return frozenset(e for e in divisors(m) if (P % cyclotomic(e)).is_zero())


def is_identically_zero(f, g, C, data: MonodromyData | None = None, *,
                        n_samples: int = N_SAMPLES, order: int | None = None,
                        tol: float = TOL, seed: int = SEED) -> Evidence:
    """Semi-decision for ``I(t) == 0``: seeded samples plus Puiseux conditions.

    Sample residuals are normalized by ``sum |n_i| max |g(z_i)|`` at that
    sample. Puiseux terms ``s_k P_C(eps**-k)`` for ``-deg g <= k <= order``
    (default ``m (deg g + 2)``) are normalized the same way at the
    basepoint; a term is zero exactly when the cyclotomic test says so.
    """
    f, g = as_poly(f), as_poly(g)
    C = _check_cycle(f, C)
    m = f.degree
    K = order if order is not None else m * (max(g.degree, 0) + 2)
    if C.is_trivial() or g.degree <= 0:
        return _exact_pass(K, tol)
    bs = BranchSystem(f, data)

    # Puiseux side
    t0 = bs.basepoint
    _, scale0 = cycle_sum(g, C, bs.fiber)
    rho = abs(complex(t0) / float(f.lc)) ** (-1.0 / m)
    s = puiseux_of_g(f, g, K, exact=False, rho=rho)
    zero_orders = vanishing_root_orders(m, C)
    P = np.array(C.weights, dtype=float)
    p_res, worst_k = 0.0, None
    for k in range(s.kmin, s.kmax + 1):
        if m // math.gcd(m, k) in zero_orders:
            continue
        val = complex(s.coefficient(k)) * np.polyval(
            P[::-1], np.exp(-2j * np.pi * k / m)
        )
        r = abs(val) / max(scale0, 1e-300)
        if r > p_res:
            p_res, worst_k = r, k

    # sampling side
    s_res = 0.0
    for t in bs.sample_points(n_samples, seed):
        total, scale = cycle_sum(g, C, bs.fiber_at(t))
        s_res = max(s_res, abs(total) / max(scale, 1e-300))
    sp, pp = bool(s_res < tol), bool(p_res < tol)
    return Evidence(sp and pp, sp, pp, float(s_res), float(p_res), worst_k, n_samples, K, tol)


# exact solvers ---------------------------------------------------------------


def theorem1_check(f, g) -> ExactPoly | None:
    """``g0`` with ``g == g0 o f`` or None."""
    f, g = as_poly(f), as_poly(g)
    if f.degree < 2:
        raise InputError("need deg f >= 2")
    if g.degree <= 0:
        return ExactPoly([g[0]])
    return h_adic_expansion(g, f)


@dataclass(frozen=True)
class SimpleCycleSolution:
    f0: ExactPoly
    g0: ExactPoly
    h: ExactPoly

    def to_json(self) -> dict:
        return {"f0": str(self.f0), "g0": str(self.g0), "h": str(self.h)}


def simple_cycle_solve(f, g, i: int, j: int, data: MonodromyData | None = None) -> SimpleCycleSolution | None:
    """Decomposition through the minimal block containing labels ``i, j`` (0-based)."""
    f, g = as_poly(f), as_poly(g)
    if i == j:
        raise InputError("labels must differ")
    if data is None:
        data = monodromy_data(f)
    m = data.m
    if not (0 <= i < m and 0 <= j < m):
        raise InputError("label out of range")
    block = minimal_block(data.gens, m, [i, j])
    from .groups import _system_from_block

    bs = _system_from_block(data.gens, m, block)
    dec = block_to_decomposition(f, bs, data)
    if dec is None:
        return None
    g0 = h_adic_expansion(g, dec.inner)
    if g0 is None:
        return None
    return SimpleCycleSolution(dec.outer, g0, dec.inner)


def morse_generic_check(f, tol: float = 1e-9) -> bool:
    """Squarefree ``f'`` and pairwise distinct critical values."""
    f = as_poly(f)
    if f.degree < 2:
        raise InputError("need deg f >= 2")
    df = f.derivative()
    if poly_gcd(df, df.derivative()).degree > 0:
        return False
    vals = critical_values(f)
    if len(vals) != df.degree:
        return False
    scale = 1.0 + max(abs(v) for v in vals)
    return all(
        abs(a - b) > tol * scale for k, a in enumerate(vals) for b in vals[k + 1:]
    )


# displacement ----------------------------------------------------------------


def default_epsilon(f, g, data: MonodromyData | None = None) -> float:
    g = as_poly(g)
    data = data if data is not None else monodromy_data(as_poly(f))
    gmax = max((abs(float(c)) for c in g.coeffs), default=0.0)
    return 1e-3 * (1.0 + abs(data.basepoint)) / (1.0 + gmax)


def displacement(f, g, C, eps: complex | None = None, ts=None,
                 data: MonodromyData | None = None, steps: int = 16) -> list[complex]:
    """``sum n_i f(z_i(t, eps))`` for the fiber of ``f + eps g`` over ``t``.

    Each ``z_i(t, eps)`` is continued in ``eps`` from ``z_i(t)``.
    """
    f, g = as_poly(f), as_poly(g)
    C = _check_cycle(f, C)
    bs = BranchSystem(f, data)
    if eps is None:
        eps = default_epsilon(f, g, bs.data)
    if ts is None:
        ts = bs.sample_points(4)
    if C.is_trivial():
        return [0j for _ in ts]
    n = max(f.degree, g.degree) + 1
    gc = np.zeros(n, dtype=np.complex128)
    gc[: g.degree + 1] = g.to_complex()
    fc_plain = f.to_complex()
    w = np.array(C.weights, dtype=float)
    out = []
    for t in ts:
        z0 = bs.fiber_at(t)
        a = np.zeros(n, dtype=np.complex128)
        a[: f.degree + 1] = fc_plain
        a[0] -= complex(t)
        z = track_pencil(a, gc, [Segment(0j, complex(eps))], z0, ds_max=1.0 / steps)
        fz = np.polynomial.polynomial.polyval(z, fc_plain)
        out.append(complex(np.dot(w, fz)))
    return out


# Puiseux extraction ----------------------------------------------------------


def _y_powers(f: ExactPoly, J: int, n: int) -> list[list[Fraction]]:
    """Exact ``y**j`` (first ``n`` coefficients) for ``0 <= j <= J``."""
    from .puiseux import _mul_exact

    y = _branch_y(f, n, exact=True)
    out = [[Fraction(1)] + [Fraction(0)] * (n - 1)]
    for _ in range(J):
        out.append(_mul_exact(out[-1], y, n))
    return out


def series_of(f: ExactPoly, w: ExactPoly, kmax: int, powers=None) -> dict[int, Fraction]:
    """Exact coefficients of ``w(z_1)`` in ``u`` for ``-deg w <= k <= kmax``."""
    J = max(w.degree, 0)
    n = J + kmax + 1
    if powers is None or len(powers) <= J or len(powers[0]) < n:
        powers = _y_powers(f, J, n)
    out: dict[int, Fraction] = {}
    for j in range(J + 1):
        c = w[j]
        if c == 0:
            continue
        for i in range(n):
            k = i - j
            if k > kmax:
                break
            v = powers[j][i]
            if v:
                out[k] = out.get(k, Fraction(0)) + c * v
    return {k: v for k, v in out.items() if v != 0}


def extract_psi_and_w(f, s: PuiseuxSeries, c: int, degree_bound: int | None = None
                      ) -> tuple[ExactPoly, ExactPoly, Decomposition]:
    """Recover ``w = g0 o h`` with ``w(z_1) == psi_c``.

    ``psi_c`` keeps the terms of ``s`` with ``k == 0 (mod m/c)``; ``h`` is
    the normalized right factor of degree ``m/c``. The polynomial ``w`` is
    found by a triangular solve on the polar part and then checked on
    every coefficient ``s`` carries.
    """
    f = as_poly(f)
    m = f.degree
    if c == m or c < 1 or m % c:
        raise InputError(f"c = {c} must be a proper divisor of deg f = {m}")
    d = m // c
    dec = decompose_degree_checked(f, d)
    if not s.exact:
        raise InputError("extraction needs an exact series")
    J = degree_bound if degree_bound is not None else -s.kmin
    kmax = max(s.kmax, 0)
    powers = _y_powers(f, J, J + kmax + 1)

    def psi(k: int) -> Fraction:
        return Fraction(s.coefficient(k)) if k % d == 0 else Fraction(0)

    coef = [Fraction(0)] * (J + 1)
    for j in range(J, -1, -1):
        acc = psi(-j)
        for jp in range(j + 1, J + 1):
            if coef[jp]:
                acc -= coef[jp] * powers[jp][jp - j]
        coef[j] = acc
    w = ExactPoly(coef)
    got = series_of(f, w, kmax, powers)
    for k in range(-J, kmax + 1):
        if got.get(k, Fraction(0)) != psi(k):
            raise InconsistentEvidenceError(
                f"w(z_1) disagrees with psi_{c} at u^{k}"
            )
    g0 = h_adic_expansion(w, dec.inner)
    if g0 is None:
        raise InconsistentEvidenceError(f"psi_{c} part is not a polynomial in h = {dec.inner}")
    return w, g0, dec


def decompose_degree_checked(f: ExactPoly, d: int) -> Decomposition:
    from .poly import decompose_degree

    dec = decompose_degree(f, d)
    if dec is None:
        raise InputError(f"f has no right factor of degree {d}")
    return dec


# certificates ----------------------------------------------------------------

VANISHES_TRIVIAL = "Vanishes-Trivial"
VANISHES_BALANCED = "Vanishes-With-Residual-Balanced"
DOES_NOT_VANISH = "Does-Not-Vanish"
UNDETERMINED = "Undetermined-Balanced-Residual"


@dataclass
class CertificateTerm:
    h: ExactPoly
    g: ExactPoly
    projected: ZeroCycle
    kind: str
    evidence: Evidence | None = None
    resolution: str = ""
    allowed_residues: list[int] | None = None

    def to_json(self) -> dict:
        out = {
            "h": str(self.h),
            "g": str(self.g),
            "h_coefficients": self.h.to_json(),
            "g_coefficients": self.g.to_json(),
            "projected_cycle": self.projected.to_json(),
            "kind": self.kind,
            "resolution": self.resolution,
            "evidence": self.evidence.to_json() if self.evidence else None,
        }
        if self.allowed_residues is not None:
            out["allowed_residues"] = self.allowed_residues
        return out


@dataclass
class VanishingCertificate:
    status: str
    f: ExactPoly
    g: ExactPoly
    cycle: ZeroCycle
    terms: list[CertificateTerm] = field(default_factory=list)
    evidence: Evidence | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def vanishes(self) -> bool:
        return self.status in (VANISHES_TRIVIAL, VANISHES_BALANCED)

    def reconstruct(self) -> ExactPoly:
        total = ExactPoly()
        for t in self.terms:
            total = total + compose(t.g, t.h)
        return total

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "f": str(self.f),
            "g": str(self.g),
            "cycle": self.cycle.to_json(),
            "terms": [t.to_json() for t in self.terms],
            "evidence": self.evidence.to_json() if self.evidence else None,
            "reconstructs_g": self.reconstruct() == self.g if self.terms else None,
            "diagnostics": self.diagnostics,
        }


def shifted_monomial(f: ExactPoly) -> tuple[Fraction, Fraction, Fraction] | None:
    """``(a, b, e)`` with ``f == a (z + b)**m + e`` or None."""
    f = as_poly(f)
    m = f.degree
    if m < 1:
        return None
    a = f.lc
    b = f[m - 1] / (m * a)
    e = f[0] - a * b**m
    if a * ExactPoly([b, 1]) ** m + e == f:
        return a, b, e
    return None


def _resolve_balanced(f0: ExactPoly, hC: ZeroCycle, g0: ExactPoly, evidence_kw,
                      known: Evidence | None = None) -> CertificateTerm:
    from .applications import zm_solutions

    term = CertificateTerm(h=ExactPoly.z(), g=g0, projected=hC, kind="balanced")
    form = shifted_monomial(f0)
    if form is not None:
        _, b, _ = form
        G = g0.shift(-b)
        allowed = zm_solutions(f0.degree, hC)
        term.allowed_residues = sorted(allowed)
        ok = all(G[j] == 0 or (j % f0.degree) in allowed for j in range(G.degree + 1))
        term.resolution = "monomial-rule-pass" if ok else "monomial-rule-fail"
        return term
    ev = known if known is not None else is_identically_zero(f0, g0, hC, **evidence_kw)
    term.evidence = ev
    term.resolution = "evidence-pass" if ev.passed else "evidence-fail"
    return term


def _status(terms: list[CertificateTerm]) -> str:
    balanced = [t for t in terms if t.kind == "balanced"]
    if not balanced:
        return VANISHES_TRIVIAL
    # only the exact monomial rule settles a balanced term; evidence alone does not
    if all(t.resolution == "monomial-rule-pass" for t in balanced):
        return VANISHES_BALANCED
    return UNDETERMINED


def solve_tangential(f, C, g, data: MonodromyData | None = None, *,
                     cap: int = DEFAULT_CAP, tol: float = TOL,
                     n_samples: int = N_SAMPLES, order: int | None = None,
                     _depth: int = 0) -> VanishingCertificate:
    """Decide ``sum n_i g(z_i(t)) == 0`` and certify it by decompositions.

    Each term ``(h_k, g_k)`` satisfies ``f = f_k o h_k`` and the terms sum
    to ``g`` exactly. A term's projected cycle ``h_k(C)`` is trivial, or
    balanced for ``f_k``, in which case its own resolution is attached.
    """
    f, g = as_poly(f), as_poly(g)
    C = _check_cycle(f, C)
    if f.degree < 2:
        raise InputError("need deg f >= 2")
    z = ExactPoly.z()
    if C.is_trivial():
        return VanishingCertificate(
            VANISHES_TRIVIAL, f, g, C, [CertificateTerm(z, g, C, "trivial", resolution="trivial-cycle")],
            _exact_pass(0, tol),
        )
    g0 = theorem1_check(f, g)
    if g0 is not None:
        one = ZeroCycle([0])
        return VanishingCertificate(
            VANISHES_TRIVIAL, f, g, C,
            [CertificateTerm(f, g0, one, "trivial", resolution="composite-with-f")],
            _exact_pass(0, tol),
        )
    if data is None:
        data = monodromy_data(f)
    ev_kw = dict(n_samples=n_samples, order=order, tol=tol)
    evidence = is_identically_zero(f, g, C, data, **ev_kw)
    if not evidence.passed:
        return VanishingCertificate(DOES_NOT_VANISH, f, g, C, [], evidence)

    top = is_balanced(C, iter_conjugacy_class(data.tau_infinity, data.gens, cap))
    if top.balanced:
        term = _resolve_balanced(f, C, g, ev_kw, known=evidence)
        return VanishingCertificate(_status([term]), f, g, C, [term], evidence,
                                    {"top_level": "balanced"})

    m = f.degree
    decs = decomposition_set(f)
    periods = sorted((m // d for d in decs if d > 1), reverse=True)
    rem = g
    terms: list[CertificateTerm] = []
    peeled = []
    while rem.degree > 0:
        J = rem.degree
        s = _exact_polar(f, rem)
        chosen = None
        for c in periods:
            d = m // c
            if any(s.coefficient(k) != 0 for k in range(-J, 0) if k % d == 0):
                chosen = c
                break
        if chosen is None:
            raise InconsistentEvidenceError(
                "samples and Puiseux conditions indicate vanishing, but no proper "
                "decomposition carries the remaining part of g",
            )
        w, g0, dec = extract_psi_and_w(f, s, chosen, J)
        rem = rem - w
        peeled.append(chosen)
        terms.extend(_term_for(f, C, dec, g0, data, cap, ev_kw, _depth))
    if not rem.is_zero():
        # a leftover constant integrates to zero on any cycle
        terms.append(CertificateTerm(f, ExactPoly([rem[0]]), ZeroCycle([0]), "trivial",
                                     resolution="constant"))
    return VanishingCertificate(_status(terms), f, g, C, terms, evidence,
                                {"top_level": "unbalanced", "periods": peeled})


def _exact_polar(f: ExactPoly, g: ExactPoly) -> PuiseuxSeries:
    return puiseux_of_g(f, g, 0, exact=True)


def _term_for(f: ExactPoly, C: ZeroCycle, dec: Decomposition, g0: ExactPoly,
              data: MonodromyData, cap: int, ev_kw: dict, depth: int) -> list[CertificateTerm]:
    m = f.degree
    d = dec.inner.degree
    c = m // d
    bs = congruence_system(m, c)
    _check_blocks(dec.inner, data, bs)
    rep = classify_projection(f, C, bs, data, cap)
    hC = rep.projected
    if rep.kind == "trivial":
        return [CertificateTerm(dec.inner, g0, hC, "trivial", resolution="trivial-projection")]
    f0 = dec.outer
    if rep.kind == "balanced":
        term = _resolve_balanced(f0, hC, g0, ev_kw)
        term.h = dec.inner
        return [term]
    if c < 2:
        raise InconsistentEvidenceError("unbalanced projection onto a single block")
    sub = solve_tangential(f0, hC, g0, cap=cap, _depth=depth + 1, **ev_kw)
    if sub.status == DOES_NOT_VANISH:
        raise InconsistentEvidenceError(
            f"extracted part through h = {dec.inner} does not vanish on the projected cycle"
        )
    out = []
    for t in sub.terms:
        t.h = compose(t.h, dec.inner)
        out.append(t)
    return out


def _check_blocks(h: ExactPoly, data: MonodromyData, bs, tol: float = 1e-7) -> None:
    vals = np.polynomial.polynomial.polyval(data.fiber_array(), h.to_complex())
    scale = 1.0 + float(np.max(np.abs(vals)))
    for blk in bs.blocks:
        v = vals[list(blk)]
        if np.max(np.abs(v - v[0])) > tol * scale:
            raise NumericalError(f"h = {h} is not constant on the residue blocks")
