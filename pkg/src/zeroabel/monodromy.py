"""Numerical monodromy of polynomials by fiber tracking.

Loops live in the ``t``-plane. The basepoint ``t0`` sits on the circle of
radius ``1 + 2 max|sigma|``; each critical value gets a small circle joined
to ``t0`` by a straight segment, and ``tau_infinity`` comes from the
circle ``|t| = |t0|`` traversed counter-clockwise.

Labels are chosen so that ``tau_infinity == (1, 2, ..., m)`` and label 1
is the principal branch of the Puiseux expansion at infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InputError, NumericalError, TrackingError
from .groups import (
    BlockSystem,
    Permutation,
    block_systems as _block_systems,
    is_transitive,
    iter_conjugacy_class,
)
from .poly import Decomposition, ExactPoly, as_poly, decompose_degree, roots_of
from .puiseux import principal_branch_value

DEFAULT_CAP = 10**6
CLEARANCE_FRAC = 0.45
LOOP_FRAC = 0.4


# paths ---------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    @property
    def start(self) -> complex:
        return self.a

    @property
    def end(self) -> complex:
        return self.b


@dataclass(frozen=True)
class Arc:
    centre: complex
    radius: float
    theta0: float
    theta1: float

    def reversed(self) -> "Arc":
        return Arc(self.centre, self.radius, self.theta1, self.theta0)

    @property
    def start(self) -> complex:
        return self.centre + self.radius * cmath.exp(1j * self.theta0)

    @property
    def end(self) -> complex:
        return self.centre + self.radius * cmath.exp(1j * self.theta1)


Piece = Segment | Arc


def reverse_path(path: Sequence[Piece]) -> list[Piece]:
    return [p.reversed() for p in reversed(path)]


def track_pencil(a: np.ndarray, b: np.ndarray, path: Sequence[Piece], z0: np.ndarray,
                 ds_max: float = _kernels.DS_MAX) -> np.ndarray:
    """Continue the roots of ``a(z) + lam b(z)`` as ``lam`` follows ``path``."""
    z = np.asarray(z0, dtype=np.complex128)
    n = max(len(a), len(b))
    aa = np.zeros(n, dtype=np.complex128)
    bb = np.zeros(n, dtype=np.complex128)
    aa[: len(a)] = a
    bb[: len(b)] = b
    for piece in path:
        if isinstance(piece, Segment):
            if piece.a == piece.b:
                continue
            z, status, _ = _kernels.track(aa, bb, 0, piece.a, piece.b, 0, 0, z, ds_max)
        else:
            if piece.theta0 == piece.theta1:
                continue
            z, status, _ = _kernels.track(aa, bb, 1, piece.centre, piece.radius,
                                          piece.theta0, piece.theta1, z, ds_max)
        if status != 0:
            raise TrackingError(
                f"step-size underflow while tracking along {piece}; "
                "the path passes too close to a critical value"
            )
    return z


def _pencil_for(f: ExactPoly) -> tuple[np.ndarray, np.ndarray]:
    a = f.to_complex()
    b = np.zeros_like(a)
    b[0] = -1.0
    return a, b


def match_fibers(end: np.ndarray, start: np.ndarray) -> Permutation:
    """Permutation ``i -> j`` with ``end[i]`` closest to ``start[j]``."""
    n = len(start)
    if n == 1:
        return Permutation([0])
    d = np.abs(end[:, None] - start[None, :])
    order = np.argsort(d, axis=1)
    best = d[np.arange(n), order[:, 0]]
    second = d[np.arange(n), order[:, 1]]
    img = order[:, 0].tolist()
    if sorted(img) != list(range(n)) or np.any(second < 4.0 * best):
        raise TrackingError("closed path returned to an ambiguous fiber")
    return Permutation(img)


def track_path(f, path: Sequence[Piece], fiber, ds_max: float = _kernels.DS_MAX):
    """Track the fiber of ``f`` along ``path``.

    Returns ``(end_fiber, perm)``. For a closed path ``perm`` is the
    monodromy permutation (root ``i`` ends where root ``perm(i)`` started);
    for an open path it is the identity.
    """
    f = as_poly(f)
    z0 = np.asarray(getattr(fiber, "roots", fiber), dtype=np.complex128)
    a, b = _pencil_for(f)
    z = track_pencil(a, b, path, z0, ds_max)
    start, end = path[0].start, path[-1].end
    if abs(start - end) <= 1e-12 * (1 + abs(start)):
        return z, match_fibers(z, z0)
    return z, Permutation.identity(len(z0))


# critical values -------------------------------------------------------------


def critical_points(f: ExactPoly) -> list[complex]:
    f = as_poly(f)
    if f.degree < 2:
        return []
    return list(roots_of(f.derivative()).roots)


def critical_values(f) -> list[complex]:
    """Distinct critical values, deduplicated with a relative tolerance."""
    f = as_poly(f)
    if f.degree < 2:
        raise InputError("critical values need deg f >= 2")
    cf = f.to_complex()
    vals = [complex(np.polynomial.polynomial.polyval(c, cf)) for c in critical_points(f)]
    scale = 1.0 + max(abs(v) for v in vals)
    tol = 1e-9 * scale
    out: list[complex] = []
    for v in sorted(vals, key=lambda v: (v.real, v.imag)):
        if not any(abs(v - w) <= tol for w in out):
            out.append(v)
    # snap tiny parts for reproducible output
    return [complex(0.0 if abs(v.real) < 1e-14 * scale else v.real,
                    0.0 if abs(v.imag) < 1e-14 * scale else v.imag) for v in out]


def _seg_dist(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    s = ((p - a) * ab.conjugate()).real / abs(ab) ** 2
    s = min(1.0, max(0.0, s))
    return abs(p - (a + s * ab))


def _pairwise_min(vals: Sequence[complex]) -> float:
    d = math.inf
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            d = min(d, abs(vals[i] - vals[j]))
    return d


def _angle_candidates(base: float, k_max: int = 24) -> list[float]:
    out = [base]
    for k in range(1, k_max + 1):
        out += [base + k * math.pi / 24, base - k * math.pi / 24]
    return out


def choose_basepoint(sigma: Sequence[complex]) -> tuple[complex, float]:
    """Basepoint and the smallest clearance of its connecting segments."""
    big = max((abs(s) for s in sigma), default=0.0)
    radius = 1.0 + 2.0 * big
    if len(sigma) <= 1:
        return complex(radius, 0.0), math.inf
    dmin = _pairwise_min(sigma)
    best = None
    for theta in _angle_candidates(0.0):
        t0 = radius * cmath.exp(1j * theta)
        clearance = min(
            _seg_dist(sj, t0, sk) for sk in sigma for sj in sigma if sj != sk
        )
        if clearance >= CLEARANCE_FRAC * dmin:
            return t0, clearance
        if best is None or clearance > best[1]:
            best = (t0, clearance)
    return best


def loop_around(t0: complex, sigma: complex, r: float) -> list[Piece]:
    direction = (t0 - sigma) / abs(t0 - sigma)
    p = sigma + r * direction
    ang = cmath.phase(direction)
    return [Segment(t0, p), Arc(sigma, r, ang, ang + 2 * math.pi), Segment(p, t0)]


def big_loop(t0: complex) -> list[Piece]:
    ang = cmath.phase(t0)
    return [Arc(0j, abs(t0), ang, ang + 2 * math.pi)]


def plan_path(t0: complex, target: complex, sigma: Sequence[complex]) -> list[Piece]:
    """Arc on ``|t| = |t0|`` followed by a straight segment to ``target``.

    The arc end angle is the first candidate (nearest the target's own
    argument) whose segment keeps clear of every critical value.
    """
    R = abs(t0)
    th0 = cmath.phase(t0)
    if target == t0:
        return [Segment(t0, t0)]
    if not sigma:
        base = cmath.phase(target) if target != 0 else th0
        return _arc_then_segment(t0, R, th0, base, target)
    dmin = _pairwise_min(sigma) if len(sigma) > 1 else abs(sigma[0]) + 1.0
    near = min(abs(target - s) for s in sigma)
    need = min(0.45 * dmin, 0.9 * near)
    base = cmath.phase(target) if abs(target) > 0 else th0
    best = None
    for alpha in _angle_candidates(base):
        start = R * cmath.exp(1j * alpha)
        clear = min(_seg_dist(s, start, target) for s in sigma)
        if clear >= need:
            return _arc_then_segment(t0, R, th0, alpha, target)
        if best is None or clear > best[1]:
            best = (alpha, clear)
    return _arc_then_segment(t0, R, th0, best[0], target)


def _arc_then_segment(t0, R, th0, alpha, target) -> list[Piece]:
    # shortest way round the circle
    delta = (alpha - th0 + math.pi) % (2 * math.pi) - math.pi
    pieces: list[Piece] = []
    if abs(delta) > 0:
        pieces.append(Arc(0j, R, th0, th0 + delta))
    pieces.append(Segment(R * cmath.exp(1j * (th0 + delta)), target))
    return pieces


# monodromy data --------------------------------------------------------------


@dataclass(frozen=True)
class MonodromyData:
    f: ExactPoly
    basepoint: complex
    critical_values: tuple[complex, ...]
    fiber: tuple[complex, ...]
    generators: tuple[tuple[complex, Permutation], ...]
    tau_infinity: Permutation
    loop_radius: float
    ds_max: float = _kernels.DS_MAX
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def m(self) -> int:
        return len(self.fiber)

    @property
    def gens(self) -> list[Permutation]:
        return [p for _, p in self.generators]

    def fiber_array(self) -> np.ndarray:
        return np.array(self.fiber, dtype=np.complex128)

    def generator_product(self) -> Permutation:
        prod = Permutation.identity(self.m)
        for _, p in self.generators:
            prod = p * prod
        return prod

    def to_json(self) -> dict:
        return {
            "f": str(self.f),
            "m": self.m,
            "basepoint": [self.basepoint.real, self.basepoint.imag],
            "critical_values": [[s.real, s.imag] for s in self.critical_values],
            "fiber": [[z.real, z.imag] for z in self.fiber],
            "generators": [
                {"critical_value": [s.real, s.imag], "permutation": p.to_json(),
                 "cycles": p.to_cycle_str()}
                for s, p in self.generators
            ],
            "tau_infinity": self.tau_infinity.to_json(),
            "transitive": is_transitive(self.gens, self.m),
        }


def _principal_index(f: ExactPoly, t0: complex, fiber: np.ndarray, sigma) -> int:
    """Index of the fiber point continuing the Puiseux principal branch."""
    t = t0
    for level in range(12):
        approx, tail = principal_branch_value(f, t)
        roots = fiber if level == 0 else np.array(roots_of(_shift_const(f, t)).roots)
        d = np.abs(roots - approx)
        order = np.argsort(d)
        if len(roots) == 1:
            return 0
        ok = d[order[1]] >= 4.0 * d[order[0]] and tail < 1e-3 * abs(approx)
        if ok:
            if level == 0:
                return int(order[0])
            z_end = track_pencil(*_pencil_for(f), [Segment(t, t0)],
                                 np.array(roots), _kernels.DS_MAX)
            return int(np.argmin(np.abs(fiber - z_end[order[0]])))
        t = t * 4.0
    raise NumericalError("could not identify the principal branch at infinity")


def _shift_const(f: ExactPoly, t: complex) -> np.ndarray:
    c = f.to_complex()
    c[0] -= t
    return c


def _fiber_at(f: ExactPoly, t: complex) -> np.ndarray:
    c = _shift_const(f, t)
    return np.array(roots_of(c).roots, dtype=np.complex128)


@lru_cache(maxsize=128)
def _monodromy_cached(f: ExactPoly, ds_max: float) -> MonodromyData:
    m = f.degree
    sigma = critical_values(f)
    t0, clearance = choose_basepoint(sigma)
    fiber = _fiber_at(f, t0)
    if len(sigma) > 1:
        r = LOOP_FRAC * min(_pairwise_min(sigma), min(abs(t0 - s) for s in sigma))
    else:
        r = LOOP_FRAC * abs(t0 - sigma[0])
    r = min(r, 0.9 * clearance) if math.isfinite(clearance) else r
    theta_ref = cmath.phase(-t0) - math.pi / 2
    ordered = sorted(sigma, key=lambda s: (cmath.phase(s - t0) - theta_ref) % (2 * math.pi))
    raw_gens = []
    for s in ordered:
        _, perm = track_path(f, loop_around(t0, s, r), fiber, ds_max)
        raw_gens.append((s, perm))
    _, tau = track_path(f, big_loop(t0), fiber, ds_max)
    if not tau.is_full_cycle():
        raise NumericalError("tau_infinity is not an m-cycle")
    start = _principal_index(f, t0, fiber, sigma)
    order = tau.cycle_sequence(start)
    # new label k holds old root order[k]
    relabel = [0] * m
    for new, old in enumerate(order):
        relabel[old] = new
    s_map = Permutation(relabel)
    new_fiber = tuple(complex(fiber[old]) for old in order)
    gens = tuple((s, p.conjugate_by(s_map)) for s, p in raw_gens)
    tau_new = tau.conjugate_by(s_map)
    data = MonodromyData(
        f=f, basepoint=t0, critical_values=tuple(ordered), fiber=new_fiber,
        generators=gens, tau_infinity=tau_new, loop_radius=r, ds_max=ds_max,
    )
    _check_invariants(data)
    return data


def _check_invariants(data: MonodromyData) -> None:
    m = data.m
    if data.tau_infinity != Permutation.shift(m):
        raise NumericalError("relabelling failed to make tau_infinity = (1..m)")
    if data.generator_product() != data.tau_infinity:
        raise NumericalError("product of generator loops differs from tau_infinity")
    if not is_transitive(data.gens, m):
        raise NumericalError("monodromy group is not transitive")


def monodromy_data(f, ds_max: float = _kernels.DS_MAX) -> MonodromyData:
    f = as_poly(f)
    if f.degree < 2:
        raise InputError("monodromy needs deg f >= 2")
    return _monodromy_cached(f, float(ds_max))


def fiber_at(data: MonodromyData, t: complex) -> np.ndarray:
    """Labelled fiber over ``t`` reached along the standard planned path."""
    path = plan_path(data.basepoint, complex(t), data.critical_values)
    return track_pencil(*_pencil_for(data.f), path, data.fiber_array(), data.ds_max)


def conjugacy_class_tau(data: MonodromyData, cap: int = DEFAULT_CAP) -> frozenset[Permutation]:
    return frozenset(iter_conjugacy_class(data.tau_infinity, data.gens, cap))


def block_systems(data: MonodromyData) -> list[BlockSystem]:
    return _block_systems(data.gens, data.m)


def block_to_decomposition(f, bs: BlockSystem, data: MonodromyData | None = None,
                           tol: float = 1e-7) -> Decomposition | None:
    """Decomposition whose inner factor is constant on the blocks of ``bs``."""
    f = as_poly(f)
    d = bs.block_size
    if f.degree % d:
        return None
    dec = decompose_degree(f, d)
    if dec is None:
        return None
    if data is None:
        data = monodromy_data(f)
    vals = np.polynomial.polynomial.polyval(data.fiber_array(), dec.inner.to_complex())
    scale = 1.0 + float(np.max(np.abs(vals)))
    for blk in bs.blocks:
        v = vals[list(blk)]
        if np.max(np.abs(v - v[0])) > tol * scale:
            return None
    return dec
