"""Hot numerical kernels: simultaneous root iteration and fiber tracking.

Two interchangeable implementations exist. The default compiles plain
loops with numba; setting ``ZEROABEL_NO_NUMBA=1`` before import selects
vectorized numpy versions instead. Both follow the same algorithms and
step rules, so results agree to rounding.

Tracking follows the roots of ``A(z) + lam * B(z) = 0`` while ``lam``
moves along a segment (``kind == 0``: ``p0 -> p1``) or an arc
(``kind == 1``: centre ``p0``, radius ``p1.real``, angles ``p2.real`` to
``p3.real``). Coefficients are ascending and ``A``, ``B`` share a length.
"""

from __future__ import annotations

import math
import os

import numpy as np

MAX_SWEEPS = 200
ROOT_TOL = 1e-14
NOISE = 4.0 * 2.220446049250313e-16
DS_MAX = 0.05
DS_MIN = 1e-12
ARC_STEP = math.pi / 16
MOVE_FRAC = 0.4
NEWTON_FRAC = 0.1
MATCH_RATIO = 2.0

_flag = os.environ.get("ZEROABEL_NO_NUMBA", "").strip().lower()
USE_NUMBA = _flag not in ("1", "true", "yes", "on")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba versions

if USE_NUMBA:

    @njit(cache=True)
    def _horner2(c, z):
        n = c.shape[0]
        p = c[n - 1]
        dp = 0.0j
        for k in range(n - 2, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
        return p, dp

    @njit(cache=True)
    def _noise(c, z):
        # running rounding bound for Horner evaluation of c at z
        az = abs(z)
        acc = abs(c[c.shape[0] - 1])
        for k in range(c.shape[0] - 2, -1, -1):
            acc = acc * az + abs(c[k])
        return NOISE * c.shape[0] * acc

    @njit(cache=True)
    def _aberth_nb(c, max_sweeps, tol):
        n = c.shape[0] - 1
        roots = np.empty(n, dtype=np.complex128)
        if n == 1:
            roots[0] = -c[0] / c[1]
            return roots, True, 0
        centre = -c[n - 1] / (n * c[n])
        val, _ = _horner2(c, centre)
        rad = (abs(val / c[n])) ** (1.0 / n)
        if not (rad > 0.0) or not np.isfinite(rad):
            rad = 1.0
        for k in range(n):
            ang = 2.0 * np.pi * k / n + 0.4
            roots[k] = centre + rad * complex(np.cos(ang), np.sin(ang))
        corr = np.empty(n, dtype=np.complex128)
        for sweep in range(max_sweeps):
            done = True
            quiet = np.zeros(n, dtype=np.bool_)
            for i in range(n):
                p, dp = _horner2(c, roots[i])
                if p == 0:
                    corr[i] = 0.0
                    quiet[i] = True
                    continue
                if abs(p) <= _noise(c, roots[i]):
                    quiet[i] = True
                w = p / dp
                s = 0.0j
                for j in range(n):
                    if j != i:
                        s += 1.0 / (roots[i] - roots[j])
                corr[i] = w / (1.0 - w * s)
            for i in range(n):
                roots[i] -= corr[i]
                if not (quiet[i] or abs(corr[i]) <= tol * (1.0 + abs(roots[i]))):
                    done = False
            if done:
                return roots, True, sweep + 1
        return roots, False, max_sweeps

    @njit(cache=True)
    def _lam_at(kind, p0, p1, p2, p3, s):
        if kind == 0:
            return p0 + s * (p1 - p0)
        ang = p2.real + s * (p3.real - p2.real)
        return p0 + p1.real * complex(np.cos(ang), np.sin(ang))

    @njit(cache=True)
    def _min_dist(z):
        n = z.shape[0]
        d = np.inf
        for i in range(n):
            for j in range(i + 1, n):
                v = abs(z[i] - z[j])
                if v < d:
                    d = v
        return d

    @njit(cache=True)
    def _track_nb(a, b, kind, p0, p1, p2, p3, z0, ds_max, ds_min):
        n = z0.shape[0]
        z = z0.copy()
        if kind == 1:
            span = abs(p3.real - p2.real)
            if span > 0:
                cap = ARC_STEP / span
                if cap < ds_max:
                    ds_max = cap
        s = 0.0
        ds = ds_max
        lam = _lam_at(kind, p0, p1, p2, p3, 0.0)
        c = np.empty(a.shape[0], dtype=np.complex128)
        znew = np.empty(n, dtype=np.complex128)
        steps = 0
        dmin = _min_dist(z) if n > 1 else np.inf
        while s < 1.0:
            s1 = min(1.0, s + ds)
            lam1 = _lam_at(kind, p0, p1, p2, p3, s1)
            for k in range(a.shape[0]):
                c[k] = a[k] + lam * b[k]
            ok = True
            for i in range(n):
                _, dp = _horner2(c, z[i])
                bv, _ = _horner2(b, z[i])
                if dp == 0:
                    ok = False
                    break
                znew[i] = z[i] - bv / dp * (lam1 - lam)
            if ok:
                for k in range(a.shape[0]):
                    c[k] = a[k] + lam1 * b[k]
                for i in range(n):
                    conv = False
                    for it in range(12):
                        p, dp = _horner2(c, znew[i])
                        if dp == 0:
                            break
                        step = p / dp
                        if it == 0 and abs(step) > NEWTON_FRAC * dmin:
                            break
                        znew[i] -= step
                        if abs(step) <= 1e-13 * (1.0 + abs(znew[i])) or abs(p) <= _noise(c, znew[i]):
                            conv = True
                            break
                    if not conv:
                        ok = False
                        break
            if ok:
                for i in range(n):
                    if abs(znew[i] - z[i]) >= MOVE_FRAC * dmin:
                        ok = False
                        break
            if ok and n > 1:
                for i in range(n):
                    best = np.inf
                    second = np.inf
                    arg = -1
                    for j in range(n):
                        v = abs(znew[i] - z[j])
                        if v < best:
                            second = best
                            best = v
                            arg = j
                        elif v < second:
                            second = v
                    if arg != i or second < MATCH_RATIO * best:
                        ok = False
                        break
            if ok:
                for i in range(n):
                    z[i] = znew[i]
                s = s1
                lam = lam1
                steps += 1
                dmin = _min_dist(z) if n > 1 else np.inf
                ds = min(2.0 * ds, ds_max)
            else:
                ds *= 0.5
                if ds < ds_min:
                    return z, 1, steps
        return z, 0, steps


# ---------------------------------------------------------------------------
# numpy versions


def _horner2_np(c: np.ndarray, z: np.ndarray):
    p = np.full(z.shape, c[-1], dtype=np.complex128)
    dp = np.zeros(z.shape, dtype=np.complex128)
    for k in range(len(c) - 2, -1, -1):
        dp = dp * z + p
        p = p * z + c[k]
    return p, dp


def _noise_np(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    az = np.abs(z)
    acc = np.full(z.shape, abs(c[-1]))
    for k in range(len(c) - 2, -1, -1):
        acc = acc * az + abs(c[k])
    return NOISE * len(c) * acc


def _aberth_np(c, max_sweeps, tol):
    n = len(c) - 1
    if n == 1:
        return np.array([-c[0] / c[1]], dtype=np.complex128), True, 0
    centre = -c[n - 1] / (n * c[n])
    val, _ = _horner2_np(c, np.array([centre]))
    rad = abs(val[0] / c[n]) ** (1.0 / n)
    if not (rad > 0.0) or not np.isfinite(rad):
        rad = 1.0
    ang = 2.0 * np.pi * np.arange(n) / n + 0.4
    roots = centre + rad * (np.cos(ang) + 1j * np.sin(ang))
    eye = np.eye(n, dtype=bool)
    for sweep in range(max_sweeps):
        p, dp = _horner2_np(c, roots)
        diff = roots[:, None] - roots[None, :]
        diff[eye] = 1.0
        inv = 1.0 / diff
        inv[eye] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            corr = w / (1.0 - w * s)
        quiet = (p == 0) | (np.abs(p) <= _noise_np(c, roots))
        corr = np.where(p == 0, 0.0, corr)
        roots = roots - corr
        if np.all(quiet | (np.abs(corr) <= tol * (1.0 + np.abs(roots)))):
            return roots, True, sweep + 1
    return roots, False, max_sweeps


def _lam_at_np(kind, p0, p1, p2, p3, s):
    if kind == 0:
        return p0 + s * (p1 - p0)
    ang = p2.real + s * (p3.real - p2.real)
    return p0 + p1.real * complex(math.cos(ang), math.sin(ang))


def _min_dist_np(z: np.ndarray) -> float:
    if len(z) < 2:
        return np.inf
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())


def _track_np(a, b, kind, p0, p1, p2, p3, z0, ds_max, ds_min):
    n = len(z0)
    z = z0.copy()
    if kind == 1:
        span = abs(p3.real - p2.real)
        if span > 0:
            ds_max = min(ds_max, ARC_STEP / span)
    s = 0.0
    ds = ds_max
    lam = _lam_at_np(kind, p0, p1, p2, p3, 0.0)
    steps = 0
    dmin = _min_dist_np(z)
    idx = np.arange(n)
    while s < 1.0:
        s1 = min(1.0, s + ds)
        lam1 = _lam_at_np(kind, p0, p1, p2, p3, s1)
        ok = True
        _, dp = _horner2_np(a + lam * b, z)
        bv, _ = _horner2_np(b, z)
        if np.any(dp == 0):
            ok = False
        if ok:
            znew = z - bv / dp * (lam1 - lam)
            c = a + lam1 * b
            done = np.zeros(n, dtype=bool)
            for it in range(12):
                p, dp = _horner2_np(c, znew)
                if np.any(dp == 0):
                    ok = False
                    break
                step = np.where(done, 0.0, p / dp)
                if it == 0 and np.any(np.abs(step) > NEWTON_FRAC * dmin):
                    ok = False
                    break
                znew = znew - step
                done |= (np.abs(step) <= 1e-13 * (1.0 + np.abs(znew))) | (np.abs(p) <= _noise_np(c, znew))
                if done.all():
                    break
            ok = ok and bool(done.all())
        if ok and np.any(np.abs(znew - z) >= MOVE_FRAC * dmin):
            ok = False
        if ok and n > 1:
            d = np.abs(znew[:, None] - z[None, :])
            order = np.argsort(d, axis=1)
            best = d[idx, order[:, 0]]
            second = d[idx, order[:, 1]]
            if np.any(order[:, 0] != idx) or np.any(second < MATCH_RATIO * best):
                ok = False
        if ok:
            z = znew
            s = s1
            lam = lam1
            steps += 1
            dmin = _min_dist_np(z)
            ds = min(2.0 * ds, ds_max)
        else:
            ds *= 0.5
            if ds < ds_min:
                return z, 1, steps
    return z, 0, steps


# ---------------------------------------------------------------------------
# public entry points


def aberth(coeffs: np.ndarray, max_sweeps: int = MAX_SWEEPS, tol: float = ROOT_TOL):
    """Roots of the ascending-coefficient polynomial ``coeffs``.

    Returns ``(roots, converged, sweeps)``.
    """
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    if USE_NUMBA:
        return _aberth_nb(c, max_sweeps, tol)
    return _aberth_np(c, max_sweeps, tol)


def track(a, b, kind, p0, p1, p2, p3, z0, ds_max=DS_MAX, ds_min=DS_MIN):
    """Continue the roots ``z0`` of ``a + lam*b`` along a segment or arc.

    Returns ``(z, status, steps)`` with ``status == 0`` on success and
    ``1`` on step-size underflow.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    z0 = np.ascontiguousarray(z0, dtype=np.complex128)
    args = (a, b, int(kind), complex(p0), complex(p1), complex(p2), complex(p3), z0,
            float(ds_max), float(ds_min))
    if USE_NUMBA:
        return _track_nb(*args)
    return _track_np(*args)


def warmup() -> None:
    """Trigger compilation so the first real call is not billed for it."""
    c = np.array([-1.0, 0.0, 1.0], dtype=np.complex128)
    aberth(c)
    z0 = np.array([-1.0, 1.0], dtype=np.complex128)
    track(np.array([0.0, 0.0, 1.0]), np.array([-1.0, 0.0, 0.0]), 0, 1.0, 2.0, 0, 0, z0)
    track(np.array([0.0, 0.0, 1.0]), np.array([-1.0, 0.0, 0.0]), 1, 0.0, 1.0, 0.0, 0.5, z0)
