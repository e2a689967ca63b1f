"""Hot loops for the brute-force cross-checks.

Each kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version with identical semantics.  The numba path is used when numba
imports cleanly and ``PILLAI_FIB_DISABLE_NUMBA`` is unset (or ``0``).
Both versions are importable directly (``*_numba`` / ``*_numpy``) so the
test-suite and the benchmark can compare them.

None of these kernels certifies anything on its own: they run in int64 or
float64 and only *flag* candidates, which the callers then confirm with
exact integers or mpmath.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("PILLAI_FIB_DISABLE_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("disabled by PILLAI_FIB_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"

# Relative and absolute slack for float64 candidate flagging.
FLAG_RTOL = 1e-9
FLAG_ATOL = 1e-12


# -- modular pre-sieve for 3^x - F_n 2^y = 1 ---------------------------------------------


def _residue_match(p3, p2, pf, mods, xi, yi, ni):
    for j in range(mods.shape[0]):
        m = mods[j]
        if (p3[j, xi] - (pf[j, ni] * p2[j, yi]) % m - 1) % m != 0:
            return False
    return True


def _residue_hits_py(p3, p2, pf, mods):
    X, Y, N = p3.shape[1], p2.shape[1], pf.shape[1]
    count = 0
    for xi in range(X):
        for yi in range(Y):
            for ni in range(N):
                if _residue_match(p3, p2, pf, mods, xi, yi, ni):
                    count += 1
    out = np.empty((count, 3), dtype=np.int64)
    k = 0
    for xi in range(X):
        for yi in range(Y):
            for ni in range(N):
                if _residue_match(p3, p2, pf, mods, xi, yi, ni):
                    out[k, 0] = xi
                    out[k, 1] = yi
                    out[k, 2] = ni
                    k += 1
    return out


if HAVE_NUMBA:
    _residue_match = njit(nogil=True)(_residue_match)

residue_hits_numba = njit(nogil=True)(_residue_hits_py) if HAVE_NUMBA else None


def residue_hits_numpy(p3, p2, pf, mods):
    mask = None
    for j in range(mods.shape[0]):
        m = mods[j]
        prod = (pf[j][None, None, :] * p2[j][None, :, None]) % m
        r = (p3[j][:, None, None] - prod - 1) % m
        hit = r == 0
        mask = hit if mask is None else mask & hit
    return np.argwhere(mask).astype(np.int64)


# -- linear form Gamma over a box ---------------------------------------------------------


def _linear_form_scan_py(xs, ys, ns, l3, l2, la, lsqrt5, sqrt5):
    best = np.inf
    bx, by, bn = -1, -1, -1
    violations = 0
    for n in ns:
        rhs = sqrt5 * math.exp(-n * la)
        for y in ys:
            for x in xs:
                g = n * la - x * l3 + y * l2 - lsqrt5
                ag = abs(g)
                if ag < best:
                    best = ag
                    bx, by, bn = x, y, n
                if rhs < 0.5 and abs(math.expm1(g)) < rhs and not ag < 2.0 * rhs:
                    violations += 1
    return best, bx, by, bn, violations


linear_form_scan_numba = njit(nogil=True)(_linear_form_scan_py) if HAVE_NUMBA else None


def linear_form_scan_numpy(xs, ys, ns, l3, l2, la, lsqrt5, sqrt5):
    X = xs.astype(np.float64)[None, None, :]
    Yv = ys.astype(np.float64)[None, :, None]
    Nv = ns.astype(np.float64)[:, None, None]
    g = Nv * la - X * l3 + Yv * l2 - lsqrt5
    ag = np.abs(g)
    i = np.unravel_index(np.argmin(ag), ag.shape)
    rhs = sqrt5 * np.exp(-Nv * la)
    bad = (rhs < 0.5) & (np.abs(np.expm1(g)) < rhs) & ~(ag < 2.0 * rhs)
    return (float(ag[i]), int(xs[i[2]]), int(ys[i[1]]), int(ns[i[0]]), int(bad.sum()))


# -- exhaustive (u, v, omega) enumeration for the reduction lemma -------------------------------


def _lemma_flags_py(gamma, mu, M, A, B, omega_lo, omega_hi):
    out = np.empty((0, 3), dtype=np.int64)
    for pass_ in range(2):
        count = 0
        for u in range(1, M + 1):
            V = int(math.ceil(u * gamma + abs(mu))) + 1
            for v in range(-V, V + 1):
                lhs = abs(u * gamma - v + mu)
                for w in range(omega_lo, omega_hi + 1):
                    if lhs < A * B ** (-w) * (1.0 + FLAG_RTOL) + FLAG_ATOL:
                        if pass_ == 1:
                            out[count, 0] = u
                            out[count, 1] = v
                            out[count, 2] = w
                        count += 1
        if pass_ == 0:
            out = np.empty((count, 3), dtype=np.int64)
    return out


lemma_flags_numba = njit(nogil=True)(_lemma_flags_py) if HAVE_NUMBA else None


def lemma_flags_numpy(gamma, mu, M, A, B, omega_lo, omega_hi):
    rows = []
    ws = np.arange(omega_lo, omega_hi + 1, dtype=np.int64)
    rhs = A * B ** (-ws.astype(np.float64)) * (1.0 + FLAG_RTOL) + FLAG_ATOL
    for u in range(1, M + 1):
        V = int(math.ceil(u * gamma + abs(mu))) + 1
        vs = np.arange(-V, V + 1, dtype=np.int64)
        lhs = np.abs(u * gamma - vs + mu)
        vi, wi = np.nonzero(lhs[:, None] < rhs[None, :])
        for a, b in zip(vi, wi):
            rows.append((u, vs[a], ws[b]))
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


if HAVE_NUMBA:
    residue_hits = residue_hits_numba
    linear_form_scan = linear_form_scan_numba
    lemma_flags = lemma_flags_numba
else:
    residue_hits = residue_hits_numpy
    linear_form_scan = linear_form_scan_numpy
    lemma_flags = lemma_flags_numpy
