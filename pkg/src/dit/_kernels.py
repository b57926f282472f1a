"""Fixed-step RK4 kernels for the mean-field cavity/dipole equations.

In the frame rotating at the probe frequency the amplitudes obey

    db/dt = -cav * b - i g s + drive
    ds/dt = -dip * s - i g b

with complex rates ``cav`` and ``dip``. Two interchangeable backends:
numba-compiled scalar loops (one grid point at a time), and a numpy path
that advances every unconverged grid point together. Set
``DIT_DISABLE_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

_DISABLE = os.environ.get("DIT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
USE_NUMBA = HAS_NUMBA and not _DISABLE
BACKEND = "numba" if USE_NUMBA else "numpy"


def _rk4_step(b, s, cav, dip, g, drive, dt):
    half = 0.5 * dt
    k1b = -cav * b - 1j * g * s + drive
    k1s = -dip * s - 1j * g * b
    b2 = b + half * k1b
    s2 = s + half * k1s
    k2b = -cav * b2 - 1j * g * s2 + drive
    k2s = -dip * s2 - 1j * g * b2
    b3 = b + half * k2b
    s3 = s + half * k2s
    k3b = -cav * b3 - 1j * g * s3 + drive
    k3s = -dip * s3 - 1j * g * b3
    b4 = b + dt * k3b
    s4 = s + dt * k3s
    k4b = -cav * b4 - 1j * g * s4 + drive
    k4s = -dip * s4 - 1j * g * b4
    sixth = dt / 6.0
    return (
        b + sixth * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
        s + sixth * (k1s + 2.0 * k2s + 2.0 * k3s + k4s),
    )


def _relative_change(b, s, bp, sp):
    num = np.sqrt(np.abs(b - bp) ** 2 + np.abs(s - sp) ** 2)
    den = np.sqrt(np.abs(b) ** 2 + np.abs(s) ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > 0, num / den, np.where(num == 0, 0.0, np.inf))


# --------------------------------------------------------------------- numpy


def numpy_evolve(b0, s0, cav, dip, g, drive, dt, n_steps):
    b = np.array(b0, dtype=np.complex128)
    s = np.array(s0, dtype=np.complex128)
    cav, dip, drive = (np.asarray(x, dtype=np.complex128) for x in (cav, dip, drive))
    for _ in range(int(n_steps)):
        b, s = _rk4_step(b, s, cav, dip, g, drive, dt)
    return b, s


def numpy_steady(cav, dip, g, drive, dt, window_steps, max_steps, tol):
    cav, dip, drive = (np.ascontiguousarray(x, dtype=np.complex128) for x in (cav, dip, drive))
    n = cav.shape[0]
    b_out = np.zeros(n, np.complex128)
    s_out = np.zeros(n, np.complex128)
    steps_out = np.zeros(n, np.int64)
    res_out = np.full(n, np.inf)
    conv_out = np.zeros(n, np.bool_)

    idx = np.arange(n)
    b = np.zeros(n, np.complex128)
    s = np.zeros(n, np.complex128)
    steps = 0
    while idx.size and steps < max_steps:
        c, d, f = cav[idx], dip[idx], drive[idx]
        bp, sp = b, s
        m = min(window_steps, max_steps - steps)
        for _ in range(m):
            b, s = _rk4_step(b, s, c, d, g, f, dt)
        steps += m
        res = _relative_change(b, s, bp, sp)
        done = res <= tol
        if steps >= max_steps:
            finish = np.ones_like(done)
        else:
            finish = done
        sel = idx[finish]
        b_out[sel], s_out[sel] = b[finish], s[finish]
        steps_out[sel], res_out[sel], conv_out[sel] = steps, res[finish], done[finish]
        keep = ~finish
        idx, b, s = idx[keep], b[keep], s[keep]
    return b_out, s_out, steps_out, res_out, conv_out


# --------------------------------------------------------------------- numba

if HAS_NUMBA:
    _rk4_step_jit = njit(_rk4_step)

    @njit
    def numba_evolve(b0, s0, cav, dip, g, drive, dt, n_steps):
        n = cav.shape[0]
        b_out = np.empty(n, np.complex128)
        s_out = np.empty(n, np.complex128)
        for k in range(n):
            b = b0[k]
            s = s0[k]
            for _ in range(n_steps):
                b, s = _rk4_step_jit(b, s, cav[k], dip[k], g, drive[k], dt)
            b_out[k] = b
            s_out[k] = s
        return b_out, s_out

    @njit
    def numba_steady(cav, dip, g, drive, dt, window_steps, max_steps, tol):
        n = cav.shape[0]
        b_out = np.zeros(n, np.complex128)
        s_out = np.zeros(n, np.complex128)
        steps_out = np.zeros(n, np.int64)
        res_out = np.full(n, np.inf)
        conv_out = np.zeros(n, np.bool_)
        for k in range(n):
            b = 0j
            s = 0j
            c = cav[k]
            d = dip[k]
            f = drive[k]
            steps = 0
            res = np.inf
            conv = False
            while steps < max_steps:
                bp = b
                sp = s
                m = min(window_steps, max_steps - steps)
                for _ in range(m):
                    b, s = _rk4_step_jit(b, s, c, d, g, f, dt)
                steps += m
                num = np.sqrt(abs(b - bp) ** 2 + abs(s - sp) ** 2)
                den = np.sqrt(abs(b) ** 2 + abs(s) ** 2)
                if den > 0:
                    res = num / den
                elif num == 0:
                    res = 0.0
                else:
                    res = np.inf
                if res <= tol:
                    conv = True
                    break
            b_out[k] = b
            s_out[k] = s
            steps_out[k] = steps
            res_out[k] = res
            conv_out[k] = conv
        return b_out, s_out, steps_out, res_out, conv_out

else:  # pragma: no cover
    numba_evolve = None
    numba_steady = None


def rk4_steady(cav, dip, g, drive, dt, window_steps, max_steps, tol):
    """Integrate from b = s = 0 until the state changes by at most ``tol``
    (relative) across one window of ``window_steps`` steps.

    Returns ``(b, s, steps, residual, converged)`` arrays, one entry per point.
    """
    args = (
        np.ascontiguousarray(cav, dtype=np.complex128),
        np.ascontiguousarray(dip, dtype=np.complex128),
        float(g),
        np.ascontiguousarray(drive, dtype=np.complex128),
        float(dt),
        int(window_steps),
        int(max_steps),
        float(tol),
    )
    if USE_NUMBA:
        return numba_steady(*args)
    return numpy_steady(*args)


def rk4_evolve(b0, s0, cav, dip, g, drive, dt, n_steps):
    """Advance each point by exactly ``n_steps`` RK4 steps."""
    args = (
        np.ascontiguousarray(b0, dtype=np.complex128),
        np.ascontiguousarray(s0, dtype=np.complex128),
        np.ascontiguousarray(cav, dtype=np.complex128),
        np.ascontiguousarray(dip, dtype=np.complex128),
        float(g),
        np.ascontiguousarray(drive, dtype=np.complex128),
        float(dt),
        int(n_steps),
    )
    if USE_NUMBA:
        return numba_evolve(*args)
    return numpy_evolve(*args)
