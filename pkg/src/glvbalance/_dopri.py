"""Compiled Dormand-Prince 5(4) loop for fields of the form ``G @ exp(Yt @ xi)``.

Stiff-ish balanced systems (fast vertex exchange, slow drift along the
steady-state manifold) can need 1e5 accepted steps; the loop is compiled so
that this stays well under a second.
"""

import numpy as np
from numba import njit

# Dormand & Prince (1980) tableau
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
        [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    ]
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

SAFETY = 0.9
FAC_MIN, FAC_MAX = 0.2, 5.0

REACHED_END, CONVERGED, STEP_UNDERFLOW, STEP_LIMIT, OVERFLOW_AT_START = 0, 1, 2, 3, 4


@njit(cache=True)
def _field(G, Yt, xi, out, limit):
    """``out = G @ exp(Yt @ xi)``; False if some exponent argument exceeds ``limit``."""
    m, n = Yt.shape
    for i in range(G.shape[0]):
        out[i] = 0.0
    for k in range(m):
        a = 0.0
        for j in range(n):
            a += Yt[k, j] * xi[j]
        if a > limit:
            return False
        e = np.exp(a)
        for i in range(G.shape[0]):
            out[i] += G[i, k] * e
    return True


@njit(cache=True)
def _tol(rel_tol, y):
    return rel_tol * (1.0 + np.max(np.abs(y)))


@njit(cache=True)
def _initial_step(G, Yt, y0, f0, rel_tol, limit):
    sc0 = _tol(rel_tol, y0)
    d0 = np.max(np.abs(y0)) / sc0
    d1 = np.max(np.abs(f0)) / sc0
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    f1 = np.empty_like(y0)
    if not _field(G, Yt, y0 + h0 * f0, f1, limit):
        return h0 * 1e-2
    d2 = np.max(np.abs(f1 - f0)) / sc0 / h0
    big = max(d1, d2)
    h1 = max(1e-6, h0 * 1e-3) if big <= 1e-15 else (0.01 / big) ** 0.2
    return min(100.0 * h0, h1)


@njit(cache=True)
def integrate_log(G, Yt, y0, t_end, rel_tol, threshold, max_steps, h_min, limit):
    """Adaptive integration of ``dxi/dt = G @ exp(Yt @ xi)`` from ``y0``.

    Stops at ``t_end``, or as soon as an accepted state has ``|dxi/dt|_inf <= threshold``.
    Returns ``(times, states, derivatives, status, t, h)``.
    """
    n = y0.size
    cap = 256
    T = np.empty(cap)
    Y = np.empty((cap, n))
    F = np.empty((cap, n))
    k1 = np.empty(n)
    if not _field(G, Yt, y0, k1, limit):
        return T[:0], Y[:0], F[:0], OVERFLOW_AT_START, 0.0, 0.0
    t = 0.0
    y = y0.copy()
    T[0] = t
    Y[0] = y
    F[0] = k1
    count = 1
    if np.max(np.abs(k1)) <= threshold:
        return T[:1], Y[:1], F[:1], CONVERGED, t, 0.0

    h = min(_initial_step(G, Yt, y, k1, rel_tol, limit), t_end)
    err_prev = 1.0
    rejected = False
    K = np.empty((7, n))
    ytmp = np.empty(n)
    y_new = np.empty(n)
    status = STEP_LIMIT
    for _ in range(max_steps):
        if h < h_min:
            status = STEP_UNDERFLOW
            break
        last = t + h >= t_end
        if last:
            h = t_end - t
        K[0] = k1
        ok = True
        for s in range(1, 7):
            for i in range(n):
                acc = 0.0
                for j in range(s):
                    acc += _A[s, j] * K[j, i]
                ytmp[i] = y[i] + h * acc
            if not _field(G, Yt, ytmp, K[s], limit):
                ok = False
                break
        if not ok:
            h *= FAC_MIN
            rejected = True
            continue
        err = 0.0
        for i in range(n):
            acc5 = 0.0
            acce = 0.0
            for j in range(7):
                acc5 += _B5[j] * K[j, i]
                acce += _E[j] * K[j, i]
            y_new[i] = y[i] + h * acc5
            err = max(err, abs(h * acce))
        ratio = err / max(_tol(rel_tol, y), _tol(rel_tol, y_new))
        if ratio <= 1.0:
            t = t_end if last else t + h
            y[:] = y_new
            k1[:] = K[6]
            if count == cap:
                cap *= 2
                T2 = np.empty(cap)
                Y2 = np.empty((cap, n))
                F2 = np.empty((cap, n))
                T2[:count] = T[:count]
                Y2[:count] = Y[:count]
                F2[:count] = F[:count]
                T, Y, F = T2, Y2, F2
            T[count] = t
            Y[count] = y
            F[count] = k1
            count += 1
            if np.max(np.abs(k1)) <= threshold:
                status = CONVERGED
                break
            if last:
                status = REACHED_END
                break
            ratio = max(ratio, 1e-10)
            fac = SAFETY * ratio ** (-0.7 / 5) * err_prev ** (0.4 / 5)
            fac = min(FAC_MAX, max(FAC_MIN, fac))
            if rejected:
                fac = min(fac, 1.0)
            h *= fac
            err_prev = ratio
            rejected = False
        else:
            h *= max(FAC_MIN, SAFETY * ratio ** (-1 / 5))
            rejected = True
    return T[:count], Y[:count], F[:count], status, t, h
