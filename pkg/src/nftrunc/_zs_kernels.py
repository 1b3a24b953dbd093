"""Transfer-matrix kernels for the scattering system.

The two-component state is propagated in the frame where it tends to the
constant vectors (1,0) and (a,b) at the grid ends; in that frame the
per-cell propagator for a constant sample q over width dt is

    G11 = e^{+j lam dt} (cos(k dt) - j lam sin(k dt)/k)
    G12 = e^{+2j lam tm} q  sin(k dt)/k
    G21 = -e^{-2j lam tm} q* sin(k dt)/k
    G22 = e^{-j lam dt} (cos(k dt) + j lam sin(k dt)/k)

with k = sqrt(lam^2 + |q|^2) and tm the cell midpoint.  This is the exact
matrix exponential of the frozen-coefficient cell; zero cells contribute the
identity exactly, so zero padding never accumulates error.  det G = 1, which
keeps a(lam) a*(lam*) + b(lam) b*(lam*) = 1 for the accumulated product.
"""

from __future__ import annotations

import cmath

import numpy as np

OVERFLOW_BOUND = 1e150

try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _forward_py(q, t_left, dt, lams):
    """Reference pure-numpy forward pass, vectorized over the lam axis."""
    lams = np.asarray(lams, dtype=np.complex128)
    v1 = np.ones_like(lams)
    v2 = np.zeros_like(lams)
    flag = np.zeros(lams.shape, dtype=bool)
    e_inc = np.exp(2j * lams * dt)
    ph = np.exp(2j * lams * (t_left + 0.5 * dt))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i in range(q.size):
            qi = q[i]
            if qi != 0:
                flag |= ~((1e-250 <= np.abs(ph)) & (np.abs(ph) <= 1e250))
                k = np.sqrt(lams * lams + (qi.real * qi.real + qi.imag * qi.imag))
                kdt = k * dt
                c = np.cos(kdt)
                small = np.abs(kdt) < 1e-8
                s = np.where(small, dt * (1.0 - kdt * kdt / 6.0), np.sin(kdt) / np.where(small, 1.0, k))
                e = np.exp(1j * lams * dt)
                g11 = e * (c - 1j * lams * s)
                g22 = (c + 1j * lams * s) / e
                g12 = ph * qi * s
                g21 = -np.conj(qi) * s / np.where(ph == 0, 1.0, ph)
                v1, v2 = g11 * v1 + g12 * v2, g21 * v1 + g22 * v2
                flag |= ~((np.abs(v1) <= OVERFLOW_BOUND) & (np.abs(v2) <= OVERFLOW_BOUND))
            ph = ph * e_inc
    return v1, v2, flag


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _forward_nb(q, t_left, dt, lams):  # pragma: no cover - compiled
        n = q.size
        m = lams.size
        out_a = np.empty(m, dtype=np.complex128)
        out_b = np.empty(m, dtype=np.complex128)
        flag = np.zeros(m, dtype=np.bool_)
        for j in prange(m):
            lam = lams[j]
            v1 = 1.0 + 0.0j
            v2 = 0.0 + 0.0j
            e_inc = cmath.exp(2j * lam * dt)
            ph = cmath.exp(2j * lam * (t_left + 0.5 * dt))
            e = cmath.exp(1j * lam * dt)
            einv = 1.0 / e
            bad = False
            for i in range(n):
                qi = q[i]
                if qi != 0:
                    aph = abs(ph)
                    if not (1e-250 <= aph <= 1e250):
                        bad = True
                        break
                    k = cmath.sqrt(lam * lam + (qi.real * qi.real + qi.imag * qi.imag))
                    kdt = k * dt
                    c = cmath.cos(kdt)
                    if abs(kdt) < 1e-8:
                        s = dt * (1.0 - kdt * kdt / 6.0)
                    else:
                        s = cmath.sin(kdt) / k
                    g11 = e * (c - 1j * lam * s)
                    g22 = einv * (c + 1j * lam * s)
                    g12 = ph * qi * s
                    g21 = -(qi.real - 1j * qi.imag) * s / ph
                    nv1 = g11 * v1 + g12 * v2
                    nv2 = g21 * v1 + g22 * v2
                    v1 = nv1
                    v2 = nv2
                    if not (abs(v1) <= OVERFLOW_BOUND and abs(v2) <= OVERFLOW_BOUND):
                        bad = True
                        break
                ph = ph * e_inc
            out_a[j] = v1
            out_b[j] = v2
            flag[j] = bad
        return out_a, out_b, flag

    @njit(cache=True, parallel=True)
    def _backward_nb(q, t_left, dt, lams, i_split):  # pragma: no cover - compiled
        # Accumulate the inverse of the right-half propagator applied to the
        # canonical terminal states: columns (wbar, w) of P_right^{-1}.
        n = q.size
        m = lams.size
        wb1 = np.empty(m, dtype=np.complex128)
        wb2 = np.empty(m, dtype=np.complex128)
        w1 = np.empty(m, dtype=np.complex128)
        w2 = np.empty(m, dtype=np.complex128)
        flag = np.zeros(m, dtype=np.bool_)
        for j in prange(m):
            lam = lams[j]
            a1 = 1.0 + 0.0j
            a2 = 0.0 + 0.0j
            b1 = 0.0 + 0.0j
            b2 = 1.0 + 0.0j
            e_inc = cmath.exp(-2j * lam * dt)
            e = cmath.exp(1j * lam * dt)
            einv = 1.0 / e
            ph = cmath.exp(2j * lam * (t_left + (n - 1 + 0.5) * dt))
            bad = False
            for i in range(n - 1, i_split - 1, -1):
                qi = q[i]
                if qi != 0:
                    aph = abs(ph)
                    if not (1e-250 <= aph <= 1e250):
                        bad = True
                        break
                    k = cmath.sqrt(lam * lam + (qi.real * qi.real + qi.imag * qi.imag))
                    kdt = k * dt
                    c = cmath.cos(kdt)
                    if abs(kdt) < 1e-8:
                        s = dt * (1.0 - kdt * kdt / 6.0)
                    else:
                        s = cmath.sin(kdt) / k
                    g11 = e * (c - 1j * lam * s)
                    g22 = einv * (c + 1j * lam * s)
                    g12 = ph * qi * s
                    g21 = -(qi.real - 1j * qi.imag) * s / ph
                    # inverse cell matrix (det G = 1)
                    na1 = g22 * a1 - g12 * a2
                    na2 = -g21 * a1 + g11 * a2
                    nb1 = g22 * b1 - g12 * b2
                    nb2 = -g21 * b1 + g11 * b2
                    a1, a2, b1, b2 = na1, na2, nb1, nb2
                    if not (
                        abs(a1) <= OVERFLOW_BOUND
                        and abs(a2) <= OVERFLOW_BOUND
                        and abs(b1) <= OVERFLOW_BOUND
                        and abs(b2) <= OVERFLOW_BOUND
                    ):
                        bad = True
                        break
                ph = ph * e_inc
            wb1[j] = a1
            wb2[j] = a2
            w1[j] = b1
            w2[j] = b2
            flag[j] = bad
        return wb1, wb2, w1, w2, flag


def _backward_py(q, t_left, dt, lams, i_split):
    lams = np.asarray(lams, dtype=np.complex128)
    a1 = np.ones_like(lams)
    a2 = np.zeros_like(lams)
    b1 = np.zeros_like(lams)
    b2 = np.ones_like(lams)
    flag = np.zeros(lams.shape, dtype=bool)
    e_inc = np.exp(-2j * lams * dt)
    e = np.exp(1j * lams * dt)
    ph = np.exp(2j * lams * (t_left + (q.size - 1 + 0.5) * dt))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i in range(q.size - 1, i_split - 1, -1):
            qi = q[i]
            if qi != 0:
                flag |= ~((1e-250 <= np.abs(ph)) & (np.abs(ph) <= 1e250))
                k = np.sqrt(lams * lams + (qi.real * qi.real + qi.imag * qi.imag))
                kdt = k * dt
                c = np.cos(kdt)
                small = np.abs(kdt) < 1e-8
                s = np.where(small, dt * (1.0 - kdt * kdt / 6.0), np.sin(kdt) / np.where(small, 1.0, k))
                g11 = e * (c - 1j * lams * s)
                g22 = (c + 1j * lams * s) / e
                g12 = ph * qi * s
                g21 = -np.conj(qi) * s / np.where(ph == 0, 1.0, ph)
                a1, a2 = g22 * a1 - g12 * a2, -g21 * a1 + g11 * a2
                b1, b2 = g22 * b1 - g12 * b2, -g21 * b1 + g11 * b2
                flag |= ~(
                    (np.abs(a1) <= OVERFLOW_BOUND)
                    & (np.abs(a2) <= OVERFLOW_BOUND)
                    & (np.abs(b1) <= OVERFLOW_BOUND)
                    & (np.abs(b2) <= OVERFLOW_BOUND)
                )
            ph = ph * e_inc
    return a1, a2, b1, b2, flag


def forward_pass(q, t_left, dt, lams):
    """(v1, v2, overflow) at the right grid edge from the (1,0) left state."""
    q = np.ascontiguousarray(q, dtype=np.complex128)
    lams = np.ascontiguousarray(np.atleast_1d(lams), dtype=np.complex128)
    if HAVE_NUMBA:
        return _forward_nb(q, float(t_left), float(dt), lams)
    return _forward_py(q, float(t_left), float(dt), lams)


def split_pass(q, t_left, dt, lams, i_split):
    """Jost pair via forward/backward passes meeting at cell edge i_split.

    With v the forward state and (wbar, w) the backward-propagated terminal
    states, determinant pairing gives a = v1 w2 - v2 w1 and
    b = v2 wbar1 - v1 wbar2.
    """
    q = np.ascontiguousarray(q, dtype=np.complex128)
    lams = np.ascontiguousarray(np.atleast_1d(lams), dtype=np.complex128)
    qf = q[:i_split]
    if HAVE_NUMBA:
        v1, v2, f1 = _forward_nb(qf, float(t_left), float(dt), lams)
        wb1, wb2, w1, w2, f2 = _backward_nb(q, float(t_left), float(dt), lams, int(i_split))
    else:
        v1, v2, f1 = _forward_py(qf, float(t_left), float(dt), lams)
        wb1, wb2, w1, w2, f2 = _backward_py(q, float(t_left), float(dt), lams, int(i_split))
    a = v1 * w2 - v2 * w1
    b = v2 * wb1 - v1 * wb2
    return a, b, f1 | f2
