# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled stepping kernels for the walk and the fiber-loop map.

Same contract as _pykernels; see that module's docstring.  The *_series
functions hold the whole time loop so per-step Python overhead vanishes.
"""

import numpy as np

from libc.math cimport cos, sin

from .errors import BoundaryOverflowError

ctypedef double complex dcomplex

cdef double EDGE_EPS2 = 1e-24
cdef double TWO_PI = 6.283185307179586
cdef double INV_SQRT2 = 0.7071067811865476
cdef dcomplex J = 1j

BACKEND = "c"


cdef inline double _abs2(dcomplex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


def walk_series(dcomplex[::1] up, dcomplex[::1] down, Py_ssize_t steps,
                double cos_theta, double sin_theta,
                dcomplex alpha, dcomplex beta, double chi,
                bint periodic, bint per_component,
                Py_ssize_t n0, double[::1] xi, double[::1] sp):
    """Advance ``steps`` steps in place, recording xi(t) and sp(t)."""
    cdef Py_ssize_t N = up.shape[0]
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if down.shape[0] != N:
        raise ValueError("spinor components differ in length")
    if xi.shape[0] < steps + 1 or sp.shape[0] < steps + 1:
        raise ValueError("record buffers shorter than steps + 1")
    if n0 < 0 or n0 >= N:
        raise ValueError("launch site outside the lattice")

    cu_arr = np.empty(N, dtype=np.complex128)
    cd_arr = np.empty(N, dtype=np.complex128)
    cdef dcomplex[::1] cu = cu_arr
    cdef dcomplex[::1] cd = cd_arr

    cdef double coeff = TWO_PI * chi
    cdef double a2 = alpha.real * alpha.real + alpha.imag * alpha.imag
    cdef Py_ssize_t k, n
    cdef dcomplex uk, dk, ph
    cdef double pu, pd, pn, s2, x

    for k in range(steps):
        # record, dress with the nonlinear phase, apply the coin
        s2 = 0.0
        for n in range(N):
            pu = _abs2(up[n])
            pd = _abs2(down[n])
            pn = pu + pd
            s2 += pn * pn
            if chi != 0.0:
                if per_component:
                    x = coeff * pu
                    uk = up[n] * (cos(x) + J * sin(x))
                    x = coeff * pd
                    dk = down[n] * (cos(x) + J * sin(x))
                else:
                    x = coeff * pn
                    ph = cos(x) + J * sin(x)
                    uk = up[n] * ph
                    dk = down[n] * ph
            else:
                uk = up[n]
                dk = down[n]
            cu[n] = cos_theta * uk + sin_theta * dk
            cd[n] = sin_theta * uk - cos_theta * dk
        xi[k] = 1.0 / s2
        sp[k] = _abs2(up[n0]) + _abs2(down[n0])

        if not periodic:
            if (a2 * _abs2(cu[N - 1]) > EDGE_EPS2
                    or a2 * _abs2(cd[0]) > EDGE_EPS2):
                raise BoundaryOverflowError(
                    "amplitude would cross an open boundary; "
                    "enlarge the lattice"
                )

        # perturbed flip-flop shift (gather form)
        for n in range(N - 1):
            up[n] = beta * cu[n] + alpha * cd[n + 1]
        for n in range(1, N):
            down[n] = beta * cd[n] + alpha * cu[n - 1]
        if periodic:
            up[N - 1] = beta * cu[N - 1] + alpha * cd[0]
            down[0] = beta * cd[0] + alpha * cu[N - 1]
        else:
            up[N - 1] = beta * cu[N - 1]
            down[0] = beta * cd[0]

    s2 = 0.0
    for n in range(N):
        pn = _abs2(up[n]) + _abs2(down[n])
        s2 += pn * pn
    xi[steps] = 1.0 / s2
    sp[steps] = _abs2(up[n0]) + _abs2(down[n0])


def walk_step(up, down, double cos_theta, double sin_theta,
              dcomplex alpha, dcomplex beta, double chi,
              bint periodic, bint per_component):
    """One step of the walk: nonlinear phase, coin, then perturbed shift."""
    new_up = np.array(up, dtype=np.complex128, copy=True)
    new_down = np.array(down, dtype=np.complex128, copy=True)
    scratch = np.empty(2, dtype=np.float64)
    walk_series(new_up, new_down, 1, cos_theta, sin_theta, alpha, beta,
                chi, periodic, per_component, 0, scratch, scratch)
    return new_up, new_down


def loop_series(dcomplex[::1] u, dcomplex[::1] v, Py_ssize_t steps,
                double gamma, Py_ssize_t n0,
                double[::1] xi, double[::1] sp):
    """Advance the loop map ``steps`` round trips in place, recording."""
    cdef Py_ssize_t N = u.shape[0]
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if v.shape[0] != N:
        raise ValueError("loop components differ in length")
    if xi.shape[0] < steps + 1 or sp.shape[0] < steps + 1:
        raise ValueError("record buffers shorter than steps + 1")
    if n0 < 0 or n0 >= N:
        raise ValueError("launch site outside the lattice")

    du_arr = np.empty(N, dtype=np.complex128)
    dv_arr = np.empty(N, dtype=np.complex128)
    cdef dcomplex[::1] du = du_arr
    cdef dcomplex[::1] dv = dv_arr

    cdef Py_ssize_t k, n
    cdef double pu, pv, pn, s2, x

    for k in range(steps):
        s2 = 0.0
        for n in range(N):
            pu = _abs2(u[n])
            pv = _abs2(v[n])
            pn = pu + pv
            s2 += pn * pn
            if gamma != 0.0:
                x = gamma * pu
                du[n] = u[n] * (cos(x) + J * sin(x))
                x = gamma * pv
                dv[n] = v[n] * (cos(x) + J * sin(x))
            else:
                du[n] = u[n]
                dv[n] = v[n]
        xi[k] = 1.0 / s2
        sp[k] = _abs2(u[n0]) + _abs2(v[n0])

        for n in range(N - 1):
            u[n] = (du[n + 1] + J * dv[n + 1]) * INV_SQRT2
        u[N - 1] = (du[0] + J * dv[0]) * INV_SQRT2
        for n in range(1, N):
            v[n] = (dv[n - 1] + J * du[n - 1]) * INV_SQRT2
        v[0] = (dv[N - 1] + J * du[N - 1]) * INV_SQRT2

    s2 = 0.0
    for n in range(N):
        pn = _abs2(u[n]) + _abs2(v[n])
        s2 += pn * pn
    xi[steps] = 1.0 / s2
    sp[steps] = _abs2(u[n0]) + _abs2(v[n0])


def loop_step(u, v, double gamma):
    """One round trip of the two-loop pulse map (always periodic)."""
    new_u = np.array(u, dtype=np.complex128, copy=True)
    new_v = np.array(v, dtype=np.complex128, copy=True)
    scratch = np.empty(2, dtype=np.float64)
    loop_series(new_u, new_v, 1, gamma, 0, scratch, scratch)
    return new_u, new_v
