"""Pure numpy stepping kernels.

Fallback used when the compiled extension is not available.  The compiled
module exposes the same four functions with identical semantics; parity is
covered by the backend test suite.

Shared conventions:

* ``walk_step`` and ``loop_step`` are pure: inputs untouched, fresh arrays out.
* ``walk_series`` / ``loop_series`` advance the passed arrays in place for
  ``steps`` steps and fill ``xi[k]`` / ``sp[k]`` with the participation ratio
  and launch-site probability of the state after k steps, k = 0 .. steps.
* The nonlinear phase at each step is computed from the state at the start
  of that step, before the coin is applied.
"""

from __future__ import annotations

import numpy as np

from .errors import BoundaryOverflowError

BACKEND = "python"

# Squared magnitude of an amplitude that may be dropped at an open edge.
EDGE_EPS2 = 1e-24
TWO_PI = 2.0 * np.pi
INV_SQRT2 = 0.7071067811865476


def _abs2(z):
    return z.real * z.real + z.imag * z.imag


def _cis_mul(z, x):
    """z * (cos x + i sin x), real ops rounded separately.

    A plain complex multiply would go through numpy's fused
    multiply-add kernels and round differently (by one ulp) from the
    compiled extension's textbook arithmetic; spelling out the four
    real products keeps the two backends bit-identical even on
    nonlinear trajectories, where a single ulp grows exponentially.
    """
    c = np.cos(x)
    s = np.sin(x)
    out = np.empty_like(z)
    out.real = z.real * c - z.imag * s
    out.imag = z.real * s + z.imag * c
    return out


def walk_step(up, down, cos_theta, sin_theta, alpha, beta, chi,
              periodic, per_component):
    """One step of the walk: nonlinear phase, coin, then perturbed shift."""
    if chi != 0.0:
        if per_component:
            uk = _cis_mul(up, (TWO_PI * chi) * _abs2(up))
            dk = _cis_mul(down, (TWO_PI * chi) * _abs2(down))
        else:
            intensity = _abs2(up) + _abs2(down)
            uk = _cis_mul(up, (TWO_PI * chi) * intensity)
            dk = _cis_mul(down, (TWO_PI * chi) * intensity)
    else:
        uk = up
        dk = down

    cu = cos_theta * uk + sin_theta * dk
    cd = sin_theta * uk - cos_theta * dk

    a2 = alpha.real * alpha.real + alpha.imag * alpha.imag
    if not periodic:
        if a2 * _abs2(cu[-1]) > EDGE_EPS2 or a2 * _abs2(cd[0]) > EDGE_EPS2:
            raise BoundaryOverflowError(
                "amplitude would cross an open boundary; enlarge the lattice"
            )

    new_up = beta * cu + alpha * np.roll(cd, -1)
    new_down = beta * cd + alpha * np.roll(cu, 1)
    if not periodic:
        new_up[-1] = beta * cu[-1]
        new_down[0] = beta * cd[0]
    return new_up, new_down


def _ipr(p):
    """Sum of p**2 accumulated left to right.

    np.sum uses pairwise summation, which rounds differently from the
    compiled kernel's plain running total; cumsum is sequential by
    construction and lands on the same bits.
    """
    return float(np.cumsum(p * p)[-1])


def walk_series(up, down, steps, cos_theta, sin_theta, alpha, beta, chi,
                periodic, per_component, n0, xi, sp):
    """Advance ``steps`` steps in place, recording xi(t) and sp(t)."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if len(xi) < steps + 1 or len(sp) < steps + 1:
        raise ValueError("record buffers shorter than steps + 1")
    u, d = up, down
    for k in range(steps):
        p = _abs2(u) + _abs2(d)
        xi[k] = 1.0 / _ipr(p)
        sp[k] = p[n0]
        u, d = walk_step(u, d, cos_theta, sin_theta, alpha, beta, chi,
                         periodic, per_component)
    p = _abs2(u) + _abs2(d)
    xi[steps] = 1.0 / _ipr(p)
    sp[steps] = p[n0]
    up[:] = u
    down[:] = d


def loop_step(u, v, gamma):
    """One round trip of the two-loop pulse map (always periodic)."""
    if gamma != 0.0:
        uu = _cis_mul(u, gamma * _abs2(u))
        vv = _cis_mul(v, gamma * _abs2(v))
    else:
        uu = u
        vv = v
    new_u = (np.roll(uu, -1) + 1j * np.roll(vv, -1)) * INV_SQRT2
    new_v = (np.roll(vv, 1) + 1j * np.roll(uu, 1)) * INV_SQRT2
    return new_u, new_v


def loop_series(u, v, steps, gamma, n0, xi, sp):
    """Advance the loop map ``steps`` round trips in place, recording."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if len(xi) < steps + 1 or len(sp) < steps + 1:
        raise ValueError("record buffers shorter than steps + 1")
    uu, vv = u, v
    for k in range(steps):
        p = _abs2(uu) + _abs2(vv)
        xi[k] = 1.0 / _ipr(p)
        sp[k] = p[n0]
        uu, vv = loop_step(uu, vv, gamma)
    p = _abs2(uu) + _abs2(vv)
    xi[steps] = 1.0 / _ipr(p)
    sp[steps] = p[n0]
    u[:] = uu
    v[:] = vv
