"""Walker state on a one-dimensional lattice.

The state of the walker is a two-component spinor amplitude over N sites,
stored as two complex arrays ``up`` and ``down``.  ``n0`` marks the launch
site and ``t`` counts completed steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import ensure_parent, fmt_float
from .errors import InvalidDimensionError


@dataclass
class WalkerState:
    up: np.ndarray
    down: np.ndarray
    t: int
    n0: int

    @property
    def sites(self) -> int:
        return self.up.shape[0]

    def copy(self) -> "WalkerState":
        return WalkerState(self.up.copy(), self.down.copy(), self.t, self.n0)


def init_symmetric(N: int, n0: int | None = None) -> WalkerState:
    """Launch state (|up> + i|down>)/sqrt(2) concentrated on site n0.

    The equal-weight quadrature superposition spreads symmetrically to the
    left and right under the flip-flop walk.  n0 defaults to the central
    site N // 2.
    """
    if N < 3:
        raise InvalidDimensionError(f"need at least 3 sites, got N={N}")
    if n0 is None:
        n0 = N // 2
    if not 0 <= n0 < N:
        raise InvalidDimensionError(f"launch site n0={n0} outside [0, {N - 1}]")
    up = np.zeros(N, dtype=np.complex128)
    down = np.zeros(N, dtype=np.complex128)
    amp = 1.0 / np.sqrt(2.0)
    up[n0] = amp
    down[n0] = 1j * amp
    return WalkerState(up, down, 0, n0)


def site_probabilities(state: WalkerState) -> np.ndarray:
    """Per-site probability p_n = |up_n|^2 + |down_n|^2."""
    u = state.up
    d = state.down
    return u.real * u.real + u.imag * u.imag + d.real * d.real + d.imag * d.imag


def total_probability(state: WalkerState) -> float:
    return float(np.sum(site_probabilities(state)))


def write_snapshot_csv(path: str, state: WalkerState) -> None:
    """Write per-site probabilities as rows of n,p_up,p_down,p_total."""
    u = state.up
    d = state.down
    pu = u.real * u.real + u.imag * u.imag
    pd = d.real * d.real + d.imag * d.imag
    ensure_parent(path)
    with open(path, "w") as fh:
        fh.write("n,p_up,p_down,p_total\n")
        for n in range(state.sites):
            fh.write(
                f"{n},{fmt_float(pu[n])},{fmt_float(pd[n])},{fmt_float(pu[n] + pd[n])}\n"
            )
