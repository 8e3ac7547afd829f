"""Walk dynamics: coin, perturbed flip-flop shift, nonlinear phase,
the composed step, evolution drivers, and a dense-matrix oracle.

One step applies, in order: the intensity-dependent phase (from the
probabilities at entry to the step), the coin rotation, and the perturbed
shift.  The production path runs through the selected kernel backend; the
dense oracle rebuilds each operator as an explicit 2N x 2N matrix for
validation on small lattices.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import BoundaryOverflowError, InvalidDimensionError
from .observables import ObservableSeries, SeriesRecorder
from .state import WalkerState, init_symmetric, site_probabilities

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# squared magnitude of an amplitude allowed to fall off an open edge
EDGE_EPS2 = 1e-24

BOUNDARIES = ("periodic", "open")
KERR_MODES = ("per-component", "total")


def build_coin(theta: float) -> np.ndarray:
    """Coin matrix cos(theta) Z + sin(theta) X; theta=pi/4 is Hadamard."""
    c = math.cos(theta)
    s = math.sin(theta)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def reduce_phi(phi: float) -> float:
    """Map phi onto the equivalent angle in [0, pi/2].

    The walk probabilities are periodic in phi with period pi and mirror
    symmetric about pi/2 (alpha -> -alpha is a gauge transformation), so
    every barrier angle has a representative in [0, pi/2].
    """
    x = math.fmod(phi, math.pi)
    if x < 0.0:
        x += math.pi
    if x > HALF_PI:
        x = math.pi - x
    return x


@dataclass(frozen=True)
class ShiftParams:
    """Barrier parametrization: hop amplitude alpha, stay amplitude beta."""

    phi: float
    alpha: complex
    beta: complex

    @classmethod
    def from_phi(cls, phi: float) -> "ShiftParams":
        """alpha = cos(phi), beta = i sin(phi); phi reduced into [0, pi/2]."""
        if not math.isfinite(phi):
            raise InvalidDimensionError(f"barrier angle must be finite, got {phi}")
        if 0.0 <= phi <= HALF_PI:
            r = phi
        else:
            r = reduce_phi(phi)
            warnings.warn(
                f"barrier angle {phi} reduced to the equivalent {r} in [0, pi/2]",
                stacklevel=2,
            )
        return cls(r, complex(math.cos(r)), 1j * math.sin(r))


@dataclass(frozen=True)
class WalkParams:
    theta: float
    shift: ShiftParams
    chi: float
    N: int
    n0: int
    boundary: str = "periodic"
    kerr_mode: str = "per-component"

    def __post_init__(self):
        if self.N < 3:
            raise InvalidDimensionError(f"need at least 3 sites, got N={self.N}")
        if not 0 <= self.n0 < self.N:
            raise InvalidDimensionError(
                f"launch site n0={self.n0} outside [0, {self.N - 1}]"
            )
        if not math.isfinite(self.theta):
            raise InvalidDimensionError(f"coin angle must be finite, got {self.theta}")
        if not (math.isfinite(self.chi) and self.chi >= 0.0):
            raise InvalidDimensionError(
                f"nonlinearity must be finite and >= 0, got {self.chi}"
            )
        if self.boundary not in BOUNDARIES:
            raise InvalidDimensionError(
                f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}"
            )
        if self.kerr_mode not in KERR_MODES:
            raise InvalidDimensionError(
                f"kerr_mode must be one of {KERR_MODES}, got {self.kerr_mode!r}"
            )

    @classmethod
    def from_angles(cls, theta, phi, chi=0.0, N=3, n0=None,
                    boundary="periodic", kerr_mode="per-component") -> "WalkParams":
        if n0 is None:
            n0 = N // 2
        return cls(theta, ShiftParams.from_phi(phi), chi, N, n0,
                   boundary, kerr_mode)


def initial_state(params: WalkParams) -> WalkerState:
    return init_symmetric(params.N, params.n0)


def _abs2(z):
    return z.real * z.real + z.imag * z.imag


def apply_kerr(state: WalkerState, chi: float, kerr_mode: str = "per-component") -> WalkerState:
    """Imprint the intensity-dependent phase e^{i 2 pi chi P} at every site.

    In the default per-component mode each spin component picks up the
    phase of its own intensity |psi_{n,s}|^2 (self-phase modulation).
    Mode "total" phases both components with the summed site probability
    P_n instead.  Intensities are read from the input state before any
    modification.
    """
    if kerr_mode not in KERR_MODES:
        raise InvalidDimensionError(
            f"kerr_mode must be one of {KERR_MODES}, got {kerr_mode!r}"
        )
    u, d = state.up, state.down
    if chi == 0.0:
        return WalkerState(u.copy(), d.copy(), state.t, state.n0)
    if kerr_mode == "per-component":
        new_u = u * np.exp(1j * (TWO_PI * chi) * _abs2(u))
        new_d = d * np.exp(1j * (TWO_PI * chi) * _abs2(d))
    else:
        phase = np.exp(1j * (TWO_PI * chi) * (_abs2(u) + _abs2(d)))
        new_u = u * phase
        new_d = d * phase
    return WalkerState(new_u, new_d, state.t, state.n0)


def apply_coin(state: WalkerState, coin: np.ndarray) -> WalkerState:
    """Rotate the spin components at every site by the 2x2 coin matrix."""
    u, d = state.up, state.down
    new_u = coin[0, 0] * u + coin[0, 1] * d
    new_d = coin[1, 0] * u + coin[1, 1] * d
    return WalkerState(new_u, new_d, state.t, state.n0)


def apply_shift(state: WalkerState, shift: ShiftParams,
                boundary: str = "periodic") -> WalkerState:
    """Perturbed flip-flop shift.

    Each up component hops right with amplitude alpha (flipping to down)
    and stays with amplitude beta; each down component hops left with
    amplitude alpha (flipping to up) and stays with beta.
    """
    if boundary not in BOUNDARIES:
        raise InvalidDimensionError(
            f"boundary must be one of {BOUNDARIES}, got {boundary!r}"
        )
    u, d = state.up, state.down
    alpha, beta = shift.alpha, shift.beta
    if boundary == "open":
        a2 = _abs2(alpha)
        if a2 * _abs2(u[-1]) > EDGE_EPS2 or a2 * _abs2(d[0]) > EDGE_EPS2:
            raise BoundaryOverflowError(
                "amplitude would cross an open boundary; enlarge the lattice"
            )
    new_u = beta * u + alpha * np.roll(d, -1)
    new_d = beta * d + alpha * np.roll(u, 1)
    if boundary == "open":
        new_u[-1] = beta * u[-1]
        new_d[0] = beta * d[0]
    return WalkerState(new_u, new_d, state.t, state.n0)


def step(state: WalkerState, params: WalkParams) -> WalkerState:
    """One full walk step through the kernel backend."""
    if state.sites != params.N:
        raise InvalidDimensionError(
            f"state has {state.sites} sites, params expect {params.N}"
        )
    new_up, new_down = backend.walk_step(
        state.up, state.down,
        math.cos(params.theta), math.sin(params.theta),
        params.shift.alpha, params.shift.beta, params.chi,
        params.boundary == "periodic",
        params.kerr_mode == "per-component",
    )
    return WalkerState(new_up, new_down, state.t + 1, state.n0)


def _check_open_extent(state: WalkerState, params: WalkParams, steps: int) -> None:
    if params.boundary != "open":
        return
    if state.n0 < steps or state.sites - 1 - state.n0 < steps:
        raise InvalidDimensionError(
            f"open boundary needs more than 2*steps+1 sites around n0; "
            f"got N={state.sites}, n0={state.n0}, steps={steps}"
        )


def evolve(state: WalkerState, params: WalkParams, steps: int,
           recorder=None) -> ObservableSeries:
    """Apply ``steps`` steps, recording after every one (t=0 included).

    The input state is left untouched.  The default recorder keeps the
    full xi/sp series and no snapshots.
    """
    if steps < 0:
        raise InvalidDimensionError(f"steps must be >= 0, got {steps}")
    _check_open_extent(state, params, steps)
    if recorder is None:
        recorder = SeriesRecorder(state.n0)
    current = state
    recorder.record(current.t, site_probabilities(current))
    for _ in range(steps):
        current = step(current, params)
        recorder.record(current.t, site_probabilities(current))
    return recorder.series()


def evolve_series(state: WalkerState, params: WalkParams, steps: int) -> ObservableSeries:
    """Fast path: same records as evolve() with a default recorder.

    The whole time loop runs inside the kernel backend.
    """
    if steps < 0:
        raise InvalidDimensionError(f"steps must be >= 0, got {steps}")
    if state.sites != params.N:
        raise InvalidDimensionError(
            f"state has {state.sites} sites, params expect {params.N}"
        )
    _check_open_extent(state, params, steps)
    u = state.up.copy()
    d = state.down.copy()
    xi = np.empty(steps + 1, dtype=float)
    sp = np.empty(steps + 1, dtype=float)
    backend.walk_series(
        u, d, steps,
        math.cos(params.theta), math.sin(params.theta),
        params.shift.alpha, params.shift.beta, params.chi,
        params.boundary == "periodic",
        params.kerr_mode == "per-component",
        state.n0, xi, sp,
    )
    times = state.t + np.arange(steps + 1, dtype=np.int64)
    return ObservableSeries(times, xi, sp, [])


# ---------------------------------------------------------------------------
# dense-matrix oracle

ORACLE_MAX_SITES = 64


def dense_coin_matrix(N: int, theta: float) -> np.ndarray:
    """(C tensor I_N) on the flattened basis [up_0..up_{N-1}, down_0..]."""
    return np.kron(build_coin(theta), np.eye(N, dtype=np.complex128))


def dense_shift_matrix(N: int, shift: ShiftParams,
                       boundary: str = "periodic") -> np.ndarray:
    """Explicit matrix of the perturbed flip-flop shift."""
    if boundary not in BOUNDARIES:
        raise InvalidDimensionError(
            f"boundary must be one of {BOUNDARIES}, got {boundary!r}"
        )
    alpha, beta = shift.alpha, shift.beta
    M = np.zeros((2 * N, 2 * N), dtype=np.complex128)
    periodic = boundary == "periodic"
    for n in range(N):
        M[n, n] = beta
        M[N + n, N + n] = beta
        if n + 1 < N:
            M[N + n + 1, n] = alpha
        elif periodic:
            M[N, n] = alpha
        if n - 1 >= 0:
            M[n - 1, N + n] = alpha
        elif periodic:
            M[N - 1, N + n] = alpha
    return M


def dense_kerr_matrix(state: WalkerState, chi: float,
                      kerr_mode: str = "per-component") -> np.ndarray:
    """Diagonal phase matrix built from the state's current intensities."""
    if kerr_mode not in KERR_MODES:
        raise InvalidDimensionError(
            f"kerr_mode must be one of {KERR_MODES}, got {kerr_mode!r}"
        )
    pu = _abs2(state.up)
    pd = _abs2(state.down)
    if kerr_mode == "per-component":
        weights = np.concatenate([pu, pd])
    else:
        p = pu + pd
        weights = np.concatenate([p, p])
    # scalar libm cos/sin, so the diagonal matches the stepping kernels to
    # the last bit; the vectorized trig paths can differ by an ulp, which a
    # strong nonlinearity amplifies over repeated steps
    scale = TWO_PI * chi
    diag = np.array([complex(math.cos(scale * w), math.sin(scale * w))
                     for w in weights])
    return np.diag(diag)


def _ordered_matvec(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Row-by-row matrix-vector product with index-ordered accumulation.

    BLAS reorders and fuses the sums, which costs an ulp here and there;
    under strong nonlinearity those ulps compound across steps.  Every row
    of the walk operators holds at most two nonzero entries, so summing
    them in index order reproduces the stepping kernels' arithmetic bit
    for bit.
    """
    n = M.shape[0]
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        row = M[i]
        acc = 0.0 + 0.0j
        for j in row.nonzero()[0]:
            acc = acc + row[j] * v[j]
        out[i] = acc
    return out


def dense_step_oracle(state: WalkerState, params: WalkParams) -> WalkerState:
    """Full step as explicit matrix products; N is capped for memory."""
    N = state.sites
    if N > ORACLE_MAX_SITES:
        raise InvalidDimensionError(
            f"dense oracle limited to N <= {ORACLE_MAX_SITES}, got {N}"
        )
    if N != params.N:
        raise InvalidDimensionError(
            f"state has {N} sites, params expect {params.N}"
        )
    K = dense_kerr_matrix(state, params.chi, params.kerr_mode)
    C = dense_coin_matrix(N, params.theta)
    S = dense_shift_matrix(N, params.shift, params.boundary)
    vec = np.concatenate([state.up, state.down])
    out = _ordered_matvec(S, _ordered_matvec(C, _ordered_matvec(K, vec)))
    return WalkerState(out[:N].copy(), out[N:].copy(), state.t + 1, state.n0)
