"""Parameter sweeps, regime classification, and critical-barrier detection.

Grid cells are independent simulations; the sweep farm runs them through a
process pool and assembles results by cell coordinates, so output is
identical for any worker count.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from ._util import ensure_parent, fmt_float
from .errors import NoTransitionError
from .evolution import WalkParams, evolve_series, initial_state, step
from .observables import long_time_averages, relative_std
from .state import init_symmetric

HALF_PI = 0.5 * math.pi

# regime labels
DELOCALIZED = "delocalized"
SOLITON = "soliton"
SELF_TRAPPED = "self-trapped"
CHAOTIC = "chaotic-like"

# classification defaults: survival plateau cutoff, soliton size cap,
# and the xi-fluctuation level separating steady from erratic tails
SP_TRAP_THRESHOLD = 0.1
XI_SOLITON_MAX = 20.0
XI_FLUCT_MAX = 0.25


class SweepCellError(RuntimeError):
    """A grid cell failed; the message carries the cell coordinates."""


def default_sites(steps: int) -> int:
    """Lattice size rule 2*steps + 3: the wavefront can never wrap."""
    return 2 * steps + 3


@dataclass(frozen=True)
class SweepSpec:
    theta: float
    chi_range: tuple  # (min, max, count)
    phi_range: tuple  # (min, max, count)
    steps: int
    window: int = 200
    sites: int | None = None
    boundary: str = "periodic"
    kerr_mode: str = "per-component"

    def __post_init__(self):
        for name, rng, lo, hi in (
            ("chi", self.chi_range, 0.0, 1.0),
            ("phi", self.phi_range, 0.0, HALF_PI),
        ):
            rmin, rmax, count = rng
            if count < 1:
                raise ValueError(f"{name} range needs count >= 1, got {count}")
            if not (lo <= rmin <= rmax <= hi + 1e-12):
                raise ValueError(
                    f"{name} range [{rmin}, {rmax}] outside [{lo}, {hi}]"
                )
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if self.window > self.steps + 1:
            raise ValueError(
                f"window {self.window} exceeds recorded length {self.steps + 1}"
            )

    @property
    def chis(self) -> np.ndarray:
        rmin, rmax, count = self.chi_range
        return np.linspace(rmin, rmax, int(count))

    @property
    def phis(self) -> np.ndarray:
        rmin, rmax, count = self.phi_range
        return np.linspace(rmin, rmax, int(count))


@dataclass
class PhaseGrid:
    chis: np.ndarray
    phis: np.ndarray
    xi_bar: np.ndarray   # shape (len(chis), len(phis))
    sp_bar: np.ndarray
    regimes: list        # nested [i][j] -> label


@dataclass(frozen=True)
class CriticalCurve:
    points: list  # (chi, phi_c) pairs, chi strictly increasing
    threshold: float


def _tail_stats(theta, chi, phi, steps, window, sites, boundary, kerr_mode):
    """Evolve one parameter point and return (xi_bar, sp_bar, xi_tail)."""
    N = default_sites(steps) if sites is None else sites
    params = WalkParams.from_angles(theta, phi, chi, N=N,
                                    boundary=boundary, kerr_mode=kerr_mode)
    series = evolve_series(initial_state(params), params, steps)
    avg = long_time_averages(series, window)
    return avg.xi_bar, avg.sp_bar, series.xi[-window:]


def run_point(theta, chi, phi, steps, window=200, sites=None,
              boundary="periodic", kerr_mode="per-component"):
    """Long-time averages (xi_bar, sp_bar) for a single parameter point."""
    xi_bar, sp_bar, _ = _tail_stats(theta, chi, phi, steps, window,
                                    sites, boundary, kerr_mode)
    return xi_bar, sp_bar


def classify_regime(xi_bar, sp_bar, xi_tail,
                    sp_threshold=SP_TRAP_THRESHOLD,
                    xi_soliton=XI_SOLITON_MAX,
                    fluct=XI_FLUCT_MAX) -> str:
    """Label one cell of the phase diagram.

    A survival plateau marks self-trapping; otherwise a small and steady
    participation tail marks a soliton, an erratic tail the chaotic-like
    regime, and anything else is delocalized.
    """
    if not (math.isfinite(xi_bar) and math.isfinite(sp_bar)):
        raise ValueError(f"non-finite averages: xi_bar={xi_bar}, sp_bar={sp_bar}")
    if sp_bar >= sp_threshold:
        return SELF_TRAPPED
    rel = relative_std(xi_tail)
    if xi_bar <= xi_soliton and rel <= fluct:
        return SOLITON
    if rel > fluct:
        return CHAOTIC
    return DELOCALIZED


def _sweep_cell(task):
    (i, j, theta, chi, phi, steps, window, sites, boundary, kerr_mode) = task
    try:
        xi_bar, sp_bar, xi_tail = _tail_stats(theta, chi, phi, steps, window,
                                              sites, boundary, kerr_mode)
        regime = classify_regime(xi_bar, sp_bar, xi_tail)
    except Exception as exc:
        raise SweepCellError(
            f"sweep cell chi={chi!r}, phi={phi!r} failed: {exc}"
        ) from exc
    return i, j, xi_bar, sp_bar, regime


def sweep(spec: SweepSpec, workers: int = 1) -> PhaseGrid:
    """Evaluate the (chi, phi) grid; row-major in chi then phi.

    Results are assembled by cell index, so the grid is identical for any
    worker count.
    """
    chis = spec.chis
    phis = spec.phis
    tasks = [
        (i, j, spec.theta, float(chi), float(phi), spec.steps, spec.window,
         spec.sites, spec.boundary, spec.kerr_mode)
        for i, chi in enumerate(chis)
        for j, phi in enumerate(phis)
    ]
    if workers is None:
        workers = 1
    if workers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * workers))
        with Pool(processes=workers) as pool:
            results = pool.map(_sweep_cell, tasks, chunksize=chunk)
    else:
        results = [_sweep_cell(t) for t in tasks]

    xi_bar = np.empty((len(chis), len(phis)), dtype=float)
    sp_bar = np.empty((len(chis), len(phis)), dtype=float)
    regimes = [[None] * len(phis) for _ in range(len(chis))]
    for i, j, xb, sb, regime in results:
        xi_bar[i, j] = xb
        sp_bar[i, j] = sb
        regimes[i][j] = regime
    return PhaseGrid(chis, phis, xi_bar, sp_bar, regimes)


def find_phi_c(theta, chi, steps=2000, threshold=SP_TRAP_THRESHOLD,
               tol=1e-3, window=200, sites=None, kerr_mode="per-component",
               prescan=17, workers: int = 1) -> float:
    """Critical barrier angle where sp_bar(phi) first crosses the threshold.

    A coarse prescan over [0, pi/2] brackets the crossing, then bisection
    narrows the bracket below tol; the bracket midpoint is returned.  When
    the predicate never rises inside the interval (chi=0 being the chief
    case: survival jumps only at the trapped endpoint phi=pi/2), a
    no-transition error is raised.  Multiple crossings trigger a warning
    and the smallest one is refined.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if prescan < 3:
        raise ValueError(f"prescan needs at least 3 points, got {prescan}")
    grid = np.linspace(0.0, HALF_PI, prescan)

    def trapped(phi: float) -> bool:
        _, sp_bar = run_point(theta, chi, float(phi), steps, window,
                              sites=sites, kerr_mode=kerr_mode)
        return sp_bar >= threshold

    if workers is not None and workers > 1:
        tasks = [
            (0, k, theta, chi, float(phi), steps, window, sites,
             "periodic", kerr_mode)
            for k, phi in enumerate(grid)
        ]
        with Pool(processes=workers) as pool:
            cells = pool.map(_sweep_cell, tasks)
        flags = [False] * prescan
        for _, k, _, sb, _ in cells:
            flags[k] = sb >= threshold
    else:
        flags = [trapped(phi) for phi in grid]

    if flags[0]:
        raise NoTransitionError(
            f"already trapped at phi=0 for chi={chi}; no crossing to find"
        )
    rises = [k for k in range(prescan - 1) if not flags[k] and flags[k + 1]]
    if not rises:
        raise NoTransitionError(
            f"survival average never reaches {threshold} on [0, pi/2] "
            f"for chi={chi}"
        )
    if len(rises) > 1:
        warnings.warn(
            f"sp_bar crosses the threshold {len(rises)} times over [0, pi/2]; "
            "refining the smallest crossing",
            RuntimeWarning,
            stacklevel=2,
        )
    k = rises[0]
    if k == prescan - 2:
        raise NoTransitionError(
            "survival rises above the threshold only in the final prescan "
            "cell next to pi/2; indistinguishable from the trivial trapped "
            "endpoint (no transition inside the interval)"
        )
    lo, hi = float(grid[k]), float(grid[k + 1])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if trapped(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def critical_curve(theta, chis, steps=2000, threshold=SP_TRAP_THRESHOLD,
                   tol=1e-3, window=200, sites=None, kerr_mode="per-component",
                   workers: int = 1) -> CriticalCurve:
    """phi_c over an increasing sequence of chi values."""
    chis = [float(c) for c in chis]
    if any(b <= a for a, b in zip(chis, chis[1:])):
        raise ValueError("chi values must be strictly increasing")
    points = []
    for chi in chis:
        phi_c = find_phi_c(theta, chi, steps=steps, threshold=threshold,
                           tol=tol, window=window, sites=sites,
                           kerr_mode=kerr_mode, workers=workers)
        points.append((chi, phi_c))
    return CriticalCurve(points, threshold)


def divergence_probe(theta, chi, phi, steps, eps=1e-8, sites=None,
                     boundary="periodic", kerr_mode="per-component") -> np.ndarray:
    """L2 distance between a trajectory and an eps-perturbed twin.

    The twin starts with ``eps`` added to the up amplitude at n0 (no
    renormalization).  In the linear walk the distance is conserved
    exactly; rapid growth flags the chaotic-like regime.  Returns the
    distance after each step, length steps+1.
    """
    N = default_sites(steps) if sites is None else sites
    params = WalkParams.from_angles(theta, phi, chi, N=N,
                                    boundary=boundary, kerr_mode=kerr_mode)
    a = init_symmetric(N, params.n0)
    b = init_symmetric(N, params.n0)
    b.up[params.n0] += eps

    out = np.empty(steps + 1, dtype=float)

    def dist(x, y):
        du = x.up - y.up
        dd = x.down - y.down
        return math.sqrt(float(
            np.sum(du.real**2 + du.imag**2 + dd.real**2 + dd.imag**2)
        ))

    out[0] = dist(a, b)
    for k in range(1, steps + 1):
        a = step(a, params)
        b = step(b, params)
        out[k] = dist(a, b)
    return out


def write_grid_csv(path: str, grid: PhaseGrid) -> None:
    """Write the phase grid as rows of chi,phi,xi_bar,sp_bar,regime."""
    ensure_parent(path)
    with open(path, "w") as fh:
        fh.write("chi,phi,xi_bar,sp_bar,regime\n")
        for i, chi in enumerate(grid.chis):
            for j, phi in enumerate(grid.phis):
                fh.write(
                    f"{fmt_float(chi)},{fmt_float(phi)},"
                    f"{fmt_float(grid.xi_bar[i, j])},"
                    f"{fmt_float(grid.sp_bar[i, j])},"
                    f"{grid.regimes[i][j]}\n"
                )


def write_curve_csv(path: str, curve: CriticalCurve) -> None:
    """Write the critical curve as rows of chi,phi_c."""
    ensure_parent(path)
    with open(path, "w") as fh:
        fh.write("chi,phi_c\n")
        for chi, phi_c in curve.points:
            fh.write(f"{fmt_float(chi)},{fmt_float(phi_c)}\n")
