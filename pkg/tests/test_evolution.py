import warnings

import numpy as np
import pytest

from nlqw import (
    BoundaryOverflowError,
    InvalidDimensionError,
    ShiftParams,
    WalkParams,
    apply_coin,
    apply_kerr,
    apply_shift,
    build_coin,
    dense_step_oracle,
    evolve,
    evolve_series,
    initial_state,
    init_symmetric,
    site_probabilities,
    step,
    total_probability,
)
from nlqw.evolution import (
    dense_coin_matrix,
    dense_kerr_matrix,
    dense_shift_matrix,
    reduce_phi,
)

HADAMARD = np.pi / 4

THETAS = [0.0, np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2]
PHIS = [0.0, np.pi / 8, np.pi / 4, 3 * np.pi / 8]
CHIS = [0.0, 0.2, 0.4, 0.9]


def test_build_coin_hadamard():
    c = build_coin(HADAMARD)
    s = 1.0 / np.sqrt(2.0)
    assert np.allclose(c, [[s, s], [s, -s]], atol=1e-15)


def test_hadamard_coin_on_initial_state():
    st = init_symmetric(5)
    out = apply_coin(st, build_coin(HADAMARD))
    assert out.up[2] == pytest.approx((1 + 1j) / 2, abs=1e-15)
    assert out.down[2] == pytest.approx((1 - 1j) / 2, abs=1e-15)


def test_single_step_splits_half_half():
    params = WalkParams.from_angles(HADAMARD, 0.0, 0.0, N=9)
    st = step(initial_state(params), params)
    p = site_probabilities(st)
    assert p[params.n0 - 1] == pytest.approx(0.5, abs=1e-15)
    assert p[params.n0 + 1] == pytest.approx(0.5, abs=1e-15)
    assert st.t == 1


@pytest.mark.parametrize("theta", THETAS)
def test_coin_matrix_unitary(theta):
    c = build_coin(theta)
    assert np.max(np.abs(c.conj().T @ c - np.eye(2))) < 1e-12


def test_operator_matrices_unitary_random_draws():
    rng = np.random.default_rng(2024)
    N = 12
    eye = np.eye(2 * N)
    for _ in range(100):
        theta = rng.uniform(0, np.pi)
        phi = rng.uniform(0, np.pi / 2)
        st = init_symmetric(N)
        raw = rng.standard_normal(2 * N) + 1j * rng.standard_normal(2 * N)
        raw /= np.linalg.norm(raw)
        st.up[:] = raw[:N]
        st.down[:] = raw[N:]
        C = dense_coin_matrix(N, theta)
        S = dense_shift_matrix(N, ShiftParams.from_phi(phi))
        K = dense_kerr_matrix(st, rng.uniform(0, 1.2))
        for M in (C, S, K):
            assert np.max(np.abs(M.conj().T @ M - eye)) < 1e-12


def test_kerr_matrix_is_diagonal_phase():
    st = init_symmetric(8)
    K = dense_kerr_matrix(st, 0.7)
    off = K - np.diag(np.diag(K))
    assert np.max(np.abs(off)) == 0.0
    assert np.max(np.abs(np.abs(np.diag(K)) - 1.0)) < 1e-14


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("phi", PHIS)
@pytest.mark.parametrize("chi", CHIS)
def test_oracle_matches_step_over_grid(theta, phi, chi):
    """Ten steps on a small ring, dense matrices against the kernel."""
    params = WalkParams.from_angles(theta, phi, chi, N=16)
    st = initial_state(params)
    ref = st.copy()
    for _ in range(10):
        st = step(st, params)
        ref = dense_step_oracle(ref, params)
        assert np.max(np.abs(st.up - ref.up)) < 1e-12
        assert np.max(np.abs(st.down - ref.down)) < 1e-12


@pytest.mark.parametrize("kerr_mode", ["per-component", "total"])
def test_oracle_matches_step_both_kerr_modes(kerr_mode):
    params = WalkParams.from_angles(0.9, 0.35, 0.6, N=16, kerr_mode=kerr_mode)
    st = initial_state(params)
    ref = st.copy()
    for _ in range(10):
        st = step(st, params)
        ref = dense_step_oracle(ref, params)
    assert np.max(np.abs(st.up - ref.up)) < 1e-12


def test_oracle_rejects_large_lattice():
    params = WalkParams.from_angles(HADAMARD, 0.0, 0.0, N=65)
    with pytest.raises(InvalidDimensionError):
        dense_step_oracle(initial_state(params), params)


def test_step_is_kerr_coin_shift_composition():
    params = WalkParams.from_angles(0.8, 0.4, 0.5, N=21)
    st = initial_state(params)
    for _ in range(6):
        st = step(st, params)
    manual = initial_state(params)
    coin = build_coin(params.theta)
    for _ in range(6):
        manual = apply_kerr(manual, params.chi, params.kerr_mode)
        manual = apply_coin(manual, coin)
        manual = apply_shift(manual, params.shift, params.boundary)
    assert np.max(np.abs(st.up - manual.up)) < 1e-12
    assert np.max(np.abs(st.down - manual.down)) < 1e-12


def test_evolve_series_matches_evolve():
    params = WalkParams.from_angles(HADAMARD, 0.3, 0.25, N=203)
    s1 = evolve(initial_state(params), params, 80)
    s2 = evolve_series(initial_state(params), params, 80)
    assert np.array_equal(s1.times, s2.times)
    assert np.max(np.abs(s1.xi - s2.xi)) < 1e-9
    assert np.max(np.abs(s1.sp - s2.sp)) < 1e-12


@pytest.mark.parametrize("phi,chi", [(0.0, 0.0), (0.4, 0.0), (0.0, 0.3), (0.5, 0.7)])
def test_left_right_symmetry(phi, chi):
    # symmetric initial condition keeps the distribution mirror symmetric
    params = WalkParams.from_angles(HADAMARD, phi, chi, N=403)
    series = evolve(initial_state(params), params, 0)
    st = initial_state(params)
    for _ in range(120):
        st = step(st, params)
        p = site_probabilities(st)
        k = np.arange(1, 120 + 2)
        assert np.max(np.abs(p[st.n0 + k] - p[st.n0 - k])) < 1e-10
    assert series.sp[0] == pytest.approx(1.0, abs=1e-15)


def test_global_phase_invariance_linear():
    params = WalkParams.from_angles(HADAMARD, 0.25, 0.0, N=103)
    a = initial_state(params)
    b = a.copy()
    b.up *= np.exp(1j * 0.77)
    b.down *= np.exp(1j * 0.77)
    for _ in range(40):
        a = step(a, params)
        b = step(b, params)
    pa = site_probabilities(a)
    pb = site_probabilities(b)
    assert np.max(np.abs(pa - pb)) < 1e-12


def test_pi_half_barrier_freezes_distribution():
    params = WalkParams.from_angles(0.6, np.pi / 2, 0.45, N=31)
    st = initial_state(params)
    p0 = site_probabilities(st)
    for _ in range(50):
        st = step(st, params)
        assert np.max(np.abs(site_probabilities(st) - p0)) < 1e-12


def test_x_coin_ballistic_deltas():
    params = WalkParams.from_angles(np.pi / 2, 0.0, 0.0, N=41)
    st = initial_state(params)
    for t in range(1, 16):
        st = step(st, params)
        p = site_probabilities(st)
        assert p[st.n0 - t] == pytest.approx(0.5, abs=1e-14)
        assert p[st.n0 + t] == pytest.approx(0.5, abs=1e-14)


def test_norm_conserved_long_run():
    params = WalkParams.from_angles(HADAMARD, 0.3, 0.6, N=503)
    st = initial_state(params)
    for _ in range(200):
        st = step(st, params)
    assert total_probability(st) == pytest.approx(1.0, abs=1e-12)


def test_reduce_phi_symmetry_points():
    assert reduce_phi(0.0) == 0.0
    assert reduce_phi(np.pi / 2) == pytest.approx(np.pi / 2)
    assert reduce_phi(np.pi - 0.3) == pytest.approx(0.3, abs=1e-15)
    assert reduce_phi(-0.4) == pytest.approx(0.4, abs=1e-15)


def test_out_of_range_phi_warns_and_matches_reduced():
    with pytest.warns(UserWarning):
        shifted = ShiftParams.from_phi(np.pi - 0.3)
    plain = ShiftParams.from_phi(0.3)
    assert shifted.phi == pytest.approx(plain.phi, abs=1e-15)
    params_a = WalkParams(theta=HADAMARD, shift=shifted, chi=0.0, N=101, n0=50)
    params_b = WalkParams(theta=HADAMARD, shift=plain, chi=0.0, N=101, n0=50)
    sa = initial_state(params_a)
    sb = initial_state(params_b)
    for _ in range(30):
        sa = step(sa, params_a)
        sb = step(sb, params_b)
    assert np.max(np.abs(site_probabilities(sa) - site_probabilities(sb))) < 1e-12


def test_open_boundary_overflow_raises():
    shift = ShiftParams.from_phi(0.0)
    params = WalkParams(theta=HADAMARD, shift=shift, chi=0.0, N=11, n0=5,
                        boundary="open")
    st = initial_state(params)
    with pytest.raises(BoundaryOverflowError):
        for _ in range(10):
            st = step(st, params)


def test_open_boundary_matches_periodic_before_wavefront_arrival():
    kw = dict(theta=HADAMARD, phi=0.2, chi=0.3, N=103)
    po = WalkParams.from_angles(boundary="open", **kw)
    pp = WalkParams.from_angles(boundary="periodic", **kw)
    so, sp_ = initial_state(po), initial_state(pp)
    for _ in range(40):
        so = step(so, po)
        sp_ = step(sp_, pp)
    assert np.array_equal(so.up, sp_.up)
    assert np.array_equal(so.down, sp_.down)


def test_evolve_open_needs_room():
    params = WalkParams.from_angles(HADAMARD, 0.0, 0.0, N=51, boundary="open")
    with pytest.raises(InvalidDimensionError):
        evolve(initial_state(params), params, 100)


@pytest.mark.parametrize("kwargs", [
    dict(N=2),
    dict(N=11, n0=11),
    dict(N=11, n0=-1),
    dict(N=11, chi=-0.1),
    dict(N=11, boundary="reflecting"),
    dict(N=11, kerr_mode="both"),
])
def test_walk_params_validation(kwargs):
    chi = kwargs.pop("chi", 0.0)
    with pytest.raises(InvalidDimensionError):
        WalkParams.from_angles(HADAMARD, 0.0, chi, **kwargs)


def test_step_checks_state_size():
    params = WalkParams.from_angles(HADAMARD, 0.0, 0.0, N=11)
    with pytest.raises(InvalidDimensionError):
        step(init_symmetric(13), params)


def test_evolve_zero_steps():
    params = WalkParams.from_angles(HADAMARD, 0.0, 0.0, N=11)
    series = evolve(initial_state(params), params, 0)
    assert len(series) == 1
    assert series.times[0] == 0
    assert series.sp[0] == pytest.approx(1.0, abs=1e-15)
