import numpy as np
import pytest

from nlqw import (
    DegenerateDistributionError,
    InsufficientDataError,
    ObservableSeries,
    SeriesRecorder,
    fit_power_law,
    long_time_averages,
    participation,
    peak_positions,
    survival,
)
from nlqw.observables import relative_std, write_series_csv


def make_series(times, sp, xi=None):
    times = np.asarray(times, dtype=np.int64)
    sp = np.asarray(sp, dtype=float)
    if xi is None:
        xi = np.ones_like(sp)
    return ObservableSeries(times=times, xi=np.asarray(xi, float), sp=sp,
                            snapshots=[])


def test_participation_delta():
    p = np.zeros(50)
    p[17] = 1.0
    assert participation(p) == pytest.approx(1.0, abs=1e-12)


def test_participation_uniform():
    N = 64
    p = np.full(N, 1.0 / N)
    assert participation(p) == pytest.approx(N, rel=1e-12)


def test_participation_two_site():
    p = np.zeros(10)
    p[2] = p[7] = 0.5
    assert participation(p) == pytest.approx(2.0, abs=1e-12)


def test_participation_rejects_zero_mass():
    with pytest.raises(DegenerateDistributionError):
        participation(np.zeros(8))


def test_survival_reads_origin():
    p = np.array([0.1, 0.2, 0.7])
    assert survival(p, 2) == 0.7


def test_recorder_stride():
    rec = SeriesRecorder(n0=0, record_stride=3)
    for t in range(10):
        rec.record(t, np.array([1.0]))
    s = rec.series()
    assert list(s.times) == [0, 3, 6, 9]


def test_recorder_snapshots():
    rec = SeriesRecorder(n0=1, snapshot_steps=(0, 4))
    for t in range(6):
        p = np.zeros(3)
        p[1] = 1.0
        rec.record(t, p)
    snaps = rec.series().snapshots
    assert [t for t, _ in snaps] == [0, 4]
    assert snaps[1][1][1] == 1.0


def test_long_time_averages_window():
    s = make_series(range(10), np.linspace(1.0, 0.1, 10), xi=np.arange(10.0))
    avg = long_time_averages(s, window=4)
    assert avg.window == 4
    assert avg.xi_bar == pytest.approx(np.mean(np.arange(10.0)[-4:]))
    assert avg.sp_bar == pytest.approx(np.mean(np.linspace(1.0, 0.1, 10)[-4:]))


def test_long_time_averages_prepend_invariance():
    tail_xi = np.array([5.0, 6.0, 7.0])
    tail_sp = np.array([0.3, 0.2, 0.1])
    short = make_series([7, 8, 9], tail_sp, xi=tail_xi)
    long_ = make_series(range(10), np.concatenate([np.full(7, 0.9), tail_sp]),
                        xi=np.concatenate([np.full(7, 99.0), tail_xi]))
    a = long_time_averages(short, window=3)
    b = long_time_averages(long_, window=3)
    assert a.xi_bar == b.xi_bar
    assert a.sp_bar == b.sp_bar


def test_long_time_averages_needs_enough_records():
    s = make_series([0, 1], [1.0, 0.5])
    with pytest.raises(InsufficientDataError):
        long_time_averages(s, window=3)


@pytest.mark.parametrize("a", [-2.0, -1.0, -0.5, 0.0])
def test_fit_power_law_recovers_exponent(a):
    t = np.arange(1, 400)
    s = make_series(t, 0.73 * t.astype(float) ** a)
    assert fit_power_law(s, t_min=1) == pytest.approx(a, abs=1e-9)


def test_fit_power_law_inverse_series():
    t = np.arange(1, 200)
    s = make_series(t, 1.0 / t)
    assert fit_power_law(s, t_min=1) == pytest.approx(-1.0, abs=1e-9)


def test_fit_power_law_respects_t_min():
    t = np.arange(1, 300)
    sp = 1.0 / t
    sp[:49] = 0.5  # corrupt the transient; fit must ignore it
    s = make_series(t, sp)
    assert fit_power_law(s, t_min=50) == pytest.approx(-1.0, abs=1e-6)


def test_fit_power_law_needs_data():
    s = make_series([1, 2, 3], [0.1, 0.2, 0.3])
    with pytest.raises(InsufficientDataError):
        fit_power_law(s, t_min=100)


def test_peak_positions_two_bumps():
    p = np.zeros(21)
    p[3] = 0.4
    p[17] = 0.5
    p[10] = 0.1
    left, right = peak_positions(p, 10)
    assert (left, right) == (3, 17)


def test_peak_positions_delta_at_origin():
    p = np.zeros(9)
    p[4] = 1.0
    assert peak_positions(p, 4) == (4, 4)


def test_peak_positions_one_sided():
    p = np.zeros(9)
    p[4] = 0.5
    p[7] = 0.5
    left, right = peak_positions(p, 4)
    assert right == 7
    assert left == 4  # empty half falls back to the origin


def test_relative_std():
    x = np.array([1.0, 1.0, 1.0])
    assert relative_std(x) == 0.0
    with pytest.raises(InsufficientDataError):
        relative_std(np.array([]))
    with pytest.raises(DegenerateDistributionError):
        relative_std(np.array([0.0, 0.0]))


def test_series_invariants_from_dynamics():
    from nlqw import WalkParams, initial_state, evolve_series

    params = WalkParams.from_angles(np.pi / 4, 0.2, 0.3, N=203)
    s = evolve_series(initial_state(params), params, 90)
    assert len(s) == 91
    assert np.all(np.diff(s.times) > 0)
    assert np.all(s.xi >= 1.0 - 1e-12)
    assert np.all(s.xi <= 203 + 1e-9)
    assert np.all(s.sp >= 0.0)
    assert np.all(s.sp <= 1.0 + 1e-12)


def test_write_series_csv(tmp_path):
    s = make_series([0, 1, 2], [1.0, 0.5, 0.25], xi=[1.0, 2.0, 4.0])
    path = tmp_path / "series.csv"
    write_series_csv(str(path), s)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,xi,sp"
    assert lines[1] == "0,1.0,1.0"
    assert lines[3] == "2,4.0,0.25"


def test_write_series_csv_roundtrips_exact_floats(tmp_path):
    vals = [0.1 + 0.2, 1.0 / 3.0, 2.0 ** -40]
    s = make_series([1, 2, 3], vals)
    path = tmp_path / "series.csv"
    write_series_csv(str(path), s)
    rows = path.read_text().splitlines()[1:]
    back = [float(r.split(",")[2]) for r in rows]
    assert back == vals
