import math

import numpy as np
import pytest

from trotterbench import (
    SweepConfig,
    build_random_two_term,
    fit_slope,
    read_sweep_csv,
    reproduce_figures,
    run_sweep,
    verify_claim,
    write_sweep_csv,
)
from trotterbench.bench import CSV_COLUMNS, InsufficientPointsError
from trotterbench.hamiltonians import hamiltonian_digest
from trotterbench.linalg import EigenphaseAliasingError


def test_fit_exact_power_law():
    s = np.geomspace(1e-3, 1e-1, 9)
    fit = fit_slope(list(zip(s, 2.0 * s**3)))
    assert fit.slope == pytest.approx(3.0, abs=1e-9)
    assert fit.intercept == pytest.approx(math.log(2.0), abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.window == (s[0], s[-1])


def test_fit_dominant_term():
    s = np.geomspace(1e-3, 1e-2, 9)
    fit = fit_slope(list(zip(s, s**2 + s**4)))
    assert abs(fit.slope - 2.0) < 0.02


def test_fit_constant():
    s = np.geomspace(1e-3, 1e-1, 9)
    fit = fit_slope([(float(x), 5.0) for x in s])
    assert abs(fit.slope) < 1e-12
    assert 0.0 <= fit.r_squared <= 1.0


def test_fit_shift_invariance():
    rng = np.random.default_rng(0)
    s = np.geomspace(1e-3, 1e-1, 11)
    y = 0.7 * s**2.5 * np.exp(rng.normal(scale=0.05, size=s.size))
    base = fit_slope(list(zip(s, y)))
    shifted = fit_slope(list(zip(10.0 * s, y)))
    assert shifted.slope == pytest.approx(base.slope, abs=1e-9)
    assert shifted.intercept != pytest.approx(base.intercept, abs=1e-3)


def test_fit_drops_zero_rows():
    s = np.geomspace(1e-3, 1e-1, 9)
    pairs = list(zip(s, 2.0 * s**3))
    pairs[4] = (pairs[4][0], 0.0)
    fit = fit_slope(pairs)
    assert fit.n_dropped_zero == 1
    assert fit.n_points == 8


def test_fit_insufficient_points():
    with pytest.raises(InsufficientPointsError):
        fit_slope([(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)])


def test_fit_auto_window_isolates_asymptote():
    # quartic contamination above s = 0.03 pollutes the quadratic asymptote
    s = np.geomspace(1e-3, 1e-1, 13)
    y = s**2 * (1.0 + (s / 0.03) ** 2)
    windowed = fit_slope(list(zip(s, y)), auto_window=True)
    plain = fit_slope(list(zip(s, y)))
    assert abs(windowed.slope - 2.0) < 0.05
    assert abs(plain.slope - 2.0) > 0.1
    assert windowed.window[1] < 0.1


def test_run_sweep_row_count(xy23):
    cfg = SweepConfig(
        hamiltonian=xy23,
        formula_specs=("strang", "w2:a4=-0.3"),
        s_max=1e-1,
        s_min=1e-3,
        points=13,
    )
    rows = run_sweep(cfg)
    assert len(rows) == 26
    assert {r.formula for r in rows} == {"strang", "w2(a4=-0.3)"}
    # descending geometric grid
    svals = [r.s for r in rows[:13]]
    assert svals[0] == pytest.approx(1e-1) and svals[-1] == pytest.approx(1e-3)
    assert all(a > b for a, b in zip(svals, svals[1:]))


def test_run_sweep_minimal(rand2):
    cfg = SweepConfig(
        hamiltonian=rand2, formula_specs=("trotter1",), s_max=1e-2, s_min=1e-3, points=4
    )
    assert len(run_sweep(cfg)) == 4


def test_run_sweep_monotone_in_window(xy23):
    cfg = SweepConfig(
        hamiltonian=xy23, formula_specs=("strang",), s_max=1e-1, s_min=1e-2, points=9
    )
    rows = run_sweep(cfg)
    mags = [abs(r.exact_delta_e) for r in rows if r.flag == "ok"]
    assert all(a > b for a, b in zip(mags, mags[1:]))


def test_run_sweep_rejects_aliasing_smax(xy23):
    cfg = SweepConfig(
        hamiltonian=xy23, formula_specs=("strang",), s_max=10.0, s_min=1e-2, points=5
    )
    with pytest.raises(EigenphaseAliasingError):
        run_sweep(cfg)


def test_sweep_config_validation(xy23):
    with pytest.raises(ValueError):
        SweepConfig(hamiltonian=xy23, formula_specs=(), s_max=0.1, s_min=0.01, points=5)
    with pytest.raises(ValueError):
        SweepConfig(hamiltonian=xy23, formula_specs=("strang",), s_max=0.01, s_min=0.1, points=5)
    with pytest.raises(ValueError):
        SweepConfig(hamiltonian=xy23, formula_specs=("strang",), s_max=0.1, s_min=0.01, points=3)


def test_csv_round_trip_and_determinism(tmp_path, rand2):
    cfg = SweepConfig(
        hamiltonian=rand2,
        formula_specs=("strang", "trotter1"),
        s_max=5e-2,
        s_min=5e-3,
        points=5,
    )
    rows = run_sweep(cfg)
    digest = hamiltonian_digest(rand2)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_sweep_csv(rows, p1, digest=digest)
    write_sweep_csv(run_sweep(cfg), p2, digest=digest)
    assert p1.read_bytes() == p2.read_bytes()  # byte-identical rerun
    parsed, parsed_digest = read_sweep_csv(p1)
    assert parsed_digest == digest
    assert parsed == rows  # exact float round trip via repr


def test_csv_header(tmp_path, rand2):
    cfg = SweepConfig(
        hamiltonian=rand2, formula_specs=("strang",), s_max=5e-2, s_min=5e-3, points=4
    )
    path = tmp_path / "rows.csv"
    write_sweep_csv(run_sweep(cfg), path)
    header = path.read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)
    assert (
        header == "formula,s,exact_delta_e,spectral_error,first_order_shift,"
        "predicted_delta_e,overlap_deficiency,gap,matched_overlap,flag"
    )


def test_verify_claim_reference(w2_solution):
    report = verify_claim(-0.3, seed=7, n_qubits=3)
    assert report.passed, report.checks
    assert report.solution == w2_solution
    assert report.residual_slope >= 3.8
    assert report.w2_delta_e_slope >= 2.8
    assert abs(report.composite_fit.slope - 4.0) <= 0.2
    # the fitted cubic coefficient is i times a real constant
    assert abs(report.alpha3.real) < 1e-3 * abs(report.alpha3.imag)


def test_verify_claim_excluded_range():
    from trotterbench.designer import NoRealSolution

    with pytest.raises(NoRealSolution):
        verify_claim(0.5, seed=7)


def test_negative_control_strang_slope(rand3):
    # a plain symmetric splitting only reaches quadratic shift scaling, so the
    # family's cubic criterion must fail on it
    cfg = SweepConfig(
        hamiltonian=rand3, formula_specs=("strang",), s_max=1e-2, s_min=1e-3, points=9
    )
    rows = run_sweep(cfg)
    fit = fit_slope([(r.s, r.exact_delta_e) for r in rows])
    assert fit.slope < 2.8
    assert fit.slope >= 1.8


def test_trotter_recovery_slope(rand3):
    # even the first-order splitting shows quadratic shift scaling: its only
    # first-order word is the full commutator, whose expectation vanishes
    cfg = SweepConfig(
        hamiltonian=rand3, formula_specs=("trotter1",), s_max=1e-1, s_min=1e-3, points=13
    )
    rows = run_sweep(cfg)
    fit = fit_slope([(r.s, r.exact_delta_e) for r in rows])
    assert fit.slope >= 1.8


def test_reproduce_left(tmp_path):
    paths = reproduce_figures("left", out_dir=tmp_path)
    names = {p.name for p in paths}
    assert "figure_left.csv" in names and "figure_left.png" in names
    header = (tmp_path / "figure_left.csv").read_text().splitlines()[0]
    assert header == "a4,a1,a2,a3,a5,branch,res1,res2,res3"


def test_reproduce_middle_desk(tmp_path):
    paths = reproduce_figures("middle", out_dir=tmp_path)
    rows, digest = read_sweep_csv(tmp_path / "figure_middle.csv")
    assert len(rows) == 26
    assert digest is not None
    assert (tmp_path / "figure_middle.png").exists()


def test_reproduce_validation(tmp_path):
    with pytest.raises(ValueError):
        reproduce_figures("top", out_dir=tmp_path)
    with pytest.raises(ValueError):
        reproduce_figures("middle", scale="poster", out_dir=tmp_path)
