import numpy as np
import pytest

from trotterbench import (
    build_random_two_term,
    custom_w2,
    expm_i,
    family_scan,
    nested_commutator,
    solve_w2,
    spectral_norm,
    step_matrix,
    term_dense,
    total_dense,
    w2_condition_residuals,
)
from trotterbench.designer import BranchOutOfRange, NoRealSolution


def test_solve_reference_point(w2_solution):
    sol = w2_solution
    assert sol.a[1] == 1.3  # a2 = 1 - a4 exactly
    assert sol.a[3] == -0.3
    assert max(sol.residuals) < 1e-10
    assert sol.a[0] + sol.a[2] + sol.a[4] == pytest.approx(1.0, abs=1e-12)


def test_two_branches_at_reference_point():
    b0 = solve_w2(-0.3, branch=0)
    b1 = solve_w2(-0.3, branch=1)
    assert b0.a[0] < b1.a[0]
    with pytest.raises(BranchOutOfRange):
        solve_w2(-0.3, branch=2)


@pytest.mark.parametrize("a4", [0.5, 0.0, 1.0, 0.3, 0.99])
def test_no_real_solution_inside_unit_interval(a4):
    with pytest.raises(NoRealSolution):
        solve_w2(a4)


def test_solver_determinism():
    first = solve_w2(-0.7)
    second = solve_w2(-0.7)
    assert first == second  # bit-identical tuples


def test_solutions_satisfy_transcribed_conditions():
    for a4 in (-0.3, -0.8, 1.4):
        sol = solve_w2(a4)
        r1, r2, r3 = w2_condition_residuals(sol.a)
        assert abs(r1) < 1e-12
        assert abs(r2) < 1e-10
        assert abs(r3) < 1e-10


def test_solution_single_step_error_form(w2_solution):
    # the whole point of the family: after removing the fitted s^3 [H,[H,B]]
    # component, the single-step error is quartic
    h = build_random_two_term(3, 10, 7)
    f = custom_w2(w2_solution.a)
    ht = np.array(total_dense(h))
    c3 = nested_commutator([ht, ht, np.array(term_dense(h.term("B")))])
    svals = np.geomspace(1e-3, 1e-2, 9)
    s0 = svals[0]
    xi0 = step_matrix(f, h, s0) - expm_i(ht, s0)
    alpha3 = np.vdot(c3, xi0) / (s0**3 * np.vdot(c3, c3).real)
    resid = [
        spectral_norm(step_matrix(f, h, s) - expm_i(ht, s) - alpha3 * s**3 * c3)
        for s in svals
    ]
    slope = np.polyfit(np.log(svals), np.log(resid), 1)[0]
    assert slope >= 3.8
    # the leading coefficient is a purely imaginary multiple of the word
    # matrix; a Hermitian multiple would violate unitarity at cubic order
    assert abs(alpha3.real) < 1e-3 * abs(alpha3.imag)


def test_family_scan_continuity():
    a4_values = np.round(np.arange(-0.5, -0.3 + 1e-9, 0.01), 10)
    solutions, failures = family_scan(a4_values)
    assert not failures
    branch0 = [s for s in solutions if s.branch_id == 0]
    assert len(branch0) == len(a4_values)
    for prev, cur in zip(branch0, branch0[1:]):
        delta = max(abs(p - c) for p, c in zip(prev.a, cur.a))
        assert delta < 0.1
    for sol in solutions:
        assert sol.a[1] == 1.0 - sol.a4


def test_family_scan_records_failures():
    solutions, failures = family_scan(np.arange(0.1, 0.95, 0.1))
    assert not solutions
    assert len(failures) == 9
