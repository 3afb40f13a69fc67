import numpy as np
import pytest

from trotterbench.cli import main

XY_SPEC = "kind = xy\nrows = 2\ncols = 3\njx = 0.25\njy = 0.75\n"
RANDOM_SPEC = "kind = random\nn_qubits = 3\nstrings_per_term = 10\nseed = 7\n"


@pytest.fixture
def ham_file(tmp_path):
    path = tmp_path / "ham.txt"
    path.write_text(XY_SPEC)
    return path


def test_solve_coeffs(capsys):
    assert main(["solve-coeffs", "--a4", "-0.3"]) == 0
    out = capsys.readouterr().out
    assert "a2 = 1.3" in out
    assert "residuals" in out


def test_solve_coeffs_branch(capsys):
    assert main(["solve-coeffs", "--a4", "-0.3", "--branch", "1"]) == 0
    assert "branch = 1" in capsys.readouterr().out


def test_solve_coeffs_no_solution(capsys):
    assert main(["solve-coeffs", "--a4", "0.5"]) == 3
    assert "no real solution" in capsys.readouterr().err


def test_solve_coeffs_branch_out_of_range():
    assert main(["solve-coeffs", "--a4", "-0.3", "--branch", "9"]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["solve-coeffs"])  # missing --a4
    assert err.value.code == 1


def test_unknown_formula_is_usage_error(ham_file, tmp_path):
    code = main(
        ["sweep", "--ham", str(ham_file), "--formula", "nonsense",
         "--s-max", "0.1", "--s-min", "0.01", "--out", str(tmp_path / "o.csv")]
    )
    assert code == 1


def test_missing_ham_file(tmp_path):
    code = main(
        ["sweep", "--ham", str(tmp_path / "absent.txt"), "--formula", "strang",
         "--s-max", "0.1", "--s-min", "0.01", "--out", str(tmp_path / "o.csv")]
    )
    assert code == 1


def test_family_scan(tmp_path, capsys):
    out = tmp_path / "family.csv"
    code = main(["family-scan", "--from", "-0.4", "--to", "-0.3", "--step", "0.01",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "a4,a1,a2,a3,a5,branch,res1,res2,res3"
    assert len(lines) > 11  # 11 a4 points, at least one branch each


def test_expand_table(ham_file, capsys):
    assert main(["expand", "--formula", "strang", "--ham", str(ham_file)]) == 0
    out = capsys.readouterr().out
    assert "[A,B]\t0.0" in out
    assert "[B,A,B]\t-0.25" in out


def test_check_residuals(ham_file, capsys):
    assert main(["check", "--formula", "w2:a4=-0.3", "--ham", str(ham_file)]) == 0
    out = capsys.readouterr().out
    assert "balance" in out


def test_sweep_fit_pipeline(ham_file, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(
        ["sweep", "--ham", str(ham_file), "--formula", "strang", "--formula", "w2:a4=-0.3",
         "--s-max", "0.1", "--s-min", "0.01", "--points", "9", "--out", str(out)]
    )
    assert code == 0
    assert out.exists()
    capsys.readouterr()

    code = main(["fit", "--csv", str(out), "--formula", "strang",
                 "--column", "exact_delta_e"])
    assert code == 0
    printed = capsys.readouterr().out
    slope = float(printed.splitlines()[0].split("=")[1])
    assert abs(slope - 2.0) < 0.15


def test_fit_unknown_column(ham_file, tmp_path):
    out = tmp_path / "sweep.csv"
    main(["sweep", "--ham", str(ham_file), "--formula", "strang",
          "--s-max", "0.1", "--s-min", "0.01", "--points", "4", "--out", str(out)])
    assert main(["fit", "--csv", str(out), "--column", "bogus"]) == 1


def test_verify_claim_cli(tmp_path, capsys):
    ham = tmp_path / "rand.txt"
    ham.write_text(RANDOM_SPEC)
    assert main(["verify-claim", "--a4", "-0.3", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert out.count("[pass]") == 4


def test_reproduce_left_cli(tmp_path, capsys):
    assert main(["reproduce", "--figure", "left", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "figure_left.csv").exists()
    assert (tmp_path / "figure_left.png").exists()
