import math

import pytest

from concap.cli import EXIT_BUDGET, EXIT_ERROR, EXIT_INVALID, EXIT_OK, main

SBIN = "sym 0=1 1=1;\nexpr: (0|1)*\n"
PITFALL_PMF = "0 1 0.4142135623731\n1 1 0.4142135623731\n01 2 0.1715728752538\n"


@pytest.fixture
def sbin_file(tmp_path):
    path = tmp_path / "sbin.cs"
    path.write_text(SBIN)
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_capacity_jk22(capsys):
    code, out, _ = run(capsys, ["capacity", "--jk", "2", "2"])
    assert code == EXIT_OK
    assert "capacity    0.481211825060 nats" in out


def test_capacity_jk22_bits(capsys):
    code, out, _ = run(capsys, ["capacity", "--jk", "2", "2", "--units", "bits"])
    assert code == EXIT_OK
    assert "0.694241913631 bits" in out


def test_capacity_system_file(capsys, sbin_file):
    code, out, _ = run(capsys, ["capacity", "--system", sbin_file])
    assert code == EXIT_OK
    assert "capacity    0.693147180560 nats" in out


def test_capacity_jk11_zero(capsys):
    code, out, _ = run(capsys, ["capacity", "--jk", "1", "1"])
    assert code == EXIT_OK
    assert "capacity    0.000000000000 nats" in out


def test_capacity_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.cs"
    bad.write_text("sym a=1;\nexpr: b*\n")
    code, _, err = run(capsys, ["capacity", "--system", str(bad)])
    assert code == EXIT_ERROR
    assert "undeclared" in err


def test_spectrum_writes_file_and_estimates(capsys, sbin_file, tmp_path):
    out_path = tmp_path / "spec.txt"
    code, out, _ = run(
        capsys,
        ["spectrum", "--system", sbin_file, "--max-weight", "12",
         "--output", str(out_path)],
    )
    assert code == EXIT_OK
    assert "c0_estimate           0.693147 nats" in out
    assert "density_check" in out and "satisfied" in out
    rows = [l for l in out_path.read_text().splitlines() if not l.startswith("#")]
    assert rows[0].split() == ["1", "2", "2"]
    assert rows[-1].split() == ["12", "4096", "8190"]


def test_spectrum_budget_exit_code(capsys, sbin_file):
    code, out, _ = run(
        capsys,
        ["spectrum", "--system", sbin_file, "--max-weight", "30",
         "--max-strings", "1000"],
    )
    assert code == EXIT_BUDGET
    assert "budget exceeded" in out


def test_crosscheck_ambiguous_flagged(capsys, tmp_path):
    amb = tmp_path / "amb.cs"
    amb.write_text("sym a=1;\nexpr: (a|a)*\n")
    code, out, _ = run(
        capsys,
        ["crosscheck", "--system", str(amb), "--s", "1.0", "--max-weight", "12"],
    )
    assert code == EXIT_INVALID
    assert "ambiguous    yes" in out


def test_crosscheck_clean_system(capsys, sbin_file):
    code, out, _ = run(
        capsys,
        ["crosscheck", "--system", sbin_file, "--s", "1.0", "--max-weight", "12"],
    )
    assert code == EXIT_OK
    assert "ambiguous    no" in out


def test_maxent_pitfall_rate(capsys, tmp_path):
    sup = tmp_path / "pitfall.sup"
    sup.write_text("0 1\n1 1\n01 2\n")
    code, out, _ = run(capsys, ["maxent", "--support", str(sup)])
    assert code == EXIT_OK
    rate = float(next(l.split()[1] for l in out.splitlines() if l.startswith("rate")))
    assert rate == pytest.approx(0.881373587, abs=1e-9)
    assert "01 2 0.171572875254" in out


def test_validate_pitfall_invalid(capsys, sbin_file, tmp_path):
    pmf = tmp_path / "pitfall.pmf"
    pmf.write_text(PITFALL_PMF)
    code, out, _ = run(
        capsys,
        ["validate", "--system", sbin_file, "--support", str(pmf), "--depth", "2"],
    )
    assert code == EXIT_INVALID
    assert "verdict INVALID" in out
    assert "witness 01" in out


def test_validate_fixed_pmf_valid(capsys, sbin_file, tmp_path):
    pmf = tmp_path / "fixed.pmf"
    pmf.write_text("0 1 0.5\n1 1 0.5\n01 2 0\n")
    code, out, _ = run(
        capsys,
        ["validate", "--system", sbin_file, "--support", str(pmf), "--depth", "4"],
    )
    assert code == EXIT_OK
    assert "verdict VALID" in out


def test_validate_empty_support_is_error(capsys, sbin_file, tmp_path):
    empty = tmp_path / "empty.sup"
    empty.write_text("\n")
    code, _, err = run(
        capsys,
        ["validate", "--system", sbin_file, "--support", str(empty)],
    )
    assert code == EXIT_ERROR
    assert "nonempty" in err


def test_simulate_jk_process(capsys):
    code, out, _ = run(
        capsys, ["simulate", "--jk", "2", "2", "--blocks", "20000", "--seed", "1"]
    )
    assert code == EXIT_OK
    assert "accepted         yes" in out
    rate = float(next(l.split()[1] for l in out.splitlines()
                      if l.startswith("empirical_rate")))
    assert rate == pytest.approx(0.4812, abs=0.02)


def test_simulate_reproducible(capsys, tmp_path):
    argv = ["simulate", "--jk", "1", "2", "--blocks", "500", "--seed", "9",
            "--output", str(tmp_path / "x.txt")]
    code, out1, _ = run(capsys, argv)
    text1 = (tmp_path / "x.txt").read_text()
    code, out2, _ = run(capsys, argv)
    assert code == EXIT_OK
    assert out1 == out2
    assert (tmp_path / "x.txt").read_text() == text1


def test_jk_table_symmetric_row(capsys):
    code, out, _ = run(capsys, ["jk-table", "--jmax", "3", "--kmax", "3"])
    assert code == EXIT_OK
    rows = [l.split() for l in out.splitlines()[1:]]
    grid = [[float(v) for v in row[1:]] for row in rows]
    assert grid[0][0] == pytest.approx(0.0, abs=1e-9)
    for a in range(3):
        for b in range(3):
            assert grid[a][b] == pytest.approx(grid[b][a], abs=1e-9)
            assert grid[a][b] <= math.log(2) + 1e-9


def test_jk_table_bounds_capped(capsys):
    code, _, _ = run(capsys, ["jk-table", "--jmax", "65"])
    assert code == EXIT_ERROR
