"""Tests for argument parsing, dispatch, outputs, and exit statuses."""

import json
import math

import pytest

from zetaheat.cli import (EXIT_ACCURACY, EXIT_COVERAGE, EXIT_OK,
                          EXIT_VALIDATION, main, parse_args, parse_grid, run)


class TestParseGrid:
    def test_single_and_list(self):
        assert parse_grid("1e-4") == (1e-4,)
        assert parse_grid("0.1,0.2,0.5") == (0.1, 0.2, 0.5)

    def test_log_grid(self):
        grid = parse_grid("100:10000:log:50")
        assert len(grid) == 50
        assert grid[0] == 100.0 and grid[-1] == 10000.0
        ratios = [b / a for a, b in zip(grid, grid[1:])]
        assert max(ratios) - min(ratios) < 1e-9

    def test_lin_grid(self):
        grid = parse_grid("0:1:lin:5")
        assert grid == (0.0, 0.25, 0.5, 0.75, 1.0)

    def test_malformed(self):
        for bad in ("1:2:3", "1:2:geo:5", "a,b", "1:2:log:0"):
            with pytest.raises(ValueError):
                parse_grid(bad)


class TestParseArgs:
    def test_discrepancy_forces_extended(self):
        config = parse_args(["discrepancy", "--t", "1e-4"])
        assert config.precision == "extended"
        config = parse_args(["discrepancy", "--t", "0.5"])
        assert config.precision == "standard"

    def test_coeffs_config(self):
        config = parse_args(["coeffs", "--order", "20", "--format", "csv"])
        assert config.subcommand == "coeffs"
        assert config.order == 20
        assert config.fmt == "csv"

    def test_a_grid_maps_to_t(self):
        config = parse_args(["trace", "--a", "100:10000:log:50"])
        assert len(config.a_values) == 50
        assert config.t_values[0] == pytest.approx(1e-2)

    def test_conflicting_grids_rejected(self):
        with pytest.raises(SystemExit) as err:
            parse_args(["trace", "--t", "0.1", "--a", "10"])
        assert err.value.code == 2

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as err:
            parse_args(["trace", "--t", "0.1", "--frobnicate"])
        assert err.value.code == 2

    def test_missing_grid_rejected(self):
        with pytest.raises(SystemExit) as err:
            parse_args(["verify"])
        assert err.value.code == 2

    def test_malformed_number_rejected(self):
        with pytest.raises(SystemExit) as err:
            parse_args(["trace", "--t", "zero"])
        assert err.value.code == 2

    def test_nonpositive_grid_rejected(self):
        with pytest.raises(SystemExit) as err:
            parse_args(["trace", "--t", "0.0"])
        assert err.value.code == 2


class TestRun:
    def test_coeffs_csv(self, tmp_path, capsys):
        out = tmp_path / "coeffs.csv"
        code = main(["coeffs", "--order", "6", "--output", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "n,a_exact,a_float,b_exact,b_float"
        assert len(lines) == 8
        assert lines[1].split(",")[1] == "-1/4"

    def test_verify_exits_zero_and_reports_residual(self, tmp_path, capsys):
        out = tmp_path / "verify.json"
        code = main(["verify", "--t", "0.1", "--format", "json",
                     "--output", str(out)])
        assert code == EXIT_OK
        captured = capsys.readouterr()
        assert "residual=" in captured.err
        payload = json.loads(out.read_text())
        assert abs(payload[0]["residual"]) <= 1e-9

    def test_trace_no_tail_insufficient_coverage_exits_4(self, capsys):
        code = main(["trace", "--t", "1e-9", "--no-tail"])
        assert code == EXIT_COVERAGE
        assert capsys.readouterr().err.startswith("error: coverage:")

    def test_bad_zero_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "zeros.txt"
        bad.write_text("21.0\n14.1\n")
        code = main(["trace", "--t", "0.1", "--zeros-file", str(bad)])
        assert code == EXIT_VALIDATION
        assert capsys.readouterr().err.startswith("error: validation:")

    def test_accuracy_error_exits_3(self, capsys):
        # t = 3 pushes the prime-sum cutoff past its supported bound
        code = main(["verify", "--t", "3"])
        assert code == EXIT_ACCURACY
        assert capsys.readouterr().err.startswith("error: accuracy:")

    def test_determinism_byte_identical(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        args = ["figure", "--kind", "discrepancy_vs_a",
                "--a", "5000:10000:log:3"]
        assert main(args + ["--output", str(out1)]) == EXIT_OK
        assert main(args + ["--output", str(out2), "--jobs", "3"]) == EXIT_OK
        assert out1.read_bytes() == out2.read_bytes()

    def test_figure_csv_shape(self, tmp_path):
        out = tmp_path / "fig.csv"
        code = main(["figure", "--kind", "trace_vs_a", "--a", "1,10,100",
                     "--output", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "a,value"
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert values == sorted(values)

    def test_expansion_json(self, capsys):
        code = main(["expansion", "--t", "0.01", "--order", "4",
                     "--format", "json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        row = payload[0]
        assert row["total"] == pytest.approx(
            row["divergent"] + row["exponential"] + row["series"], rel=1e-12)

    def test_discrepancy_csv_value(self, tmp_path):
        out = tmp_path / "d.csv"
        code = main(["discrepancy", "--t", "1e-4", "--output", str(out)])
        assert code == EXIT_OK
        a, value = out.read_text().splitlines()[1].split(",")
        assert float(a) == pytest.approx(1e4)
        assert -2.55e-9 <= float(value) <= -2.45e-9

    def test_counting_csv_header(self, capsys):
        code = main(["counting", "--t", "0.01"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "t,J,I,R,leading,residual"
