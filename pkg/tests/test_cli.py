import json
import math

import pytest

from spherediss.cli import main, t0_table


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [line for line in text.strip().splitlines() if not line.startswith("#")]
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestT0Table:
    def test_nine_rows(self, capsys):
        code, out, _ = run_cli(
            capsys, "t0-table", "--epsilons", "1,0.5,0.1,0.05,0.01,0.005,0.001,0.0005,0.0001"
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == [
            "epsilon", "t0_exact", "t0_qss", "rel_err_qss_pct",
            "t0_intuitive", "rel_err_intuitive_pct",
        ]
        assert len(rows) == 9
        first = [float(v) for v in rows[0]]
        assert first[1] == pytest.approx(0.1039, abs=5e-5)
        assert first[2] == 0.5

    def test_errors_all_positive(self):
        rows = t0_table([0.1, 0.01])
        for row in rows:
            assert row.rel_err_qss > 0
            assert row.rel_err_intuitive > 0

    def test_rejects_out_of_range(self, capsys):
        code, _, err = run_cli(capsys, "t0-table", "--epsilons", "0.1,2.5")
        assert code == 3
        assert err.startswith("epsilons:")

    def test_rejects_garbage(self, capsys):
        code, _, err = run_cli(capsys, "t0-table", "--epsilons", "0.1,banana")
        assert code == 3
        assert err.startswith("epsilons:")


class TestCurve:
    def test_static_curve_constant(self, capsys):
        code, out, _ = run_cli(
            capsys, "curve", "--epsilon", "0", "--t-max", "1", "--samples", "8"
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert len(rows) == 8
        assert all(float(r[1]) == 1.0 for r in rows)

    def test_each_method_runs(self, capsys):
        for method in ("exact", "qss", "small-time", "intuitive", "duda", "blended", "ode"):
            code, out, _ = run_cli(
                capsys, "curve", "--epsilon", "0.1", "--method", method, "--samples", "16"
            )
            assert code == 0, method
            _, rows = parse_csv(out)
            assert len(rows) == 16

    def test_unknown_method(self, capsys):
        code, _, err = run_cli(capsys, "curve", "--epsilon", "0.1", "--method", "magic")
        assert code == 3
        assert err.startswith("method:")

    def test_pde_method_redirects(self, capsys):
        code, _, err = run_cli(capsys, "curve", "--epsilon", "0.1", "--method", "pde")
        assert code == 3
        assert "pde" in err

    def test_missing_argument_is_exit_2(self, capsys):
        assert main(["curve"]) == 2
        capsys.readouterr()

    def test_growth_requires_t_max(self, capsys):
        code, _, err = run_cli(capsys, "curve", "--epsilon", "-0.1")
        assert code == 3
        assert err.startswith("t_max:") or err.startswith("t-max:")


class TestInvert:
    def test_published_value(self, capsys):
        code, out, _ = run_cli(capsys, "invert", "--epsilon", "0.1", "--t", "1.83532")
        assert code == 0
        _, rows = parse_csv(out)
        assert float(rows[0][1]) == pytest.approx(0.45504, abs=1e-5)

    def test_past_dissolution_is_exit_3(self, capsys):
        code, _, err = run_cli(capsys, "invert", "--epsilon", "0.1", "--t", "50")
        assert code == 3
        assert err.startswith("t:")


class TestCompare:
    def test_figure_ordering_columns(self, capsys):
        code, out, _ = run_cli(
            capsys, "compare", "--epsilon", "0.01",
            "--methods", "exact,qss,duda,intuitive", "--samples", "50",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["t", "exact", "qss", "duda", "intuitive"]
        for row in rows:
            t, exact, qss, duda, intuitive = (float(v) for v in row)
            assert duda <= exact + 1e-9
            assert exact <= intuitive + 1e-9
        assert "# summary max_abs_dev_duda=" in out

    def test_oracle_deviation_tiny(self, capsys):
        code, out, _ = run_cli(
            capsys, "compare", "--epsilon", "0.1", "--methods", "exact,ode",
            "--samples", "40", "--raw",
        )
        assert code == 0
        for line in out.splitlines():
            if line.startswith("# summary max_abs_dev_ode="):
                assert float(line.split("=")[1]) <= 1e-6
                break
        else:
            pytest.fail("missing ode summary line")

    def test_blended_outside_fit_range(self, capsys):
        code, _, err = run_cli(
            capsys, "compare", "--epsilon", "0.7", "--methods", "exact,blended"
        )
        assert code == 3
        assert err.startswith("epsilon:")

    def test_growth_needs_t_max(self, capsys):
        code, _, err = run_cli(
            capsys, "compare", "--epsilon", "-0.01", "--methods", "exact,qss"
        )
        assert code == 3

    def test_pde_column(self, capsys):
        code, out, _ = run_cli(
            capsys, "compare", "--epsilon", "0.05", "--methods", "exact,pde",
            "--samples", "20", "--rho-ratio", "1.0", "--t-max", "2.0",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["t", "exact", "pde"]
        for line in out.splitlines():
            if line.startswith("# summary max_abs_dev_pde="):
                assert float(line.split("=")[1]) < 0.1
                break
        else:
            pytest.fail("missing pde summary line")


class TestOutputModes:
    def test_determinism(self, capsys):
        args = ("t0-table", "--epsilons", "0.1,0.01")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_json_mirrors_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, "invert", "--epsilon", "0.1", "--t", "1.83532", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["columns"] == ["t", "R"]
        assert payload["data"][0][1] == pytest.approx(0.45504, abs=1e-5)

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "curve.csv"
        code, out, _ = run_cli(
            capsys, "curve", "--epsilon", "0.1", "--samples", "8",
            "--output", str(target),
        )
        assert code == 0
        assert out == ""
        header, rows = parse_csv(target.read_text())
        assert header == ["t", "exact"]
        assert len(rows) == 8

    def test_raw_mode_full_precision(self, capsys):
        _, display, _ = run_cli(capsys, "invert", "--epsilon", "0.1", "--t", "1.0")
        _, raw, _ = run_cli(capsys, "invert", "--epsilon", "0.1", "--t", "1.0", "--raw")
        _, display_rows = parse_csv(display)
        _, raw_rows = parse_csv(raw)
        assert len(raw_rows[0][1]) > len(display_rows[0][1])


class TestNondim:
    def test_known_values(self, capsys):
        code, out, _ = run_cli(
            capsys, "nondim", "--cs", "1", "--c0", "0",
            "--rho-p", str(10 / math.pi), "--rho-m", "1e12",
            "--d", str(1 / math.pi), "--r0", "1",
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["epsilon", "time_scale_s", "length_scale_m", "regime"]
        assert float(rows[0][0]) == pytest.approx(0.1, abs=1e-6)
        assert float(rows[0][1]) == pytest.approx(1.0, rel=1e-6)
        assert rows[0][3] == "dissolution"

    def test_invalid_scenario_exit_3(self, capsys):
        code, _, err = run_cli(
            capsys, "nondim", "--cs", "1000", "--c0", "0", "--rho-p", "1200",
            "--rho-m", "1000", "--d", "1e-9", "--r0", "1e-6",
        )
        assert code == 3
        assert err.startswith("solubility:")


class TestPdeCommand:
    def test_summary_json(self, capsys, tmp_path):
        curve_path = tmp_path / "pde.csv"
        code, out, _ = run_cli(
            capsys, "pde", "--epsilon", "0.1", "--rho-ratio", "1.0",
            "--t-end", "0.5", "--output", str(curve_path),
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["epsilon"] == 0.1
        assert summary["stopped_on"] == "t_end"
        assert summary["error_vs_exact"]["max_abs"] < 0.05
        header, rows = parse_csv(curve_path.read_text())
        assert header == ["t", "pde"]
        assert len(rows) > 10

    def test_snapshots_written(self, capsys, tmp_path):
        prefix = tmp_path / "snap"
        code, out, _ = run_cli(
            capsys, "pde", "--epsilon", "0.0", "--rho-ratio", "1.0",
            "--t-end", "0.5", "--snapshot-times", "0.25,0.5",
            "--snapshot-prefix", str(prefix),
        )
        assert code == 0
        for index in (0, 1):
            path = tmp_path / f"snap_{index:03d}.csv"
            header, rows = parse_csv(path.read_text())
            assert header == ["rhat", "C"]
            assert float(rows[0][1]) == pytest.approx(1.0)


class TestEnvOverrides:
    def test_bogus_env_value_is_domain_error(self, capsys, monkeypatch):
        monkeypatch.setenv("SPHEREDISS_ODE_RTOL", "three")
        code, _, err = run_cli(
            capsys, "curve", "--epsilon", "0.1", "--method", "ode", "--samples", "8"
        )
        assert code == 3
        assert err.startswith("SPHEREDISS_ODE_RTOL:")

    def test_env_override_applies(self, capsys, monkeypatch):
        monkeypatch.setenv("SPHEREDISS_ODE_RTOL", "1e-6")
        monkeypatch.setenv("SPHEREDISS_ODE_ATOL", "1e-6")
        code, out, _ = run_cli(
            capsys, "curve", "--epsilon", "0.1", "--method", "ode", "--samples", "8"
        )
        assert code == 0
