"""Command-line front end: schemas, determinism, exit codes."""

import json
import subprocess
import sys

import numpy as np
import pytest

from gdl import cli


def run_cli(args):
    return cli.main(list(args))


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestRodCurve:
    def test_default_csv(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert run_cli(["rod-curve", "--out", str(out), "--samples", "11"]) == 0
        header, rows = read_csv(out)
        assert header[0].startswith("d_m")
        assert "sigma" in header[1]
        assert len(rows) == 11
        for row in rows:
            for cell in row:
                assert np.isfinite(float(cell))

    def test_two_samples_bracket_the_branch(self, tmp_path):
        out = tmp_path / "c.csv"
        run_cli(["rod-curve", "--out", str(out), "--samples", "2"])
        _, rows = read_csv(out)
        assert len(rows) == 2
        assert float(rows[0][0]) == 0.0          # elastic limit row
        assert float(rows[0][1]) == pytest.approx(1.0)   # sigma/sigma_c peak
        assert float(rows[1][0]) == 1.0          # near-failure row
        assert float(rows[1][1]) == pytest.approx(0.0, abs=1e-12)

    def test_stable_case_monotone_displacement(self, tmp_path):
        out = tmp_path / "c.csv"
        run_cli(["rod-curve", "--out", str(out), "--samples", "60"])
        _, rows = read_csv(out)
        u = [float(r[2]) for r in rows]
        assert all(b > a for a, b in zip(u[:-1], u[1:]))

    def test_constant_threshold_snaps_back_immediately(self, tmp_path):
        out = tmp_path / "c.csv"
        run_cli(["rod-curve", "--variant", "ii", "--out", str(out),
                 "--samples", "40"])
        _, rows = read_csv(out)
        u = [float(r[2]) for r in rows]
        assert u[1] < u[0]

    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(["rod-curve", "--out", str(a), "--samples", "25"])
        run_cli(["rod-curve", "--out", str(b), "--samples", "25"])
        assert a.read_bytes() == b.read_bytes()

    def test_json_mirror(self, tmp_path):
        out = tmp_path / "c.json"
        run_cli(["rod-curve", "--out", str(out), "--format", "json",
                 "--samples", "7"])
        payload = json.loads(out.read_text())
        assert len(payload["columns"]) == 4
        assert len(payload["rows"]) == 7

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"samples": 5, "lam": 0.3}))
        out = tmp_path / "c.csv"
        run_cli(["rod-curve", "--config", str(cfg), "--out", str(out),
                 "--samples", "9"])
        _, rows = read_csv(out)
        assert len(rows) == 9  # flag wins over file


class TestRodProfile:
    def test_default_stations(self, tmp_path):
        out = tmp_path / "profiles"
        assert run_cli(["rod-profile", "--out", str(out), "--samples", "41"]) == 0
        files = sorted(out.glob("*.csv"))
        assert len(files) == 3
        header, rows = read_csv(files[0])
        assert [h.split(" ")[0] for h in header] == ["x", "traction", "Y", "Yc",
                                                     "gamma2", "d"]

    def test_elastic_station_has_zero_gamma2(self, tmp_path):
        out = tmp_path / "profiles"
        run_cli(["rod-profile", "--out", str(out), "--stations", "elastic:0.5",
                 "--samples", "21"])
        header, rows = read_csv(next(iter(out.glob("*elastic*"))))
        assert all(float(r[4]) == 0.0 for r in rows)
        assert all(float(r[5]) == 0.0 for r in rows)

    def test_variant_ii_is_a_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run_cli(["rod-profile", "--variant", "ii", "--out", str(tmp_path)])
        assert err.value.code == 2


class TestBlockCurve:
    def test_reference_first_row(self, tmp_path):
        out = tmp_path / "b.csv"
        assert run_cli(["block-curve", "--out", str(out), "--samples", "20"]) == 0
        _, rows = read_csv(out)
        assert rows[0][0] == "elastic"
        assert float(rows[0][2]) == pytest.approx(7.90569e-3, rel=1e-5)
        assert float(rows[0][3]) == pytest.approx(4.21637, rel=1e-5)

    def test_final_row_unloaded(self, tmp_path):
        out = tmp_path / "b.csv"
        run_cli(["block-curve", "--out", str(out), "--samples", "20"])
        _, rows = read_csv(out)
        p0 = (2.0 * 0.025 * 800.0) ** 0.5 * 2.0 / 3.0
        assert float(rows[-1][3]) <= 1e-3 * p0

    def test_junction_rows_duplicated(self, tmp_path):
        out = tmp_path / "b.csv"
        run_cli(["block-curve", "--out", str(out), "--samples", "15"])
        _, rows = read_csv(out)
        for a, b in zip(rows[:-1], rows[1:]):
            if a[0] != b[0]:
                assert float(b[3]) == pytest.approx(float(a[3]), rel=1e-9)

    def test_unsupported_regime_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run_cli(["block-curve", "--lc", "1.0", "--out", str(tmp_path / "x.csv")])
        assert err.value.code == 2

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(["block-curve", "--out", str(a), "--samples", "12"])
        run_cli(["block-curve", "--out", str(b), "--samples", "12"])
        assert a.read_bytes() == b.read_bytes()


class TestBlockProfile:
    def test_propagation_station_front_unloaded(self, tmp_path):
        out = tmp_path / "profiles"
        run_cli(["block-profile", "--out", str(out), "--stations", "6.8",
                 "--samples", "81"])
        header, rows = read_csv(next(iter(out.glob("*lm_6.8*"))))
        c = 0.8
        for r in rows:
            if float(r[0]) <= c - 1e-9:
                assert float(r[1]) == 0.0

    def test_elastic_station(self, tmp_path):
        out = tmp_path / "profiles"
        run_cli(["block-profile", "--out", str(out), "--stations", "elastic:0.5",
                 "--samples", "31"])
        _, rows = read_csv(next(iter(out.glob("*elastic*"))))
        assert all(float(r[4]) == 0.0 for r in rows)


class TestFemRun:
    def test_small_run(self, tmp_path):
        out = tmp_path / "fem.csv"
        code = run_cli(["fem-run", "--elements", "40", "--steps", "4",
                        "--u-end", "1.03", "--out", str(out)])
        assert code == 0
        header, rows = read_csv(out)
        assert "dissipation" in header[-1]
        assert float(rows[-1][3]) > 0.0  # damage grew past the elastic limit


class TestVerify:
    def test_report_passes_and_records_discrepancies(self, tmp_path):
        out = tmp_path / "report.json"
        code = run_cli(["verify", "--no-fem", "--out", str(out)])
        report = json.loads(out.read_text())
        assert code == 0
        assert report["passed"]
        ids = [d["id"] for d in report["discrepancies"]]
        assert "propagation-angle-exponent" in ids
        assert "linear-variant-end-displacement" in ids
        entry = next(d for d in report["discrepancies"]
                     if d["id"] == "propagation-angle-exponent")
        assert entry["implemented_over_alternative"] == pytest.approx(2.0, rel=1e-12)

    def test_inadmissible_lambda_warns(self, tmp_path):
        out = tmp_path / "report.json"
        run_cli(["verify", "--no-fem", "--lambda", "0.51", "--out", str(out)])
        report = json.loads(out.read_text())
        assert any("lambda" in w for w in report["warnings"])

    def test_check_schema(self, tmp_path):
        out = tmp_path / "report.json"
        run_cli(["verify", "--no-fem", "--out", str(out)])
        report = json.loads(out.read_text())
        for suite in report["suites"]:
            assert suite["checks"]
            for check in suite["checks"]:
                assert set(check) >= {"name", "passed", "tolerance", "residual"}


def test_module_entry_point(tmp_path):
    out = tmp_path / "c.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "gdl", "rod-curve", "--out", str(out),
         "--samples", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert out.exists()
