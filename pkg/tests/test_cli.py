import json

import numpy as np
import pytest

from tsui import cli


def run(tmp_path, command, scenario=None, extra=(), name="scenario.json"):
    argv = [command]
    if scenario is not None:
        path = tmp_path / name
        path.write_text(json.dumps(scenario))
        argv += ["--config", str(path)]
    argv += list(extra)
    return cli.main(argv)


SENS_V = {"scheme": "v", "interferometer": {"gain": 3.3, "eta": 0.65, "alpha2": 1e6}}


class TestSensitivity:
    def test_fit_point_report(self, tmp_path, capsys):
        assert run(tmp_path, "sensitivity", SENS_V) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["scaled_phase_variance"] == pytest.approx(0.0952228, abs=1e-6)
        assert payload["snri_db"] == pytest.approx(3.888, abs=1e-3)
        assert payload["fisher"]["dist_term"] == pytest.approx(0.0, abs=1.0)

    def test_insensitive_point_exits_3(self, tmp_path, capsys):
        scenario = {
            "scheme": "v",
            "interferometer": {"gain": 3.3, "eta": 0.65, "alpha2": 1e6, "phi_p": 0.0},
        }
        assert run(tmp_path, "sensitivity", scenario) == 3
        assert "insensitive" in capsys.readouterr().err

    def test_unknown_field_exits_2(self, tmp_path, capsys):
        scenario = {"scheme": "v", "wat": 1, "interferometer": SENS_V["interferometer"]}
        assert run(tmp_path, "sensitivity", scenario) == 2
        assert "unknown fields" in capsys.readouterr().err

    def test_full_equals_truncated_lossless(self, tmp_path, capsys):
        values = {}
        for tag in ("i", "v"):
            scenario = {"scheme": tag, "interferometer": {"gain": 2.0, "alpha2": 1e6}}
            assert run(tmp_path, "sensitivity", scenario) == 0
            values[tag] = json.loads(capsys.readouterr().out)["phase_variance"]
        assert values["i"] == pytest.approx(values["v"], rel=1e-9)

    def test_gain_and_r_both_rejected(self, tmp_path):
        scenario = {"scheme": "v", "interferometer": {"gain": 2.0, "r": 0.5, "alpha2": 1.0}}
        assert run(tmp_path, "sensitivity", scenario) == 2

    def test_optimize_flag(self, tmp_path, capsys):
        scenario = {
            "scheme": "iii",
            "interferometer": {"gain": 2.0, "alpha2": 1e6},
            "optimize": True,
        }
        assert run(tmp_path, "sensitivity", scenario) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["scaled_phase_variance"] == pytest.approx(0.125, abs=1e-6)

    def test_csv_format(self, tmp_path, capsys):
        assert run(tmp_path, "sensitivity", SENS_V, extra=["--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "field,value"
        assert any(line.startswith("snri_db,") for line in out.splitlines())


class TestFigureCommands:
    def test_figure2_defaults_and_roundtrip(self, tmp_path):
        out = tmp_path / "fig2.csv"
        scenario = {"g_min": 1.0, "g_max": 2.0, "g_step": 0.5}
        assert run(tmp_path, "figure2", scenario, extra=["--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        header = lines[0].split(",")
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
        assert len(rows) == 3
        d = dict(zip(header, rows[-1]))
        assert d["gain"] == 2.0
        assert d["closed_homodyne_full"] == pytest.approx(0.0428932188, abs=1e-9)
        # second write must be byte-identical (determinism)
        out2 = tmp_path / "fig2_again.csv"
        assert run(tmp_path, "figure2", scenario, extra=["--out", str(out2)]) == 0
        assert out.read_bytes() == out2.read_bytes()

    def test_figure2_plot_rendered(self, tmp_path):
        out = tmp_path / "fig2.csv"
        png = tmp_path / "fig2.png"
        scenario = {"g_values": [1.0, 1.5, 2.0]}
        code = run(tmp_path, "figure2", scenario, extra=["--out", str(out), "--plot", str(png)])
        assert code == 0
        assert png.stat().st_size > 1000
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_figure2_scheme_subset(self, tmp_path):
        out = tmp_path / "fig2.csv"
        png = tmp_path / "fig2.png"
        scenario = {"g_values": [2.0], "schemes": ["ii", "iii"]}
        code = run(tmp_path, "figure2", scenario, extra=["--out", str(out), "--plot", str(png)])
        assert code == 0
        header = out.read_text().splitlines()[0].split(",")
        assert "closed_homodyne_conjugate" in header
        assert "closed_homodyne_full" not in header

    def test_fig4b_peak_row(self, tmp_path):
        out = tmp_path / "fig4b.csv"
        assert run(tmp_path, "fig4b", {}, extra=["--out", str(out)]) == 0
        data = np.genfromtxt(out, delimiter=",", names=True)
        k = np.nanargmax(data["snri_db"])
        assert data["phi_p_rad"][k] == pytest.approx(np.pi / 2, abs=1e-9)
        assert data["snri_db"][k] == pytest.approx(3.9, abs=0.1)
        assert abs(data["snri_limit_db"][k] - data["snri_db"][k]) < 0.05

    def test_figs2_locus(self, tmp_path):
        out = tmp_path / "figs2.csv"
        scenario = {"r": 0.4605, "eta": 1.0, "grid_deg": 3.0}
        assert run(tmp_path, "figs2", scenario, extra=["--out", str(out)]) == 0
        data = np.genfromtxt(out, delimiter=",", names=True)
        k = np.nanargmax(data["snri_db"])
        assert data["snri_db"][k] == pytest.approx(4.0, abs=0.05)
        assert abs(np.sin(data["phi_p_rad"][k])) == pytest.approx(1.0, abs=1e-9)

    def test_figs2_requires_r_or_gain(self, tmp_path):
        assert run(tmp_path, "figs2", {"eta": 1.0}) == 2

    def test_scan_and_map_plots_rendered(self, tmp_path):
        png4b = tmp_path / "scan.png"
        code = run(
            tmp_path,
            "fig4b",
            {"grid_deg": 5.0},
            extra=["--out", str(tmp_path / "scan.csv"), "--plot", str(png4b)],
        )
        assert code == 0 and png4b.stat().st_size > 1000
        pngs2 = tmp_path / "map.png"
        code = run(
            tmp_path,
            "figs2",
            {"r": 0.4605, "grid_deg": 10.0},
            extra=["--out", str(tmp_path / "map.csv"), "--plot", str(pngs2)],
            name="map.json",
        )
        assert code == 0 and pngs2.stat().st_size > 1000

    def test_csv_roundtrip_precision(self, tmp_path):
        out = tmp_path / "fig4b.csv"
        assert run(tmp_path, "fig4b", {"grid_deg": 10.0}, extra=["--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        for line in lines[1:3]:
            for token in line.split(","):
                value = float(token)
                assert cli._fmt(value) == token  # 17 significant digits survive


class TestFisherCommand:
    def test_report(self, tmp_path, capsys):
        scenario = {"interferometer": {"gain": 3.3, "eta": 0.65, "alpha2": 1e6}}
        assert run(tmp_path, "fisher", scenario) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["cfi"] == pytest.approx(payload["snr_term"] + payload["dist_term"])
        assert payload["inverse_phase_variance"] <= payload["cfi"] * (1 + 1e-9)


class TestOracleCheck:
    def test_small_grid_passes(self, tmp_path, capsys):
        scenario = {"r_values": [0.3], "alpha_values": [0.5], "eta_values": [0.7], "cutoff": 30}
        assert run(tmp_path, "oracle-check", scenario) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["passed"] is True
        assert payload["max_abs_discrepancy"] < 1e-6

    def test_default_grid_passes_without_config(self, capsys):
        assert cli.main(["oracle-check"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["passed"] is True
        assert payload["max_abs_discrepancy"] < 1e-6
        # 18 grid points x (4 means + 10 cov + 2 n_mean + 2 n_var + 1 n_cov)
        assert len(payload["entries"]) == 18 * 19


class TestMcExperiment:
    SCENARIO = {
        "mode": "paired",
        "interferometer": {"gain": 3.3, "eta": 0.65, "alpha2": 4e5},
        "modulation": {
            "delta_phi": 1.7e-3,
            "omega": 1e6,
            "sample_rate": 8e6,
            "duration": 0.032768,
            "rbw": 30e3,
            "seed": 5,
        },
    }

    def test_paired_run_and_determinism(self, tmp_path, capsys):
        assert run(tmp_path, "mc-experiment", self.SCENARIO) == 0
        first = capsys.readouterr().out
        assert run(tmp_path, "mc-experiment", self.SCENARIO) == 0
        assert capsys.readouterr().out == first
        payload = json.loads(first)
        assert payload["analytic_snri_db"] == pytest.approx(3.888, abs=1e-3)
        assert abs(payload["estimated_snri_db"] - payload["analytic_snri_db"]) < 0.5

    def test_seed_override_changes_output(self, tmp_path, capsys):
        assert run(tmp_path, "mc-experiment", self.SCENARIO) == 0
        base = json.loads(capsys.readouterr().out)
        assert run(tmp_path, "mc-experiment", self.SCENARIO, extra=["--seed", "99"]) == 0
        other = json.loads(capsys.readouterr().out)
        assert other["seed"] == 99
        assert other["squeezed"]["estimated_snr_db"] != base["squeezed"]["estimated_snr_db"]

    def test_coherent_mode_from_calibration(self, tmp_path, capsys):
        scenario = {
            "mode": "coherent",
            "modulation": dict(self.SCENARIO["modulation"], duration=0.065536),
            "calibration": {
                "eta_coh": 0.8,
                "responsivity": 0.64,
                "power": 400e-9,
                "bandwidth": 30e3,
            },
        }
        assert run(tmp_path, "mc-experiment", scenario) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["expected_snr_db"] == pytest.approx(23.914, abs=1e-3)
        assert abs(payload["estimated_snr_db"] - 22.5) < 2.0
        assert payload["n_p"] == pytest.approx(8.5e7, rel=0.01)

    def test_sample_and_periodogram_outputs(self, tmp_path, capsys):
        scenario = dict(
            self.SCENARIO,
            samples_path=str(tmp_path / "run.raw"),
            periodogram_path=str(tmp_path / "run.csv"),
        )
        assert run(tmp_path, "mc-experiment", scenario) == 0
        capsys.readouterr()
        raw = (tmp_path / "run_squeezed.raw").read_bytes()
        samples = np.frombuffer(raw, dtype="<f8")
        assert samples.size == 262144
        psd = np.genfromtxt(tmp_path / "run_coherent.csv", delimiter=",", names=True)
        assert set(psd.dtype.names) == {"frequency_hz", "power_db"}

    def test_bad_mode_rejected(self, tmp_path):
        assert run(tmp_path, "mc-experiment", dict(self.SCENARIO, mode="sideways")) == 2


class TestCalibrateSql:
    def test_report(self, tmp_path, capsys):
        scenario = {
            "calibration": {
                "eta_coh": 0.8,
                "responsivity": 0.64,
                "power": 400e-9,
                "bandwidth": 30e3,
            },
            "delta_phi": 1.7e-3,
        }
        assert run(tmp_path, "calibrate-sql", scenario) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["n_p"] == pytest.approx(85217403.9, rel=1e-6)
        assert payload["expected_coherent_snr_db"] == pytest.approx(23.914, abs=1e-3)
        assert payload["sql_variance"] == pytest.approx(1.0 / (2 * payload["n_p"]), rel=1e-12)


class TestThreadCap:
    def test_env_var_respected(self, tmp_path, monkeypatch):
        out_serial = tmp_path / "serial.csv"
        out_parallel = tmp_path / "parallel.csv"
        scenario = {"g_values": [1.0, 2.0, 3.0]}
        assert run(tmp_path, "figure2", scenario, extra=["--out", str(out_serial)]) == 0
        monkeypatch.setenv("TSUI_THREADS", "2")
        assert run(tmp_path, "figure2", scenario, extra=["--out", str(out_parallel)]) == 0
        assert out_serial.read_bytes() == out_parallel.read_bytes()

    def test_invalid_value_exits_2(self, tmp_path, monkeypatch):
        monkeypatch.setenv("TSUI_THREADS", "0")
        assert run(tmp_path, "figure2", {"g_values": [1.0]}) == 2

    def test_missing_config_file_exits_2(self, tmp_path, capsys):
        code = cli.main(["sensitivity", "--config", str(tmp_path / "nope.json")])
        assert code == 2
