import csv
import json
import math

import numpy as np
import pytest

from socbloch.cli import main


def write_config(tmp_path, **extra):
    doc = {
        "params": {"gamma": 0.3, "Gamma": 0.1, "g": 0.6, "g12": 0.2,
                   "V0": 1.0, "Nt": 5.0, "omega": 50.0, "xi": None},
        "grid": {"M": 2, "N": 256},
        "plot": False,
    }
    doc.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestExact:
    def test_writes_summary_profile_and_resolved_config(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        assert main(["exact", "--config", cfg, "--out", str(out)]) == 0
        summary = json.loads((out / "exact_summary.json").read_text())
        assert summary["Vc"] == pytest.approx(3.620526680779795, rel=1e-12)
        assert summary["spin_entropy"] == pytest.approx(0.002141806287077015, rel=1e-9)
        assert summary["imbalance"] == pytest.approx(0.474341649025, abs=1e-9)
        resolved = json.loads((out / "resolved_config.json").read_text())
        assert resolved["drive_ratio_check"]["ok"] is True
        assert resolved["params"]["xi"] == pytest.approx(50 * math.hypot(0.1, 0.3))
        header, rows = read_csv(out / "state_profile.csv")
        assert header[:4] == ["x", "V", "R1sq", "R2sq"]
        assert len(rows) == 256

    def test_profile_peak_matches_amplitude(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        main(["exact", "--config", cfg, "--out", str(out)])
        _, rows = read_csv(out / "state_profile.csv")
        r2max = max(float(r[3]) for r in rows)
        assert r2max == pytest.approx(2.8878291754873717, rel=1e-12)

    def test_depth_beyond_bound_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        code = main(["exact", "--config", cfg, "--set", "params.V0=5",
                     "--out", str(tmp_path / "o")])
        assert code == 2
        assert "lattice_depth" in capsys.readouterr().err

    def test_explicit_zero_drive_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        code = main(["exact", "--config", cfg, "--set", "params.xi=0",
                     "--out", str(tmp_path / "o")])
        assert code == 2
        assert "drive_ratio" in capsys.readouterr().err

    def test_boundary_depth_reports_zero_points(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        code = main(["exact", "--config", cfg,
                     "--set", "params.V0=3.620526680779795", "--out", str(out)])
        assert code == 0
        summary = json.loads((out / "exact_summary.json").read_text())
        assert summary["zero_density_points"]
        assert {z["component"] for z in summary["zero_density_points"]} == {2}

    def test_plot_rendered_when_enabled(self, tmp_path):
        cfg = write_config(tmp_path, plot=True)
        out = tmp_path / "out"
        assert main(["exact", "--config", cfg, "--out", str(out)]) == 0
        assert (out / "state_profile.png").exists()

    def test_env_var_overrides_out_flag(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path)
        env_out = tmp_path / "env_out"
        monkeypatch.setenv("SOCBLOCH_OUT", str(env_out))
        assert main(["exact", "--config", cfg, "--out", str(tmp_path / "flag_out")]) == 0
        assert (env_out / "exact_summary.json").exists()
        assert not (tmp_path / "flag_out").exists()


class TestEvolve:
    def test_short_run_writes_trajectory(self, tmp_path):
        cfg = write_config(tmp_path, evolve={"mode": "rwa", "T": 0.2,
                                             "sample_stride": 50})
        out = tmp_path / "out"
        assert main(["evolve", "--config", cfg, "--out", str(out)]) == 0
        header, rows = read_csv(out / "trajectory.csv")
        assert header == ["t", "norm_total", "N1", "N2", "imbalance", "energy",
                          "dev_density", "dev_state"]
        assert len(rows) == 5  # t=0 plus four sampled blocks
        meta = json.loads((out / "evolve_metadata.json").read_text())
        assert meta["mode"] == "rwa"
        assert meta["reference_supplied"] is True
        assert meta["norm_drift_max"] < 1e-12

    def test_driven_run_notes_stroboscopic_frames(self, tmp_path):
        cfg = write_config(tmp_path, evolve={"mode": "driven", "T": 0.5})
        out = tmp_path / "out"
        assert main(["evolve", "--config", cfg, "--set", "params.omega=40",
                     "--out", str(out)]) == 0
        meta = json.loads((out / "evolve_metadata.json").read_text())
        assert meta["stroboscopic"] is True
        assert "gauge" in meta["note"]
        header, rows = read_csv(out / "trajectory.csv")
        assert all(r[5] == "" for r in rows)  # no energy column in driven mode

    def test_oversized_driven_step_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, evolve={"mode": "driven", "dt": 0.01, "T": 0.5})
        assert main(["evolve", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_snapshots_written_when_requested(self, tmp_path):
        cfg = write_config(tmp_path, evolve={"mode": "rwa", "T": 0.1,
                                             "sample_stride": 50,
                                             "snapshot_every": 1})
        out = tmp_path / "out"
        assert main(["evolve", "--config", cfg, "--out", str(out)]) == 0
        snaps = sorted(out.glob("snapshot_*.csv"))
        assert len(snaps) == 3  # initial plus two samples

    def test_nonfinite_initial_state_exits_3(self, tmp_path):
        import numpy as np

        from socbloch import StateProfile, make_grid

        grid = make_grid(2, 256)
        bad = StateProfile.from_fields(
            grid.x, np.full((2, grid.N), np.nan, dtype=complex), V0=1.0
        )
        prof_path = tmp_path / "bad_profile.csv"
        bad.write_csv(prof_path)
        cfg = write_config(
            tmp_path,
            evolve={"mode": "rwa", "T": 0.05, "sample_stride": 10,
                    "initial_profile": str(prof_path)},
        )
        assert main(["evolve", "--config", cfg, "--out", str(tmp_path / "o")]) == 3

    def test_profile_round_trip_as_initial_state(self, tmp_path):
        cfg = write_config(tmp_path)
        prof_out = tmp_path / "prof"
        main(["exact", "--config", cfg, "--out", str(prof_out)])
        cfg2 = write_config(
            tmp_path,
            evolve={"mode": "rwa", "T": 0.05, "sample_stride": 50,
                    "initial_profile": str(prof_out / "state_profile.csv")},
        )
        out = tmp_path / "out"
        assert main(["evolve", "--config", cfg2, "--out", str(out)]) == 0
        header, rows = read_csv(out / "trajectory.csv")
        assert float(rows[0][1]) == pytest.approx(5.0, rel=1e-12)


class TestSweeps:
    def test_region_files_per_rabi_value(self, tmp_path):
        cfg = write_config(
            tmp_path,
            params={"gamma": 0.0, "Gamma": 0.1, "g": 0.6, "g12": 0.4,
                    "V0": 0.0, "Nt": 10.0, "omega": 50.0, "xi": None},
            sweep={"axis": "gamma", "start": 0.0, "stop": 0.6, "count": 13,
                   "Gamma_values": [0.1, 0.8, 1.4]},
        )
        out = tmp_path / "out"
        assert main(["sweep-region", "--config", cfg, "--out", str(out)]) == 0
        for G in ("0.1", "0.8", "1.4"):
            header, rows = read_csv(out / f"sweep_region_Gamma_{G}.csv")
            assert header == ["gamma", "Vc"]
            assert len(rows) == 13
        _, rows = read_csv(out / "sweep_region_Gamma_0.1.csv")
        assert float(rows[0][1]) == pytest.approx(10.0, rel=1e-14)

    def test_imbalance_endpoint_reported(self, tmp_path):
        cfg = write_config(tmp_path,
                           sweep={"axis": "gamma", "start": 0.0, "stop": 1.2,
                                  "count": 25})
        out = tmp_path / "out"
        assert main(["sweep-imbalance", "--config", cfg, "--out", str(out)]) == 0
        summary = json.loads((out / "sweep_imbalance_summary.json").read_text())
        assert summary["gamma_full_transfer"] == pytest.approx(0.99750313, abs=1e-7)
        assert summary["imbalance_at_full_transfer"] == 5.0
        header, rows = read_csv(out / "sweep_imbalance.csv")
        assert header == ["gamma", "N1", "N2", "imbalance"]
        assert rows[0] == ["0.0", "2.5", "2.5", "0.0"]
        assert rows[-1][1] == ""  # beyond the population bound

    def test_current_summary_and_flags(self, tmp_path):
        cfg = write_config(tmp_path,
                           sweep={"axis": "gamma", "start": 0.0, "stop": 0.9,
                                  "count": 10})
        out = tmp_path / "out"
        assert main(["sweep-current", "--config", cfg, "--out", str(out)]) == 0
        summary = json.loads((out / "sweep_current_summary.json").read_text())
        assert summary["gamma_zero_current"] == pytest.approx(0.86314347, abs=1e-7)
        header, rows = read_csv(out / "sweep_current.csv")
        assert header == ["gamma", "J1p", "J2p", "J1m", "J2m"]

    def test_sweep_requires_sweep_section(self, tmp_path):
        cfg = write_config(tmp_path)
        assert main(["sweep-region", "--config", cfg,
                     "--out", str(tmp_path / "o")]) == 2

    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path,
                           sweep={"axis": "gamma", "start": 0.0, "stop": 0.9,
                                  "count": 40})
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["sweep-current", "--config", cfg, "--out", str(out)]) == 0
            outs.append((out / "sweep_current.csv").read_bytes())
        assert outs[0] == outs[1]


class TestValidate:
    def test_reports_honest_residual_failures(self, tmp_path, capsys):
        cfg = write_config(tmp_path, seed=7)
        out = tmp_path / "out"
        code = main(["validate", "--config", cfg, "--out", str(out)])
        report = json.loads((out / "validation_report.json").read_text())
        # closed-form layer checks all pass; the stationary residual does not
        by_name = {}
        for check in report["checks"]:
            by_name.setdefault(check["check"], []).append(check)
        for name in ("coefficient_identities", "density_closed_form",
                     "normalization", "current_flatness"):
            assert all(c["passed"] for c in by_name[name])
        assert not any(c["passed"] for c in by_name["stationary_residual"])
        assert code == 1
        assert report["passed"] is False

    def test_seed_flag_overrides_config(self, tmp_path):
        cfg = write_config(tmp_path, seed=7)
        out = tmp_path / "out"
        main(["validate", "--config", cfg, "--seed", "11", "--out", str(out)])
        report = json.loads((out / "validation_report.json").read_text())
        assert report["seed"] == 11

    def test_low_frequency_recorded_as_warning(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "out"
        main(["validate", "--config", cfg, "--set", "params.omega=5",
              "--out", str(out)])
        report = json.loads((out / "validation_report.json").read_text())
        warn = [c for c in report["checks"]
                if c["check"] == "regime_high_frequency"]
        assert warn and not warn[0]["passed"] and warn[0]["warning"]

    def test_mu_override_perturbs_residual_check(self, tmp_path):
        cfg = write_config(tmp_path, mu_override=10.0)
        out = tmp_path / "out"
        code = main(["validate", "--config", cfg, "--out", str(out)])
        assert code == 1
        report = json.loads((out / "validation_report.json").read_text())
        configured = [c for c in report["checks"]
                      if c["check"] == "stationary_residual"
                      and c["params"] == "configured"]
        assert configured and not configured[0]["passed"]
        # wildly wrong chemical potential dominates the measured residual
        assert configured[0]["measured"] > 5.0


class TestArgumentHandling:
    def test_missing_config_file_exits_2(self, tmp_path):
        assert main(["exact", "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "o")]) == 2

    def test_malformed_json_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["exact", "--config", str(bad),
                     "--out", str(tmp_path / "o")]) == 2
