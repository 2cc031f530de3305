import json
from pathlib import Path

import numpy as np
import pytest

from polbec.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(*argv):
    return main([str(a) for a in argv])


def read_json(path):
    return json.loads(Path(path).read_text())


class TestScalarRuns:
    def test_tc_outputs_and_value(self, tmp_path):
        assert run("tc", "--config", CONFIGS / "vapor.cfg", "--out", tmp_path) == 0
        report = read_json(tmp_path / "tc.json")
        assert report["ratio"] == pytest.approx(6e5, rel=0.05)
        assert report["t_c_dsp_K"] == pytest.approx(
            report["ratio"] * report["t_c_atom_K"], rel=1e-12)
        assert report["feasible"] is False
        assert (tmp_path / "manifest.json").exists()

    def test_rates_outputs(self, tmp_path):
        assert run("rates", "--config", CONFIGS / "vapor_rates.cfg",
                   "--out", tmp_path) == 0
        report = read_json(tmp_path / "rates.json")
        assert report["gamma_coll_per_s"] == pytest.approx(1e2, rel=1e-9)
        assert report["tau_s"] == pytest.approx(1e-5, rel=1e-9)
        assert report["od_required"] == pytest.approx(1000.0**0.5, rel=1e-9)
        assert report["hierarchy_ok"] is True

    def test_mass_outputs(self, tmp_path):
        assert run("mass", "--config", CONFIGS / "vapor.cfg",
                   "--out", tmp_path) == 0
        report = read_json(tmp_path / "mass.json")
        fitted = report["fitted_curvature_m2_s"]
        assert fitted["re"] == pytest.approx(
            report["curvature_closed_form_re_m2_s"], rel=1e-4)
        assert fitted["im"] < 0  # damping sign
        assert report["m_par_real_kg"] < report["m_perp_kg"]

    def test_determinism(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run("tc", "--config", CONFIGS / "vapor.cfg", "--out", a) == 0
        assert run("tc", "--config", CONFIGS / "vapor.cfg", "--out", b) == 0
        assert (a / "tc.json").read_bytes() == (b / "tc.json").read_bytes()
        ha = read_json(a / "manifest.json")["outputs"]
        hb = read_json(b / "manifest.json")["outputs"]
        assert ha == hb

    def test_manifest_hashes_match_files(self, tmp_path):
        import hashlib
        assert run("rates", "--config", CONFIGS / "vapor_rates.cfg",
                   "--out", tmp_path) == 0
        manifest = read_json(tmp_path / "manifest.json")
        assert manifest["subcommand"] == "rates"
        for entry in manifest["outputs"]:
            digest = hashlib.sha256(
                (tmp_path / entry["path"]).read_bytes()).hexdigest()
            assert digest == entry["sha256"]


class TestDispersionRun:
    def test_bands_csv_shape(self, tmp_path):
        assert run("dispersion", "--config", CONFIGS / "symmetric_bands.cfg",
                   "--out", tmp_path) == 0
        lines = (tmp_path / "bands.csv").read_text().splitlines()
        assert lines[0] == ("k,branch,re_omega,im_omega,w_e_plus,w_e_minus,"
                            "w_sigma_plus,w_sigma_minus,w_s")
        rows = [l.split(",") for l in lines[1:]]
        branches = {r[1] for r in rows}
        assert branches == {"dark", "other_1", "other_2", "other_3", "other_4"}
        # odd grid: every branch sampled the same number of times
        assert len(rows) % 5 == 0
        n_k = len(rows) // 5
        assert n_k % 2 == 1
        dark = np.array([[float(r[0]), float(r[2])] for r in rows
                         if r[1] == "dark"])
        k0_row = dark[np.argmin(np.abs(dark[:, 0]))]
        assert k0_row[1] == pytest.approx(0.0, abs=1e-6)


class TestEvolveRun:
    def test_outputs(self, tmp_path):
        assert run("evolve", "--config", CONFIGS / "vapor_evolve.cfg",
                   "--out", tmp_path) == 0
        side = read_json(tmp_path / "snapshot.json")
        raw = (tmp_path / "snapshot.bin").read_bytes()
        assert side["dtype"] == "float64"
        assert len(raw) == int(np.prod(side["shape"])) * 16
        psi = np.frombuffer(raw, dtype="<c16").reshape(side["shape"])
        assert np.all(np.isfinite(psi.view(float)))
        lines = (tmp_path / "observables.csv").read_text().splitlines()
        assert lines[0] == "time,norm,rms_width_z,peak_density"
        data = np.loadtxt(lines[1:], delimiter=",")
        assert np.all(np.diff(data[:, 0]) > 0)
        assert np.all(np.diff(data[:, 1]) <= 1e-12 * data[0, 1])  # no gain


class TestEmitRun:
    def test_outputs(self, tmp_path):
        assert run("emit", "--config", CONFIGS / "vapor_emit.cfg",
                   "--out", tmp_path) == 0
        meta = read_json(tmp_path / "emission.json")
        assert meta["t_over_t_c"] < 1.0
        assert 0.0 < meta["condensate_fraction"] < 1.0
        lines = (tmp_path / "emission.csv").read_text().splitlines()
        assert lines[0] == "x,i_total,i_thermal,i_condensate"
        data = np.loadtxt(lines[1:], delimiter=",")
        x, total = data[:, 0], data[:, 1]
        assert float(np.trapezoid(total, x)) == pytest.approx(1.0, rel=1e-6)


class TestSweeps:
    def test_tc_density_sweep(self, tmp_path):
        assert run("tc", "--config", CONFIGS / "vapor.cfg", "--out", tmp_path,
                   "--sweep", "rho_dsp=1e16:1e17:5") == 0
        lines = (tmp_path / "tc_sweep.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header[0] == "rho_dsp"
        assert "t_c_dsp_K" in header
        data = np.loadtxt(lines[1:], delimiter=",")
        assert data.shape[0] == 5
        col = header.index("t_c_dsp_K")
        assert np.all(np.diff(data[:, col]) > 0)  # T_c grows with density

    def test_sweep_unsupported_subcommand(self, tmp_path):
        code = run("dispersion", "--config", CONFIGS / "symmetric_bands.cfg",
                   "--out", tmp_path, "--sweep", "k_max=1:2:3")
        assert code == 2

    def test_bad_sweep_spec(self, tmp_path):
        code = run("tc", "--config", CONFIGS / "vapor.cfg", "--out", tmp_path,
                   "--sweep", "rho_dsp=1e16")
        assert code == 2


class TestErrorPaths:
    def test_unknown_subcommand(self, tmp_path, capsys):
        assert run("frobnicate", "--config", CONFIGS / "vapor.cfg",
                   "--out", tmp_path) == 2
        capsys.readouterr()

    def test_missing_required_key(self, tmp_path, capsys):
        code = run("rates", "--config", CONFIGS / "vapor.cfg", "--out", tmp_path)
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error_kind"] == "config"
        assert "pulse_length" in err["message"]

    def test_unknown_config_key(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text((CONFIGS / "vapor.cfg").read_text() + "frobnicate = 1\n")
        assert run("tc", "--config", bad, "--out", tmp_path / "out") == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error_kind"] == "config"
        assert "frobnicate" in err["message"]

    def test_duplicate_key_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text((CONFIGS / "vapor.cfg").read_text() + "n = 1e18\n")
        assert run("tc", "--config", bad, "--out", tmp_path / "out") == 2
        capsys.readouterr()

    def test_physics_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        text = (CONFIGS / "vapor.cfg").read_text().replace(
            "rho_dsp = 1e+17", "rho_dsp = 2e+18")
        bad.write_text(text)
        assert run("tc", "--config", bad, "--out", tmp_path / "out") == 3
        err = json.loads(capsys.readouterr().err)
        assert err["error_kind"] == "physics"

    def test_numerics_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text((CONFIGS / "vapor.cfg").read_text()
                       + "fit_max_residual = 1e-9\n")
        assert run("mass", "--config", bad, "--out", tmp_path / "out") == 4
        err = json.loads(capsys.readouterr().err)
        assert err["error_kind"] == "numerics"

    def test_missing_config_file(self, tmp_path, capsys):
        assert run("tc", "--config", tmp_path / "absent.cfg",
                   "--out", tmp_path) == 2
        capsys.readouterr()
