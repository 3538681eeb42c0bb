import json

import numpy as np
import pytest

from losmimo.cli import main

SCENE = """{
  "carrier_hz": 300e9,
  "distance_m": 5.0,
  "model": "spherical",
  "snr_db": 10.0,
  "tx": {"type": "ula", "n": 4, "spacing_m": 0.035},
  "rx": {"type": "ula", "n": 4, "spacing_m": 0.035}
}
"""

AOSA_SCENE = """{
  "carrier_hz": 300e9,
  "distance_m": 10.0,
  "model": "fresnel",
  "tx": {"type": "aosa", "n": 4, "n_subarrays": 2, "spacing_m": 0.0707},
  "rx": {"type": "aosa", "n": 4, "n_subarrays": 2, "spacing_m": 0.0707}
}
"""


@pytest.fixture
def scene_path(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(SCENE)
    return str(path)


@pytest.fixture
def aosa_path(tmp_path):
    path = tmp_path / "aosa.json"
    path.write_text(AOSA_SCENE)
    return str(path)


def test_channel_csv_with_json_sidecar(scene_path, tmp_path):
    out = tmp_path / "h.csv"
    assert main(["channel", scene_path, "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,m,re,im"
    assert len(lines) == 17
    meta = json.loads((tmp_path / "h.csv.json").read_text())
    assert meta["n_r"] == 4 and meta["n_t"] == 4
    assert meta["model"] == "spherical"
    assert meta["wavelength_m"] == pytest.approx(299792458.0 / 300e9)


def test_channel_json_round_trip(scene_path, capsys):
    assert main(["channel", scene_path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    re = np.array(doc["re"])
    im = np.array(doc["im"])
    assert re.shape == (4, 4)
    np.testing.assert_allclose(np.hypot(re, im), 1.0, atol=1e-12)


def test_channel_output_is_byte_deterministic(scene_path, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["channel", scene_path, "--out", str(a)])
    main(["channel", scene_path, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_capacity_uses_config_snr_and_flag_overrides(scene_path, capsys):
    assert main(["capacity", scene_path]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "snr_db,se_bpshz,ub_bpshz,active_rank,allocation"
    assert len(out.strip().splitlines()) == 2  # config scalar snr

    assert main(["capacity", scene_path, "--snr-db", "0,5,10"]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().splitlines()) == 4


def test_capacity_requires_some_snr(tmp_path, capsys):
    path = tmp_path / "nosnr.json"
    path.write_text(SCENE.replace('"snr_db": 10.0,', ""))
    assert main(["capacity", str(path)]) == 2
    assert "SNR" in capsys.readouterr().err


def test_capacity_json_reports(scene_path, capsys):
    assert main(["capacity", scene_path, "--format", "json"]) == 0
    docs = json.loads(capsys.readouterr().out)
    assert len(docs) == 1
    assert docs[0]["snr_db"] == 10.0
    assert set(docs[0]) == {"snr_db", "se_bpshz", "ub_bpshz", "active_rank", "allocation"}
    assert sum(docs[0]["allocation"]) == pytest.approx(1.0, abs=1e-12)


def test_sweep_grid_syntax(scene_path, capsys):
    assert main(["sweep", scene_path, "--var", "snr", "--grid", "0:5:10"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("x_value,")
    assert [ln.split(",")[0] for ln in lines[1:]] == ["0", "5", "10"]

    assert main(["sweep", scene_path, "--var", "snr", "--grid=-10,0,10"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert [ln.split(",")[0] for ln in lines[1:]] == ["-10", "0", "10"]


def test_sweep_rejects_bad_grids(scene_path, capsys):
    assert main(["sweep", scene_path, "--var", "snr", "--grid", "0:0:10"]) == 2
    capsys.readouterr()
    assert main(["sweep", scene_path, "--var", "snr", "--grid", "5:1:0"]) == 2
    capsys.readouterr()
    assert main(["sweep", scene_path, "--var", "snr", "--grid", "1,1,2"]) == 2
    capsys.readouterr()
    assert main(["sweep", scene_path, "--var", "snr", "--grid", "abc"]) == 2


def test_sweep_eta_fixed_snr_from_config(scene_path, capsys):
    assert main(["sweep", scene_path, "--var", "eta", "--grid", "0.5,1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert all(ln.split(",")[1] == "10" for ln in lines[1:])


def test_sweep_json_format(scene_path, capsys):
    assert main(
        ["sweep", scene_path, "--var", "snr", "--grid", "0,10", "--format", "json"]
    ) == 0
    docs = json.loads(capsys.readouterr().out)
    assert len(docs) == 2
    assert docs[0]["config_descriptor"] == "snr_db=0"


def test_sweep_rotation_on_uca_is_incompatible(tmp_path, capsys):
    path = tmp_path / "uca.json"
    path.write_text(
        SCENE.replace(
            '{"type": "ula", "n": 4, "spacing_m": 0.035}',
            '{"type": "uca", "n": 4, "diameter_m": 0.1}',
        )
    )
    code = main(["sweep", str(path), "--var", "rotation", "--grid", "0:0.1:0.5"])
    assert code == 4


def test_optimize_rotation_json(scene_path, capsys):
    assert main(
        ["optimize", scene_path, "--mode", "rotation", "--format", "json"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"angle_rad", "report"}
    assert 0.0 <= doc["angle_rad"] <= np.pi / 2


def test_optimize_aosa_plan(aosa_path, capsys):
    assert main(
        ["optimize", aosa_path, "--mode", "aosa", "--snr-grid=-6:3:6"]
    ) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "x_value,snr_db,se_bpshz,ub_bpshz,active_rank,config_descriptor"
    assert len(lines) == 6
    assert all("aosa_r=" in ln for ln in lines[1:])


def test_optimize_aosa_needs_aosa_config(scene_path, capsys):
    assert main(["optimize", scene_path, "--mode", "aosa", "--snr-grid", "0"]) == 4


def test_optimize_aosa_needs_snr_grid(aosa_path, capsys):
    assert main(["optimize", aosa_path, "--mode", "aosa"]) == 2


def test_optimize_angles_reports_gap(scene_path, capsys):
    assert main(
        [
            "optimize",
            scene_path,
            "--mode",
            "angles",
            "--k",
            "2",
            "--snr-grid=-10:10:10",
            "--format",
            "json",
        ]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["angles_rad"]) == 2
    assert doc["worst_case_gap"] >= 0.0
    assert len(doc["plan"]) == 3


def test_validity_map(capsys):
    code = main(
        [
            "validity",
            "--freq-grid",
            "100e9,300e9",
            "--dist-grid",
            "1,100",
            "--tx-aperture",
            "0.5",
            "--rx-aperture",
            "0.5",
        ]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "freq_hz,dist_m,regime"
    assert len(lines) == 5
    # 0.25 >= 4*lambda*d at (300 GHz, 1 m) -> spherical; far away -> planar
    row = dict()
    for ln in lines[1:]:
        f, d, regime = ln.split(",")
        row[(float(f), float(d))] = regime
    assert row[(300e9, 1.0)] == "spherical"
    assert row[(100e9, 100.0)] == "planar"


def test_validity_rejects_bad_apertures(capsys):
    code = main(
        [
            "validity",
            "--freq-grid",
            "100e9",
            "--dist-grid",
            "1",
            "--tx-aperture",
            "0",
            "--rx-aperture",
            "0.5",
        ]
    )
    assert code == 2


def test_phase_profile_transverse_summary(tmp_path, capsys):
    out = tmp_path / "prof.csv"
    code = main(
        [
            "phase-profile",
            "--freq",
            "300e9",
            "--distance",
            "1.8",
            "--steps",
            "300",
            "--step-size",
            "1e-3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "displacement_m,phase_rad,quadratic_fit_rad,linear_fit_rad"
    assert len(lines) == 301
    summary = json.loads((tmp_path / "prof.csv.json").read_text())
    assert set(summary) == {"c2_fitted", "c2_predicted", "r2_quadratic", "r2_linear"}
    assert summary["c2_fitted"] == pytest.approx(summary["c2_predicted"], rel=0.01)


def test_phase_profile_longitudinal_aliases_at_coarse_step(capsys):
    code = main(
        [
            "phase-profile",
            "--freq",
            "300e9",
            "--distance",
            "1.8",
            "--steps",
            "11",
            "--step-size",
            "1e-3",
            "--direction",
            "longitudinal",
        ]
    )
    assert code == 5
    assert "step 0" in capsys.readouterr().err


def test_phase_profile_rejects_too_few_steps(capsys):
    code = main(
        [
            "phase-profile",
            "--freq",
            "300e9",
            "--distance",
            "1.8",
            "--steps",
            "2",
            "--step-size",
            "1e-4",
        ]
    )
    assert code == 2


def test_phase_profile_json_embeds_samples(capsys):
    code = main(
        [
            "phase-profile",
            "--freq",
            "300e9",
            "--distance",
            "1.8",
            "--steps",
            "21",
            "--step-size",
            "2e-4",
            "--direction",
            "longitudinal",
            "--format",
            "json",
        ]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["c2_predicted"] == 0.0
    assert len(doc["samples"]["phase_rad"]) == 21


def test_unknown_command_and_missing_args_exit_2(capsys):
    assert main([]) == 2
    capsys.readouterr()
    assert main(["frobnicate"]) == 2
    capsys.readouterr()
    assert main(["sweep"]) == 2


def test_version_flag_exits_zero(capsys):
    assert main(["--version"]) == 0
    assert "losmimo" in capsys.readouterr().out


def test_missing_config_file_exits_2(capsys):
    assert main(["channel", "/nonexistent/scene.json"]) == 2


def test_sweep_output_is_byte_deterministic(scene_path, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", scene_path, "--var", "eta", "--grid", "0.2:0.2:1.4"]
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
