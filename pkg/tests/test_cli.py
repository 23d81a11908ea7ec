import json
import os

import pytest

from syllarc import cli


def _run(args):
    return cli.main(args)


def test_single_vcv_artifacts(tmp_path):
    out = tmp_path / "run"
    code = _run(["--corpus", "single", "--syllable", "y-d-u",
                 "--out", str(out)])
    assert code == 0
    names = sorted(os.listdir(out))
    assert names == [
        "manifest.json",
        "y-d-u.wav",
        "y-d-u_formants.csv",
        "y-d-u_params.csv",
        "y-d-u_plan.json",
        "y-d-u_spectrogram.csv",
        "y-d-u_trajectories.csv",
    ]
    doc = json.loads((out / "manifest.json").read_text())
    assert doc["run"]["corpus"] == "single"
    assert doc["run"]["syllable"] == "y-d-u"
    assert set(doc["artifacts"]) == set(names) - {"manifest.json"}
    assert all(len(h) == 64 for h in doc["artifacts"].values())

    plan = json.loads((out / "y-d-u_plan.json").read_text())
    assert plan["syllable"] == {"v1": "y", "c": "d", "v2": "u"}
    assert plan["n_frames"] == 52
    assert plan["onset_center_index"] == 25


def test_single_cv_routes_velar(tmp_path):
    out = tmp_path / "run"
    code = _run(["--corpus", "single", "--syllable", "g-u", "--out", str(out)])
    assert code == 0
    assert (out / "g_v-u.wav").exists()
    code = _run(["--corpus", "single", "--syllable", "g-i", "--out", str(out)])
    assert code == 0
    assert (out / "g_p-i.wav").exists()


def test_single_run_is_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert _run(["--corpus", "single", "--syllable", "a-b-y",
                 "--out", str(a)]) == 0
    assert _run(["--corpus", "single", "--syllable", "a-b-y",
                 "--out", str(b)]) == 0
    assert (a / "manifest.json").read_text() == (b / "manifest.json").read_text()
    assert (a / "a-b-y.wav").read_bytes() == (b / "a-b-y.wav").read_bytes()


def test_straight_flag_changes_audio(tmp_path):
    curved = tmp_path / "curved"
    straight = tmp_path / "straight"
    assert _run(["--corpus", "single", "--syllable", "y-d-u",
                 "--out", str(curved)]) == 0
    assert _run(["--corpus", "single", "--syllable", "y-d-u", "--straight",
                 "--out", str(straight)]) == 0
    a = json.loads((curved / "manifest.json").read_text())["artifacts"]
    b = json.loads((straight / "manifest.json").read_text())["artifacts"]
    assert a["y-d-u.wav"] != b["y-d-u.wav"]


def test_missing_syllable_is_config_error(tmp_path):
    assert _run(["--corpus", "single", "--out", str(tmp_path / "x")]) == 2


def test_syllable_with_corpus_is_config_error(tmp_path):
    assert _run(["--corpus", "vcv75", "--syllable", "y-d-u",
                 "--out", str(tmp_path / "x")]) == 2


def test_bad_syllable_shape_is_config_error(tmp_path):
    assert _run(["--corpus", "single", "--syllable", "y-d-u-o",
                 "--out", str(tmp_path / "x")]) == 2
    assert _run(["--corpus", "single", "--syllable", "nope",
                 "--out", str(tmp_path / "x")]) == 2


def test_unknown_label_is_data_error(tmp_path):
    assert _run(["--corpus", "single", "--syllable", "q-d-u",
                 "--out", str(tmp_path / "x")]) == 3


def test_missing_assets_dir_is_data_error(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ASSETS_ENV, str(tmp_path / "empty"))
    assert _run(["--corpus", "single", "--syllable", "y-d-u",
                 "--out", str(tmp_path / "x")]) == 3


def test_always_occluded_calibration_is_pipeline_error(tmp_path):
    cal = tmp_path / "cal.txt"
    cal.write_text(
        "version 1\n"
        "omega 0.0 0.0 0.0 0.0 0.0 -3.0 0.0\n"
        "psi jaw 0.0 0.0\npsi body 0.0 0.0\npsi dorsum 0.0 0.0\n"
        "psi tip 0.0 0.0\npsi lipp 0.0 0.0\npsi liph 0.0 0.0\n"
        "psi hy 0.0 0.0\n"
        "articulators b 1,2,6\narticulators d 1,2,3,4\n"
        "articulators g_p 1,2,3,4\narticulators g_v 1,2,3,4\n")
    code = _run(["--corpus", "single", "--syllable", "y-d-u",
                 "--calibration", str(cal), "--out", str(tmp_path / "x")])
    assert code == 4


def test_jobs_validation(tmp_path):
    assert _run(["--corpus", "cv8", "--jobs", "0",
                 "--out", str(tmp_path / "x")]) == 2
