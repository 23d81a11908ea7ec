"""End-to-end acceptance checks.

Each test covers one external requirement of the synthesizer and prints a
single PASS line when it holds; run with -v for per-criterion results.
The corpus runs go through the command-line entry point so these checks
exercise the shipped artifact formats, not internal shortcuts.
"""

import csv
import json
import os
import time

import numpy as np
import pytest

from oracles import tube_resonances
from syllarc import cli
from syllarc.acoustics import AcousticConfig, extract_formants, transfer_function
from syllarc.analysis import (CLUSTER_OF, TYPE_PERTURBATION, TYPE_POST,
                              TYPE_PRE, classify_transition, fit_locus,
                              sample_formants)
from syllarc.pipeline import synthesize_cv, synthesize_vcv
from syllarc.planner import (STRAIGHT_K, TauProfile, plan_syllable)
from syllarc.tract import AreaFunction

FRONT = ["y", "oe"]
BACK = ["a", "o", "u"]


def _ok(n, detail):
    print(f"[criterion {n}] PASS: {detail}")


# ---------------------------------------------------------------- fixtures

@pytest.fixture(scope="session")
def corpus_runs(tmp_path_factory):
    """Both corpora, generated through the CLI; wall time recorded."""
    vcv_dir = tmp_path_factory.mktemp("vcv75")
    cv_dir = tmp_path_factory.mktemp("cv8")
    t0 = time.perf_counter()
    assert cli.main(["--corpus", "vcv75", "--out", str(vcv_dir)]) == 0
    assert cli.main(["--corpus", "cv8", "--out", str(cv_dir)]) == 0
    elapsed = time.perf_counter() - t0
    return {"vcv": vcv_dir, "cv": cv_dir, "elapsed": elapsed}


@pytest.fixture(scope="session")
def cv_samples(inventory, calibration, tract):
    """Release samples for the 24 CV items, grouped by resolved consonant."""
    groups = {}
    for c in cli.STOPS:
        for v in cli.CV_VOWELS:
            resolved = inventory.resolve_cv(c, v)[1].label
            result = synthesize_cv(inventory, c, v, calibration, tract,
                                   with_audio=False)
            groups.setdefault(resolved, []).append(sample_formants(result))
    return groups


@pytest.fixture(scope="session")
def straight_calls(inventory, calibration, tract):
    """Classified straight-trajectory runs for the six census items."""
    calls = {}
    for v1, v2 in (("u", "y"), ("y", "u")):
        for c in cli.STOPS:
            result = synthesize_vcv(inventory, v1, c, v2, calibration, tract,
                                    with_audio=False,
                                    k_vowel=STRAIGHT_K, k_consonant=STRAIGHT_K)
            sample = sample_formants(result)
            calls[(v1, c, v2)] = classify_transition(sample, result)
    return calls


def _read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------- criteria

def test_criterion_01_tube_resonance_oracles():
    config = AcousticConfig(radiation="none")
    t0 = time.perf_counter()

    lengths = np.full(17, 1.0)
    areas = np.full(17, 4.0)
    got = extract_formants(
        transfer_function(AreaFunction(lengths, areas), config=config), n=3)
    want = tube_resonances(lengths, areas, n=3)
    for g, w in zip(got, want):
        assert abs(g - w) / w < 0.01, (got, want)

    lengths2 = np.array([8.5, 8.5])
    areas2 = np.array([1.0, 8.0])
    got2 = extract_formants(
        transfer_function(AreaFunction(lengths2, areas2), config=config), n=3)
    want2 = tube_resonances(lengths2, areas2, n=3)
    for g, w in zip(got2, want2):
        assert abs(g - w) / w < 0.02, (got2, want2)

    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"tube checks took {elapsed:.2f}s"
    _ok(1, f"uniform within 1%, two-tube within 2%, {elapsed * 1000:.0f} ms")


def test_criterion_02_tau_kinematics():
    d = 16
    bound = 0.0
    t = np.arange(1, d + 1, dtype=float)
    for form, kappa in (("power", 0.4), ("harmonic", 0.5)):
        prof = TauProfile(form, x0=1.0, duration_frames=d, kappa=kappa)
        vals = prof(t)
        assert abs(vals[-1]) < 1e-9
        assert np.all(np.diff(vals) < 0.0)
    power = TauProfile("power", x0=1.0, duration_frames=d, kappa=0.4)
    harmonic = TauProfile("harmonic", x0=1.0, duration_frames=d, kappa=0.5)
    bound = float(np.max(np.abs(power(t) - harmonic(t))))
    assert abs(bound - 0.02026923104927869) < 1e-12
    _ok(2, f"terminal zero, monotone, form gap {bound:.6f} matches record")


def test_criterion_03_planner_geometry(inventory):
    y = inventory.get("y")
    d = inventory.get("d")
    u = inventory.get("u")

    plan = plan_syllable(y, d, u)
    assert plan.arc_vv.duration_frames == 2 * plan.arc_vc.duration_frames

    z_v, z_c = plan.transition_paths()
    assert abs(z_c[plan.t_frames - 1] - d.position) < 1e-9
    assert abs(z_v[-1] - u.position) < 1e-9

    straight = plan_syllable(y, d, u, k_vowel=STRAIGHT_K,
                             k_consonant=STRAIGHT_K)
    s_v, _ = straight.transition_paths()
    chord_start = y.position
    chord = u.position - chord_start
    unit = chord / abs(chord)
    worst = 0.0
    for z in s_v:
        s = np.clip(((z - chord_start) * np.conj(unit)).real, 0.0, abs(chord))
        worst = max(worst, abs(z - (chord_start + s * unit)))
    assert worst < 1e-3, worst
    _ok(3, f"endpoints exact, straight chord deviation {worst:.2e}")


def test_criterion_04_corpus_generation(corpus_runs):
    wavs_vcv = [f for f in os.listdir(corpus_runs["vcv"]) if f.endswith(".wav")]
    wavs_cv = [f for f in os.listdir(corpus_runs["cv"]) if f.endswith(".wav")]
    assert len(wavs_vcv) == 75
    assert len(wavs_cv) == 24

    checked = 0
    for out_dir in (corpus_runs["vcv"], corpus_runs["cv"]):
        for name in sorted(os.listdir(out_dir)):
            if not name.endswith("_formants.csv"):
                continue
            for row in _read_csv(os.path.join(out_dir, name)):
                if row["valid"] != "1":
                    continue
                f1, f2, f3 = (float(row["f1_hz"]), float(row["f2_hz"]),
                              float(row["f3_hz"]))
                assert 0.0 < f1 < f2 < f3, (name, row)
                checked += 1
    assert checked > 3000
    assert corpus_runs["elapsed"] < 120.0, corpus_runs["elapsed"]
    _ok(4, f"75+24 items, {checked} valid frames ordered F1<F2<F3, "
           f"batch {corpus_runs['elapsed']:.1f}s")


def test_criterion_05_transition_classes(corpus_runs):
    rows = _read_csv(os.path.join(corpus_runs["vcv"], "transitions.csv"))
    by_key = {}
    for row in rows:
        cluster = CLUSTER_OF[row["c"]]
        by_key[(row["v1"], cluster, row["v2"])] = row["class"]
    assert len(by_key) == 75

    for v in cli.VCV_VOWELS:
        for c in ("b", "d", "g"):
            assert by_key[(v, c, v)] == TYPE_PERTURBATION, (v, c)

    flips = 0
    for f in FRONT:
        for b in BACK:
            for c in ("b", "d", "g"):
                ab = by_key[(f, c, b)]
                ba = by_key[(b, c, f)]
                assert ab in (TYPE_POST, TYPE_PRE), (f, c, b, ab)
                assert ba in (TYPE_POST, TYPE_PRE), (b, c, f, ba)
                assert {ab, ba} == {TYPE_POST, TYPE_PRE}, \
                    f"no flip for {f}-{c}-{b} ({ab}) vs {b}-{c}-{f} ({ba})"
                flips += 1
    _ok(5, f"15 same-vowel perturbations, {flips} front/back swap pairs flip")


def test_criterion_06_straight_case_census(straight_calls):
    kinds = {k: call.kind for k, call in straight_calls.items()}
    n_a = sum(1 for kind in kinds.values() if kind == TYPE_POST)
    a_items = sorted("-".join(k) for k, kind in kinds.items()
                     if kind == TYPE_POST)
    assert n_a == 2, kinds
    _ok(6, f"exactly 2 of 6 straight items are case A: {', '.join(a_items)}")


def test_criterion_07_locus_equations(cv_samples):
    fits = {}
    for consonant, samples in sorted(cv_samples.items()):
        for offset in (0.0, 40.0):
            fit = fit_locus(samples, consonant, formant=2, offset_ms=offset)
            fits[(consonant, offset)] = fit
            assert fit.r_squared >= 0.9, \
                f"{consonant} at +{offset:.0f} ms: R^2 = {fit.r_squared:.3f}"
    slope_d = fits[("d", 0.0)].slope
    slope_b = fits[("b", 0.0)].slope
    slope_gv = fits[("g_v", 0.0)].slope
    assert slope_d < min(slope_b, slope_gv), (slope_d, slope_b, slope_gv)
    assert fits[("b", 40.0)].slope > slope_b
    detail = ", ".join(
        f"{c}@{int(o)}ms slope {fits[(c, o)].slope:.2f} R2 "
        f"{fits[(c, o)].r_squared:.3f}"
        for (c, o) in sorted(fits))
    _ok(7, detail)


def test_criterion_08_velar_labial_cluster_overlap(corpus_runs):
    rows = _read_csv(os.path.join(corpus_runs["vcv"], "lindblom.csv"))
    b_all = [float(r["f2c_hz"]) for r in rows if r["subcluster"] == "b"]
    b_u = [float(r["f2c_hz"]) for r in rows
           if r["subcluster"] == "b" and r["syllable"].endswith("-u")]
    gv_u = [float(r["f2c_hz"]) for r in rows
            if r["subcluster"] == "g_v" and r["syllable"].endswith("-u")]
    assert len(b_all) == 25 and len(b_u) == 5 and len(gv_u) == 5
    diff = abs(float(np.mean(b_u)) - float(np.mean(gv_u)))
    sd_b = float(np.std(b_all, ddof=1))
    assert diff < sd_b, (diff, sd_b)
    _ok(8, f"|F2c(b,u) - F2c(g_v,u)| = {diff:.0f} Hz < SD(b) = {sd_b:.0f} Hz")


def test_criterion_09_determinism(corpus_runs, tmp_path_factory):
    rerun = tmp_path_factory.mktemp("cv8_again")
    assert cli.main(["--corpus", "cv8", "--out", str(rerun)]) == 0
    first = json.loads(
        (corpus_runs["cv"] / "manifest.json").read_text())["artifacts"]
    second = json.loads((rerun / "manifest.json").read_text())["artifacts"]
    assert first == second
    _ok(9, f"{len(first)} artifacts byte-identical across reruns")
