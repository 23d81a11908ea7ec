"""Command-line runner.

Synthesizes a single syllable or one of the two built-in corpora and writes
all artifacts (audio, per-frame formant tables, corpus-level summaries, and a
checksum manifest) into the output directory.  Runs are deterministic: the
same invocation produces byte-identical artifacts.
"""

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import acoustics, analysis, planner
from .articulator import load_calibration
from .errors import ConfigError, SyllarcError
from .inventory import PARAM_NAMES, load_inventory
from .pipeline import synthesize_cv, synthesize_vcv
from .tract import load_tract_model

VCV_VOWELS = ["y", "oe", "a", "o", "u"]
CV_VOWELS = ["a", "o", "u", "y", "ao", "eh", "e", "i"]
STOPS = ["b", "d", "g"]

ASSETS_ENV = "SYLLARC_ASSETS"

# worker-process state, set once per process by _init_worker
_WORKER = {}


def build_parser():
    p = argparse.ArgumentParser(
        prog="syllarc",
        description="Synthesize stop-vowel syllables from polar plans and "
                    "export audio plus formant analyses.")
    p.add_argument("--corpus", choices=["vcv75", "cv8", "single"],
                   required=True, help="what to synthesize")
    p.add_argument("--syllable",
                   help="item for --corpus single: V1-C-V2 (e.g. y-d-u) "
                        "or C-V (e.g. d-u)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--calibration", help="alternate calibration file")
    p.add_argument("--frames", type=int, default=planner.DEFAULT_T_FRAMES,
                   help="transition half-length T in frames")
    p.add_argument("--k-vowel", type=float, default=planner.DEFAULT_K_VOWEL,
                   help="vocalic arc stiffness")
    p.add_argument("--k-consonant", type=float,
                   default=planner.DEFAULT_K_CONSONANT,
                   help="consonantal arc stiffness")
    p.add_argument("--straight", action="store_true",
                   help="force straight chords on both streams")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for corpus runs")
    return p


def _asset_path(name, explicit=None):
    if explicit:
        return explicit
    root = os.environ.get(ASSETS_ENV)
    if root:
        return os.path.join(root, name)
    return None


def _load_assets(args):
    inventory = load_inventory(_asset_path("inventory.txt"))
    calibration = load_calibration(
        _asset_path("calibration.txt", args.calibration))
    tract = load_tract_model(_asset_path("tract_model.txt"))
    return inventory, calibration, tract


def _plan_kwargs(args):
    kw = {"t_frames": args.frames,
          "k_vowel": args.k_vowel,
          "k_consonant": args.k_consonant}
    if args.straight:
        kw["k_vowel"] = planner.STRAIGHT_K
        kw["k_consonant"] = planner.STRAIGHT_K
    return kw


def corpus_items(corpus):
    """Ordered (kind, labels) work list for a corpus name."""
    items = []
    if corpus == "vcv75":
        for v1 in VCV_VOWELS:
            for c in STOPS:
                for v2 in VCV_VOWELS:
                    items.append(("vcv", (v1, c, v2)))
    elif corpus == "cv8":
        for c in STOPS:
            for v in CV_VOWELS:
                items.append(("cv", (c, v)))
    else:
        raise ConfigError(f"unknown corpus {corpus!r}")
    return items


def _init_worker(calibration_path, plan_kwargs):
    _WORKER["inventory"] = load_inventory(_asset_path("inventory.txt"))
    _WORKER["calibration"] = load_calibration(
        _asset_path("calibration.txt", calibration_path))
    _WORKER["tract"] = load_tract_model(_asset_path("tract_model.txt"))
    _WORKER["plan_kwargs"] = plan_kwargs
    _WORKER["config"] = acoustics.AcousticConfig()


def _run_item(job):
    """Synthesize one item and write its per-item artifacts.

    Returns the pieces the parent needs for corpus tables, keyed so the
    parent can aggregate in a deterministic order.
    """
    kind, labels, out_dir = job
    inv = _WORKER["inventory"]
    cal = _WORKER["calibration"]
    tract = _WORKER["tract"]
    kw = _WORKER["plan_kwargs"]
    config = _WORKER["config"]

    if kind == "vcv":
        v1, c, v2 = labels
        result = synthesize_vcv(inv, v1, c, v2, cal, tract, config, **kw)
    else:
        c, v = labels
        result = synthesize_cv(inv, c, v, cal, tract, config, **kw)

    sid = result.syllable_id
    acoustics.write_wav(os.path.join(out_dir, f"{sid}.wav"), result.rendered)
    analysis.write_formant_csv(
        os.path.join(out_dir, f"{sid}_formants.csv"), result.formants)

    sample = analysis.sample_formants(result)
    call = analysis.classify_transition(sample, result) if kind == "vcv" else None
    return sid, sample, call


def _write_manifest(out_dir, meta):
    names = []
    for base, _, files in os.walk(out_dir):
        for f in files:
            if f == "manifest.json":
                continue
            rel = os.path.relpath(os.path.join(base, f), out_dir)
            names.append(rel)
    artifacts = {}
    for rel in sorted(names):
        with open(os.path.join(out_dir, rel), "rb") as fh:
            artifacts[rel] = hashlib.sha256(fh.read()).hexdigest()
    doc = {"run": meta, "artifacts": artifacts}
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def run_corpus(args):
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    kw = _plan_kwargs(args)
    items = corpus_items(args.corpus)
    jobs = [(kind, labels, out_dir) for kind, labels in items]

    if args.jobs > 1:
        with ProcessPoolExecutor(
                max_workers=args.jobs,
                initializer=_init_worker,
                initargs=(args.calibration, kw)) as pool:
            results = list(pool.map(_run_item, jobs))
    else:
        _init_worker(args.calibration, kw)
        results = [_run_item(j) for j in jobs]

    results.sort(key=lambda r: r[0])
    samples = [r[1] for r in results]
    calls = [r[2] for r in results if r[2] is not None]

    if args.corpus == "vcv75":
        inv = load_inventory(_asset_path("inventory.txt"))
        expected = [
            "-".join((v1, inv.resolve_vcv(v1, c, v2)[1].label, v2))
            for v1 in VCV_VOWELS for c in STOPS for v2 in VCV_VOWELS]
        rows = analysis.lindblom_rows(samples, expected=expected)
        analysis.write_lindblom_csv(os.path.join(out_dir, "lindblom.csv"), rows)
        analysis.write_transitions_csv(
            os.path.join(out_dir, "transitions.csv"), calls)
    elif args.corpus == "cv8":
        present = sorted({s.c for s in samples})
        for c in present:
            for dt in (0.0, analysis.FLANK_MS):
                analysis.write_locus_csv(
                    os.path.join(out_dir, f"locus_{c}_{int(dt)}.csv"),
                    samples, c, dt)

    meta = {
        "corpus": args.corpus,
        "frames": args.frames,
        "items": len(results),
        "k_consonant": kw["k_consonant"],
        "k_vowel": kw["k_vowel"],
        "straight": bool(args.straight),
    }
    _write_manifest(out_dir, meta)
    return 0


def _parse_single_label(text):
    if not text:
        raise ConfigError("--corpus single requires --syllable")
    parts = text.split("-")
    if len(parts) == 3:
        return "vcv", tuple(parts)
    if len(parts) == 2:
        return "cv", tuple(parts)
    raise ConfigError(f"cannot parse syllable {text!r}; "
                      "expected V1-C-V2 or C-V")


def run_single(args):
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    inventory, calibration, tract = _load_assets(args)
    kw = _plan_kwargs(args)
    config = acoustics.AcousticConfig()

    kind, labels = _parse_single_label(args.syllable)
    if kind == "vcv":
        v1, c, v2 = labels
        result = synthesize_vcv(inventory, v1, c, v2, calibration, tract,
                                config, **kw)
    else:
        c, v = labels
        result = synthesize_cv(inventory, c, v, calibration, tract,
                               config, **kw)

    sid = result.syllable_id
    acoustics.write_wav(os.path.join(out_dir, f"{sid}.wav"), result.rendered)
    analysis.write_formant_csv(
        os.path.join(out_dir, f"{sid}_formants.csv"), result.formants)
    _write_trajectories(os.path.join(out_dir, f"{sid}_trajectories.csv"), result)
    _write_params(os.path.join(out_dir, f"{sid}_params.csv"), result)
    _write_plan_json(os.path.join(out_dir, f"{sid}_plan.json"), result, kw)
    _write_spectrogram(os.path.join(out_dir, f"{sid}_spectrogram.csv"), result)

    meta = {
        "corpus": "single",
        "frames": args.frames,
        "items": 1,
        "k_consonant": kw["k_consonant"],
        "k_vowel": kw["k_vowel"],
        "straight": bool(args.straight),
        "syllable": sid,
    }
    _write_manifest(out_dir, meta)
    return 0


def _write_trajectories(path, result):
    z_v, z_c = result.plan.full_paths()
    with open(path, "w") as fh:
        fh.write("frame,zv_re,zv_im,zc_re,zc_im\n")
        for i in range(z_v.size):
            fh.write(f"{i},{z_v[i].real:.6f},{z_v[i].imag:.6f},"
                     f"{z_c[i].real:.6f},{z_c[i].imag:.6f}\n")


def _write_params(path, result):
    names = PARAM_NAMES
    vals = result.params.values
    with open(path, "w") as fh:
        fh.write("frame," + ",".join(names) + "\n")
        for i in range(vals.shape[0]):
            fh.write(str(i) + ","
                     + ",".join(f"{v:.6f}" for v in vals[i]) + "\n")


def _write_plan_json(path, result, kw):
    plan = result.plan
    v1, c, v2 = plan.syllable
    doc = {
        "syllable": {"v1": v1, "c": c, "v2": v2},
        "t_frames": plan.t_frames,
        "pad_frames": plan.pad_frames,
        "n_frames": plan.n_frames,
        "frame_ms": plan.frame_ms,
        "onset_center_index": plan.onset_center_index,
        "k_vowel": kw["k_vowel"],
        "k_consonant": kw["k_consonant"],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_spectrogram(path, result):
    grid = acoustics.spectrogram(result.rendered.samples,
                                 result.rendered.sample_rate)
    with open(path, "w") as fh:
        fh.write("time_ms," + ",".join(f"{f:.1f}" for f in grid.freqs_hz) + "\n")
        for i, t in enumerate(grid.times_ms):
            fh.write(f"{t:.2f},"
                     + ",".join(f"{m:.2f}" for m in grid.mag_db[i]) + "\n")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if args.frames < 2:
            raise ConfigError("--frames must be at least 2")
        if args.corpus == "single":
            return run_single(args)
        if args.syllable:
            raise ConfigError("--syllable only applies to --corpus single")
        return run_corpus(args)
    except SyllarcError as err:
        print(f"syllarc: {err}", file=sys.stderr)
        return getattr(err, "exit_code", 4)


if __name__ == "__main__":
    sys.exit(main())
