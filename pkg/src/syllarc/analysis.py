"""Measurements taken on synthesized syllables: skeleton formant samples
around the closure, locus regressions, transition typing, and the flat CSV
tables the command-line runner writes.

All sampling is expressed in frames relative to the consonant junction so the
same code serves both full V1-C-V2 items and reduced-onset CV items.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import CompletenessError, FitError, SamplingError

# offset of the flanking samples, in milliseconds on either side of the
# consonant junction
FLANK_MS = 40.0

# transition typing thresholds
PERTURBATION_MAX_HZ = 150.0
DOMINANCE_SHARE = 0.6

TYPE_POST = "A"           # movement concentrated after the closure
TYPE_PRE = "B"            # movement concentrated before the closure
TYPE_PERTURBATION = "perturbation"


@dataclass(frozen=True)
class FormantSample:
    """Skeleton measurements for one syllable.

    Five sampling points per formant: V1 steady state, the flank one
    FLANK_MS before the junction, the last valid frame entering the
    closure, the first valid frame leaving it, the flank one FLANK_MS
    after the junction, and the V2 steady state.
    """

    syllable_id: str
    v1: str
    c: str
    v2: str
    is_cv: bool
    f2_v1: float
    f2_pre: float
    f2_enter: float
    f2_exit: float
    f2_post: float
    f2_v2: float
    f3_v1: float
    f3_pre: float
    f3_enter: float
    f3_exit: float
    f3_post: float
    f3_v2: float
    pre_frame: int
    enter_frame: int
    exit_frame: int
    post_frame: int

    def release_f2(self):
        """F2 at the junction: entering edge for VCV, leaving edge for CV."""
        return self.f2_exit if self.is_cv else self.f2_enter

    def release_f3(self):
        return self.f3_exit if self.is_cv else self.f3_enter

    def flank_f2(self, side):
        if side not in (-1, +1):
            raise ValueError("side must be -1 or +1")
        return self.f2_post if side > 0 else self.f2_pre

    def flank_f3(self, side):
        if side not in (-1, +1):
            raise ValueError("side must be -1 or +1")
        return self.f3_post if side > 0 else self.f3_pre


def _steady(track, frames_idx, col, what):
    vals = track.frames[frames_idx, col]
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        raise SamplingError(f"no valid frames in the {what} steady span")
    return float(np.median(vals))


def _nearest_valid(track, target, away, what):
    """target frame if valid, else one frame to either side, outward first."""
    for idx in (target, target + away, target - away):
        if 0 <= idx < track.n_frames and track.valid[idx]:
            return idx
    raise SamplingError(f"no valid frame within 1 of frame {target} ({what})")


def sample_formants(result):
    """Measure the formant skeleton of one synthesized syllable."""
    track = result.formants
    plan = result.plan
    pad = plan.pad_frames
    center = plan.onset_center_index
    flank = int(round(FLANK_MS / plan.frame_ms))
    n = track.n_frames

    interval = result.closure_interval()
    if interval is None:
        raise SamplingError(
            f"{result.syllable_id}: no closure; junction samples undefined")
    first_closed, last_closed = interval

    enter = None
    for idx in range(first_closed - 1, -1, -1):
        if track.valid[idx]:
            enter = idx
            break
    exit_ = None
    for idx in range(last_closed + 1, n):
        if track.valid[idx]:
            exit_ = idx
            break
    if enter is None or exit_ is None:
        raise SamplingError(
            f"{result.syllable_id}: no valid frame flanking the closure")

    pre = _nearest_valid(track, center - flank, -1, "pre flank")
    post = _nearest_valid(track, center + flank, +1, "post flank")

    v1l, cl, v2l = plan.syllable
    is_cv = v1l.endswith("_red")
    f2 = track.formant(2)
    f3 = track.formant(3)
    lead = np.arange(0, pad)
    trail = np.arange(n - pad, n)

    return FormantSample(
        syllable_id=result.syllable_id,
        v1=v1l, c=cl, v2=v2l, is_cv=is_cv,
        f2_v1=_steady(track, lead, 1, "leading"),
        f2_pre=float(f2[pre]),
        f2_enter=float(f2[enter]),
        f2_exit=float(f2[exit_]),
        f2_post=float(f2[post]),
        f2_v2=_steady(track, trail, 1, "trailing"),
        f3_v1=_steady(track, lead, 2, "leading"),
        f3_pre=float(f3[pre]),
        f3_enter=float(f3[enter]),
        f3_exit=float(f3[exit_]),
        f3_post=float(f3[post]),
        f3_v2=_steady(track, trail, 2, "trailing"),
        pre_frame=pre, enter_frame=enter, exit_frame=exit_, post_frame=post,
    )


@dataclass(frozen=True)
class LocusFit:
    """Least-squares line through (vowel target, junction sample) pairs."""

    consonant: str
    formant: int
    offset_ms: float
    slope: float
    intercept: float
    r_squared: float
    n_points: int


def fit_locus(samples, consonant, formant=2, offset_ms=0.0):
    """Fit one locus line for a consonant over its sampled syllables.

    x is the V2 steady-state frequency; y is the junction sample at the
    requested offset (0 ms: the closure-edge frame; FLANK_MS: the flank).
    """
    xs, ys = [], []
    for s in samples:
        if s.c != consonant:
            continue
        if formant == 2:
            x = s.f2_v2
            y = s.release_f2() if offset_ms == 0.0 else s.flank_f2(+1)
        elif formant == 3:
            x = s.f3_v2
            y = s.release_f3() if offset_ms == 0.0 else s.flank_f3(+1)
        else:
            raise FitError(f"locus fits cover formants 2 and 3, not {formant}")
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise FitError(f"{consonant}: {len(xs)} samples; need at least 2")
    x = np.asarray(xs)
    y = np.asarray(ys)
    if np.ptp(x) < 1e-9:
        raise FitError(f"{consonant}: degenerate fit, no variance in x")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot < 1e-12 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return LocusFit(consonant=consonant, formant=formant, offset_ms=offset_ms,
                    slope=float(slope), intercept=float(intercept),
                    r_squared=r2, n_points=len(xs))


@dataclass(frozen=True)
class TransitionCall:
    """Typing of one V1-C-V2 item's second-formant movement."""

    syllable_id: str
    v1: str
    c: str
    v2: str
    kind: str                 # TYPE_POST, TYPE_PRE, or TYPE_PERTURBATION
    magnitude_hz: float       # signed V2 - V1 steady-state difference
    pre_share: float
    post_share: float
    inflection_frame: int


def classify_transition(sample, result=None):
    """Type a syllable's F2 movement.

    Near-equal vowel targets make the consonant a local perturbation; a
    clearly moving F2 is typed by where the movement is realized: mostly
    after the closure (A) or mostly before it (B).
    """
    magnitude = sample.f2_v2 - sample.f2_v1
    pre = abs(sample.f2_enter - sample.f2_v1)
    post = abs(sample.f2_v2 - sample.f2_exit)
    denom = pre + post
    pre_share = 0.5 if denom <= 0.0 else pre / denom
    post_share = 1.0 - pre_share

    if abs(magnitude) < PERTURBATION_MAX_HZ:
        kind = TYPE_PERTURBATION
    elif post_share >= DOMINANCE_SHARE:
        kind = TYPE_POST
    elif pre_share >= DOMINANCE_SHARE:
        kind = TYPE_PRE
    else:
        kind = TYPE_POST if post_share >= pre_share else TYPE_PRE

    inflection = -1
    if result is not None:
        f2 = result.formants.formant(2)
        valid = result.formants.valid
        best = -1.0
        prev = None
        for idx in range(f2.size):
            if not valid[idx]:
                continue
            if prev is not None:
                step = abs(f2[idx] - f2[prev])
                if step > best:
                    best = step
                    inflection = idx
            prev = idx

    return TransitionCall(
        syllable_id=sample.syllable_id, v1=sample.v1, c=sample.c, v2=sample.v2,
        kind=kind, magnitude_hz=float(magnitude),
        pre_share=pre_share, post_share=post_share,
        inflection_frame=inflection)


# ---------------------------------------------------------------------------
# corpus-level tables

CLUSTER_OF = {"b": "b", "d": "d", "g_p": "g", "g_v": "g"}


def lindblom_rows(samples, expected=None):
    """Per-item rows for the vowel-target versus junction-sample scatter.

    One row per V1-C-V2 item: the V2 steady state paired with the flank
    sample FLANK_MS after the junction, grouped by consonant cluster.
    """
    rows = []
    seen = set()
    for s in sorted(samples, key=lambda s: s.syllable_id):
        if s.c not in CLUSTER_OF:
            continue
        rows.append({
            "syllable": s.syllable_id,
            "cluster": CLUSTER_OF[s.c],
            "subcluster": s.c,
            "f2v_hz": s.f2_v2,
            "f2c_hz": s.f2_post,
            "f3c_hz": s.f3_post,
        })
        seen.add(s.syllable_id)
    if expected is not None:
        missing = sorted(set(expected) - seen)
        if missing:
            raise CompletenessError(
                f"{len(missing)} items missing from the grid: "
                + ", ".join(missing[:8])
                + ("..." if len(missing) > 8 else ""))
    return rows


def write_formant_csv(path, track):
    """Per-frame formant table for one item."""
    times = track.times_ms()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time_ms", "f1_hz", "f2_hz", "f3_hz", "valid"])
        for i in range(track.n_frames):
            f1, f2, f3 = (track.frames[i, k] for k in range(3))
            w.writerow([f"{times[i]:.1f}",
                        _num(f1), _num(f2), _num(f3),
                        int(bool(track.valid[i]))])


def write_locus_csv(path, samples, consonant, offset_ms):
    """Scatter points behind one locus fit."""
    rows = [s for s in sorted(samples, key=lambda s: s.syllable_id)
            if s.c == consonant]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["vowel", "f2v_hz", "f2c_hz", "f3v_hz", "f3c_hz"])
        for s in rows:
            f2c = s.release_f2() if offset_ms == 0.0 else s.flank_f2(+1)
            f3c = s.release_f3() if offset_ms == 0.0 else s.flank_f3(+1)
            w.writerow([s.v2, f"{s.f2_v2:.2f}", f"{f2c:.2f}",
                        f"{s.f3_v2:.2f}", f"{f3c:.2f}"])


def write_lindblom_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["syllable", "cluster", "subcluster",
                    "f2v_hz", "f2c_hz", "f3c_hz"])
        for r in rows:
            w.writerow([r["syllable"], r["cluster"], r["subcluster"],
                        f"{r['f2v_hz']:.2f}", f"{r['f2c_hz']:.2f}",
                        f"{r['f3c_hz']:.2f}"])


def write_transitions_csv(path, calls):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["syllable", "v1", "c", "v2", "class",
                    "magnitude_hz", "inflection_frame"])
        for c in sorted(calls, key=lambda c: c.syllable_id):
            w.writerow([c.syllable_id, c.v1, c.c, c.v2, c.kind,
                        f"{c.magnitude_hz:.2f}", c.inflection_frame])


def _num(x):
    return "" if not np.isfinite(x) else f"{x:.2f}"
