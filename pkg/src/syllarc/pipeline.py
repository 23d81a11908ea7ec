"""End-to-end synthesis of one syllable: plan -> parameters -> areas ->
formants -> audio.  This is the code path shared by the CLI runner, the
calibration tool, and the test suite."""

from dataclasses import dataclass

import numpy as np

from . import acoustics, articulator, planner
from .errors import PipelineError


@dataclass(frozen=True)
class SyllableResult:
    """Everything the analyses and exporters need about one synthesized item."""

    plan: planner.SyllablePlan
    params: articulator.ParamTrack
    areas: list
    closed: np.ndarray          # per-frame occlusion flags
    formants: acoustics.FormantTrack
    rendered: object            # RenderedSyllable or None

    @property
    def syllable_id(self):
        v1, c, v2 = self.plan.syllable
        if v1.endswith("_red"):
            return f"{c}-{v2}"
        return f"{v1}-{c}-{v2}"

    def closure_frames(self):
        return np.flatnonzero(self.closed)

    def closure_interval(self):
        """(first, last) occluded frame indices, or None when never occluded."""
        idx = self.closure_frames()
        if idx.size == 0:
            return None
        return int(idx[0]), int(idx[-1])


def area_frames_for(plan, calibration, tract, clamp=True):
    """Per-frame AreaFunctions plus the occlusion mask for a plan."""
    params = articulator.build_tracks(plan, calibration, clamp=clamp)
    areas = [tract.params_to_area(p) for p in params.values]
    return params, areas


def synthesize(plan, calibration, tract, config=acoustics.AcousticConfig(),
               with_audio=True):
    """Run the full pipeline on a planned syllable."""
    params, areas = area_frames_for(plan, calibration, tract)
    closed = np.asarray([a.min_area < config.closure_area for a in areas])
    if closed.all():
        raise PipelineError("tract occluded on every frame; check calibration")
    formants = acoustics.track_formants(
        areas, closed, plan.onset_center_index, config, frame_ms=plan.frame_ms)
    rendered = None
    if with_audio:
        rendered = acoustics.render(
            areas, closed, plan.onset_center_index, config, frame_ms=plan.frame_ms)
    return SyllableResult(plan, params, areas, closed, formants, rendered)


def synthesize_vcv(inventory, v1, c, v2, calibration, tract,
                   config=acoustics.AcousticConfig(), with_audio=True, **plan_kwargs):
    """Resolve labels (velar routing included), plan, and synthesize a VCV."""
    t1, tc, t2 = inventory.resolve_vcv(v1, c, v2)
    plan = planner.plan_syllable(t1, tc, t2, **plan_kwargs)
    return synthesize(plan, calibration, tract, config, with_audio)


def synthesize_cv(inventory, c, v, calibration, tract,
                  config=acoustics.AcousticConfig(), with_audio=True, **plan_kwargs):
    """Resolve, plan, and synthesize a CV item (reduced-vowel start)."""
    t1, tc, t2 = inventory.resolve_cv(c, v)
    plan = planner.plan_syllable(t1, tc, t2, **plan_kwargs)
    return synthesize(plan, calibration, tract, config, with_audio)
