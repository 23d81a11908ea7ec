"""Arc planning in the polar phoneme plane.

A syllable is planned as three arcs between phoneme targets: V1 -> C and
C -> V2 (the consonantal stream, T frames each) and V1 -> V2 (the vocalic
stream, 2T frames).  Each arc is a convex blend of its two endpoints,

    z(t) = w(t) * p1 + (1 - w(t)) * p2 * e^(i * nu * bump(t) / k_shape),

where w(t) is a gap-closure weight from the tau family below, k_shape
controls how straight the path is (large k -> chord), and bump(t) is a small
angular detour applied to the destination term.  The weight reaches exactly 0
at t = D, so every arc lands on its target.

Frames are 10 ms; arcs are sampled at integer t = 1..D.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .inventory import PolarTarget

# tau weight forms
POWER = "power"
HARMONIC = "harmonic"
HARMONIC_CLOSING = "harmonic_closing"
_FORMS = (POWER, HARMONIC, HARMONIC_CLOSING)

FRAME_MS = 10.0

DEFAULT_T_FRAMES = 16
DEFAULT_K_VOWEL = 30.0
DEFAULT_K_CONSONANT = 10.0
STRAIGHT_K = 1000.0
DEFAULT_KAPPA = 0.5
DEFAULT_PAD_FRAMES = 10
DEFAULT_BUMP_AMPLITUDE = math.pi / 4.0


@dataclass(frozen=True)
class TauProfile:
    """Gap-closure weight profile.

    power:    x0 * (1 - t^2/D^2)^(1/kappa)
    harmonic: x0 * cos(pi t / (2 D))^(1/kappa)
    harmonic_closing: 1 - harmonic(D - t), the time-mirrored closing variant;
        the harmonic form with kappa = 0.5 is its own mirror, so the two
        coincide there.

    All three decay strictly from near x0 at t = 1 to their terminal value at
    t = D (0 for x0 = 1).
    """

    form: str
    x0: float = 1.0
    duration_frames: int = DEFAULT_T_FRAMES
    kappa: float = DEFAULT_KAPPA

    def __post_init__(self):
        if self.form not in _FORMS:
            raise ParameterError(f"unknown tau form {self.form!r}")
        if self.duration_frames <= 0:
            raise ParameterError("duration_frames must be positive")
        if self.kappa <= 0.0:
            raise ParameterError("kappa must be positive")

    def __call__(self, t):
        return tau_eval(self, t)


def _power(x0, t, d, kappa):
    return x0 * (1.0 - (t / d) ** 2) ** (1.0 / kappa)


def _harmonic(x0, t, d, kappa):
    return x0 * np.cos(0.5 * np.pi * t / d) ** (1.0 / kappa)


def tau_eval(profile, t):
    """Evaluate a TauProfile at frame t (scalar or array), 1 <= t <= D."""
    t = np.asarray(t, dtype=float)
    d = float(profile.duration_frames)
    if np.any(t < 1.0) or np.any(t > d):
        raise ParameterError(f"t outside [1, {profile.duration_frames}]")
    if profile.form == POWER:
        out = _power(profile.x0, t, d, profile.kappa)
    elif profile.form == HARMONIC:
        out = _harmonic(profile.x0, t, d, profile.kappa)
    else:  # mirrored closing variant; the inner form is evaluated at D - t
        out = 1.0 - _harmonic(profile.x0, d - t, d, profile.kappa)
    return out if out.ndim else float(out)


def half_sine_bump(amplitude=DEFAULT_BUMP_AMPLITUDE):
    """Angular detour schedule: a half-sine hump that returns to 0 at t = D.

    Vanishing at the endpoint keeps arc targets exact; the amplitude sets how
    far the path bows away from the chord (scaled by 1/k_shape in the arc).
    """

    def schedule(t, duration):
        return amplitude * np.sin(np.pi * np.asarray(t, dtype=float) / duration)

    return schedule


@dataclass(frozen=True)
class Arc:
    """One planned movement between two polar targets."""

    start: PolarTarget
    end: PolarTarget
    duration_frames: int
    k_shape: float
    profile: TauProfile
    nu: int = 1
    bump: object = field(default_factory=half_sine_bump)

    def __post_init__(self):
        if self.duration_frames <= 0:
            raise ParameterError("duration_frames must be positive")
        if self.k_shape <= 0.0:
            raise ParameterError("k_shape must be positive")
        if self.nu not in (-1, 1):
            raise ParameterError("nu must be +1 or -1")
        if self.profile.duration_frames != self.duration_frames:
            raise ParameterError("profile duration must match arc duration")


def plan_arc(arc):
    """Sample an arc at t = 1..D; returns a complex trajectory of length D.

    The weight hits exactly 0 at t = D and the angular bump vanishes there,
    so the final sample equals the end target.  The t = 1 sample sits a small
    step off the start target (the exact start is the t = 0 limit; steady
    padding in the syllable plan supplies it).
    """
    t = np.arange(1, arc.duration_frames + 1, dtype=float)
    w = tau_eval(arc.profile, t)
    detour = arc.bump(t, float(arc.duration_frames))
    p1 = arc.start.position
    p2 = arc.end.position
    swing = np.exp(1j * (arc.nu / arc.k_shape) * detour)
    return w * p1 + (1.0 - w) * p2 * swing


@dataclass(frozen=True)
class SyllablePlan:
    """Planned V1-C-V2 syllable: two consonantal arcs plus one vocalic arc.

    The consonantal stream concatenates arc_vc and arc_cv (2T frames) and the
    vocalic stream is arc_vv (also 2T frames); pad_frames of steady vowel are
    prepended and appended when the streams are materialized.  The consonant
    junction (maximal constriction) falls at the last frame of arc_vc.
    """

    v1: PolarTarget
    c: PolarTarget
    v2: PolarTarget
    t_frames: int
    arc_vc: Arc
    arc_cv: Arc
    arc_vv: Arc
    pad_frames: int = DEFAULT_PAD_FRAMES
    frame_ms: float = FRAME_MS

    @property
    def n_frames(self):
        return 2 * self.pad_frames + 2 * self.t_frames

    @property
    def onset_center_index(self):
        """0-based frame index where the consonantal stream sits exactly on C."""
        return self.pad_frames + self.t_frames - 1

    @property
    def syllable(self):
        return (self.v1.label, self.c.label, self.v2.label)

    def transition_paths(self):
        """(vocalic, consonantal) trajectories over the 2T transition frames."""
        z_v = plan_arc(self.arc_vv)
        z_c = np.concatenate([plan_arc(self.arc_vc), plan_arc(self.arc_cv)])
        return z_v, z_c

    def full_paths(self):
        """(vocalic, consonantal) trajectories with steady vowel padding."""
        z_v, z_c = self.transition_paths()
        head_v = np.full(self.pad_frames, self.v1.position, dtype=complex)
        tail_v = np.full(self.pad_frames, self.v2.position, dtype=complex)
        return (
            np.concatenate([head_v, z_v, tail_v]),
            np.concatenate([head_v, z_c, tail_v]),
        )


def plan_syllable(
    v1,
    c,
    v2,
    t_frames=DEFAULT_T_FRAMES,
    k_vowel=DEFAULT_K_VOWEL,
    k_consonant=DEFAULT_K_CONSONANT,
    kappa=DEFAULT_KAPPA,
    nu=1,
    bump_amplitude=DEFAULT_BUMP_AMPLITUDE,
    pad_frames=DEFAULT_PAD_FRAMES,
):
    """Plan a V1-C-V2 syllable.

    The V1 -> C arc closes the gap onto the consonant with the plain harmonic
    weight; the C -> V2 and V1 -> V2 arcs use the mirrored closing variant so
    they also land exactly on their targets.  The vocalic arc spans 2T frames,
    each consonantal arc T frames.
    """
    if t_frames <= 0:
        raise ParameterError("t_frames must be positive")
    if not (v1.is_vowel and v2.is_vowel) or c.is_vowel:
        raise ParameterError("plan_syllable needs vowel, consonant, vowel")
    bump = half_sine_bump(bump_amplitude)
    arc_vc = Arc(
        v1, c, t_frames, k_consonant,
        TauProfile(HARMONIC, 1.0, t_frames, kappa), nu, bump,
    )
    arc_cv = Arc(
        c, v2, t_frames, k_consonant,
        TauProfile(HARMONIC_CLOSING, 1.0, t_frames, kappa), nu, bump,
    )
    arc_vv = Arc(
        v1, v2, 2 * t_frames, k_vowel,
        TauProfile(HARMONIC_CLOSING, 1.0, 2 * t_frames, kappa), nu, bump,
    )
    return SyllablePlan(v1, c, v2, t_frames, arc_vc, arc_cv, arc_vv, pad_frames)


def plan_cv(c, v, **kwargs):
    """Plan a CV syllable: V1 is the reduced form of the target vowel."""
    return plan_syllable(v.reduced(), c, v, **kwargs)
