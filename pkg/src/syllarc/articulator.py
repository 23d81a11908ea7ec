"""Composition of planner trajectories into articulatory parameter tracks.

The polar plane maps into the 7 articulatory parameters through a calibrated
affine projection: parameter i responds to a plane position z with

    P_i = omega_i + Re(psi_i * conj(z)),

i.e. omega is the neutral offset and the complex coefficient psi_i fixes
the direction in the plane that drives parameter i hardest, and how hard.
During a syllable the consonant recruits a subset of parameters (its
articulator set): those follow the consonantal trajectory z_c while all
others follow the vocalic trajectory z_v.  The two selection masks are
complementary, every parameter listens to exactly one stream, and the result
is clamped to the admissible parameter box [-3, 3].
"""

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import CompositionError, DataError
from .inventory import N_PARAMS, PARAM_NAMES

PARAM_LIMIT = 3.0


@dataclass(frozen=True)
class Calibration:
    """Plane-to-parameter projection: offsets plus complex coefficients."""

    omega: np.ndarray        # (7,) real offsets
    psi: np.ndarray          # (7,) complex coefficients
    articulator_sets: dict   # consonant label -> tuple of 1-based indices

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        psi = np.asarray(self.psi, dtype=complex)
        if omega.shape != (N_PARAMS,) or psi.shape != (N_PARAMS,):
            raise DataError(f"calibration needs {N_PARAMS} offsets and coefficients")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "psi", psi)

    def project(self, z):
        """Static parameter vector(s) for plane position(s) z, unclamped."""
        z = np.asarray(z, dtype=complex)
        return self.omega + np.real(np.conj(z)[..., None] * self.psi)


@dataclass(frozen=True)
class ArticulatorMap:
    """Calibration specialized to one consonant's articulator recruitment."""

    omega: np.ndarray
    psi: np.ndarray
    s_v: np.ndarray  # (7,) 0/1 vocalic selection
    s_c: np.ndarray  # (7,) 0/1 consonantal selection

    def __post_init__(self):
        s_v = np.asarray(self.s_v, dtype=float)
        s_c = np.asarray(self.s_c, dtype=float)
        if s_v.shape != (N_PARAMS,) or s_c.shape != (N_PARAMS,):
            raise CompositionError("selection vectors must have 7 entries")
        if not np.all(np.isin(s_v, (0.0, 1.0))) or not np.all(np.isin(s_c, (0.0, 1.0))):
            raise CompositionError("selection vectors must be binary")
        if np.any(s_v + s_c != 1.0):
            raise CompositionError("each parameter must listen to exactly one stream")
        object.__setattr__(self, "s_v", s_v)
        object.__setattr__(self, "s_c", s_c)

    @classmethod
    def for_consonant(cls, calibration, consonant):
        """Build the map for a consonant target (uses its articulator set)."""
        indices = calibration.articulator_sets.get(
            consonant.label, consonant.articulators)
        if not indices:
            raise CompositionError(f"{consonant.label}: empty articulator set")
        s_c = np.zeros(N_PARAMS)
        for i in indices:
            if not 1 <= i <= N_PARAMS:
                raise CompositionError(f"articulator index {i} out of range")
            s_c[i - 1] = 1.0
        return cls(calibration.omega, calibration.psi, 1.0 - s_c, s_c)


@dataclass(frozen=True)
class ParamTrack:
    """Per-frame articulatory parameter vectors."""

    values: np.ndarray  # (n_frames, 7)
    frame_ms: float = 10.0

    @property
    def n_frames(self):
        return self.values.shape[0]

    def parameter(self, name):
        return self.values[:, PARAM_NAMES.index(name)]


def compose_parameters(z_v, z_c, amap, clamp=True, frame_ms=10.0):
    """Blend the two trajectory streams into parameter frames.

    P(t) = omega + Re(s_v . psi conj(z_v) + s_c . psi conj(z_c)), then clamp
    each parameter into [-3, 3] (skippable for linearity analysis).
    """
    z_v = np.asarray(z_v, dtype=complex)
    z_c = np.asarray(z_c, dtype=complex)
    if z_v.shape != z_c.shape or z_v.ndim != 1:
        raise CompositionError("z_v and z_c must be matching 1-d trajectories")
    contrib_v = np.real(np.conj(z_v)[:, None] * amap.psi) * amap.s_v
    contrib_c = np.real(np.conj(z_c)[:, None] * amap.psi) * amap.s_c
    values = amap.omega + contrib_v + contrib_c
    if clamp:
        values = np.clip(values, -PARAM_LIMIT, PARAM_LIMIT)
    return ParamTrack(values, frame_ms)


def build_tracks(plan, calibration, clamp=True):
    """ParamTrack for a SyllablePlan (padding included)."""
    z_v, z_c = plan.full_paths()
    amap = ArticulatorMap.for_consonant(calibration, plan.c)
    return compose_parameters(z_v, z_c, amap, clamp=clamp, frame_ms=plan.frame_ms)


def _parse_calibration_text(text, origin):
    omega = None
    psi = {}
    sets = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        try:
            if key == "version":
                if int(parts[1]) != 1:
                    raise ValueError("unsupported version")
            elif key == "omega":
                if len(parts) != 1 + N_PARAMS:
                    raise ValueError(f"omega needs {N_PARAMS} values")
                omega = np.asarray([float(x) for x in parts[1:]])
            elif key == "psi":
                if len(parts) != 4:
                    raise ValueError("psi needs: psi <name> <re> <im>")
                name = parts[1]
                if name not in PARAM_NAMES:
                    raise ValueError(f"unknown parameter {name!r}")
                psi[name] = complex(float(parts[2]), float(parts[3]))
            elif key == "articulators":
                if len(parts) != 3:
                    raise ValueError("articulators needs: articulators <label> <i,j,...>")
                sets[parts[1]] = tuple(int(x) for x in parts[2].split(","))
            else:
                raise ValueError(f"unknown directive {key!r}")
        except (ValueError, IndexError) as exc:
            raise DataError(f"{origin}:{lineno}: {exc}") from exc
    if omega is None:
        raise DataError(f"{origin}: missing omega line")
    missing = [n for n in PARAM_NAMES if n not in psi]
    if missing:
        raise DataError(f"{origin}: missing psi for {', '.join(missing)}")
    psi_vec = np.asarray([psi[n] for n in PARAM_NAMES], dtype=complex)
    return Calibration(omega, psi_vec, sets)


def load_calibration(path=None):
    """Load a calibration file; with no path, load the packaged default."""
    if path is None:
        ref = resources.files("syllarc.data").joinpath("calibration.txt")
        return _parse_calibration_text(ref.read_text(encoding="utf-8"),
                                       "calibration.txt")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read calibration file {path}: {exc}") from exc
    return _parse_calibration_text(text, str(path))
