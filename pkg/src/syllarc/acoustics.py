"""Acoustic layer: tract transfer functions, formants, rendering, spectrograms.

The tract is modelled as a cascade of cylindrical two-ports.  Each section of
length l and area S contributes the chain matrix

    [[cosh(g l), Zc sinh(g l)], [sinh(g l)/Zc, cosh(g l)]],

with characteristic impedance Zc = rho c / S and propagation constant
g = damping_per_cm + j w / c.  Matrices multiply glottis to lips; with a
radiation load Zr at the lips and an ideal flow source at the glottis, the
volume-velocity transfer gain is H = 1 / (m21 Zr + m22).  The default
radiation model is a piston in an infinite baffle; the solver is lossless by
default with an optional sqrt(f) per-section damping term.

Formants are the lowest local maxima of |H(f)| refined by 3-point parabolic
interpolation on the log magnitude.  Rendering drives per-frame transfer
functions with a glottal pulse train through an overlap-add short-time
filter, then applies a raised-cosine amplitude envelope with a silent window
centered on the consonant onset center.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (AcousticDomainError, ExtractionError, ParameterError,
                     SizeError)
from .tract import DEFAULT_CLOSURE_AREA_CM2

SPEED_OF_SOUND_CM_S = 35000.0
AIR_DENSITY_G_CM3 = 1.14e-3

RADIATION_NONE = "none"
RADIATION_PISTON = "piston"

DEFAULT_SAMPLE_RATE = 10000
DEFAULT_NFFT = 1024
DEFAULT_F0_HZ = 120.0
DEFAULT_FORMANT_FMAX_HZ = 4000.0
DEFAULT_SILENT_MS = 60.0
DEFAULT_RAMP_MS = 20.0
MAX_GRID_STEP_HZ = 10.0

# optional per-section damping: alpha = damping * sqrt(f / S) in 1/cm
DEFAULT_DAMPING = 0.0
EXAMPLE_DAMPING = 3e-5

DB_FLOOR = -100.0


@dataclass(frozen=True)
class AcousticConfig:
    """Physical constants and rendering defaults for the acoustic layer."""

    speed_of_sound: float = SPEED_OF_SOUND_CM_S
    air_density: float = AIR_DENSITY_G_CM3
    radiation: str = RADIATION_PISTON
    damping: float = DEFAULT_DAMPING
    sample_rate: int = DEFAULT_SAMPLE_RATE
    nfft: int = DEFAULT_NFFT
    f0_hz: float = DEFAULT_F0_HZ
    formant_fmax_hz: float = DEFAULT_FORMANT_FMAX_HZ
    silent_ms: float = DEFAULT_SILENT_MS
    ramp_ms: float = DEFAULT_RAMP_MS
    closure_area: float = DEFAULT_CLOSURE_AREA_CM2

    def __post_init__(self):
        if self.radiation not in (RADIATION_NONE, RADIATION_PISTON):
            raise ParameterError(f"unknown radiation model {self.radiation!r}")
        if self.speed_of_sound <= 0 or self.air_density <= 0:
            raise ParameterError("physical constants must be positive")
        if self.damping < 0:
            raise ParameterError("damping must be non-negative")

    def lossless(self):
        return replace(self, damping=0.0)

    def fft_grid(self):
        """Frequency grid aligned with the rendering FFT bins (step < 10 Hz)."""
        return np.fft.rfftfreq(self.nfft, 1.0 / self.sample_rate)


@dataclass(frozen=True)
class TransferFunction:
    """Glottis-to-lips volume-velocity gain sampled on a frequency grid."""

    freqs: np.ndarray
    gain: np.ndarray  # complex

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        gain = np.asarray(self.gain, dtype=complex)
        if freqs.shape != gain.shape or freqs.ndim != 1 or freqs.size < 3:
            raise ParameterError("freqs and gain must be matching 1-d arrays")
        if np.any(np.diff(freqs) <= 0.0):
            raise ParameterError("frequency grid must be strictly increasing")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "gain", gain)

    @property
    def magnitude(self):
        return np.abs(self.gain)


def default_grid(fmax=DEFAULT_FORMANT_FMAX_HZ, step=5.0):
    if step > MAX_GRID_STEP_HZ:
        raise ParameterError(f"grid step must be <= {MAX_GRID_STEP_HZ} Hz")
    return np.arange(0.0, fmax + 0.5 * step, step)


def radiation_impedance(freqs, lip_area, config):
    """Lip termination: 0 (ideal open end) or a baffled-piston load."""
    if config.radiation == RADIATION_NONE:
        return np.zeros_like(freqs, dtype=complex)
    a = math.sqrt(lip_area / math.pi)
    ka = 2.0 * np.pi * freqs * a / config.speed_of_sound
    z0 = config.air_density * config.speed_of_sound / lip_area
    return z0 * (0.5 * ka ** 2 + 1j * (8.0 / (3.0 * np.pi)) * ka)


def transfer_function(area, freqs=None, config=AcousticConfig()):
    """Chain-matrix volume-velocity gain of an AreaFunction.

    Raises AcousticDomainError when any section is effectively occluded:
    closed frames must be excluded by the caller before solving.
    """
    if freqs is None:
        freqs = config.fft_grid()
    freqs = np.asarray(freqs, dtype=float)
    if area.min_area < config.closure_area:
        raise AcousticDomainError(
            f"tract occluded (min area {area.min_area:.4f} cm^2); "
            "closure frames are not solvable")

    w = 2.0 * np.pi * freqs
    jk = 1j * w / config.speed_of_sound
    m11 = np.ones_like(freqs, dtype=complex)
    m12 = np.zeros_like(freqs, dtype=complex)
    m21 = np.zeros_like(freqs, dtype=complex)
    m22 = np.ones_like(freqs, dtype=complex)
    for l, s in zip(area.lengths, area.areas):
        zc = config.air_density * config.speed_of_sound / s
        gamma = jk
        if config.damping > 0.0:
            gamma = gamma + config.damping * np.sqrt(freqs / s)
        gl = gamma * l
        ch = np.cosh(gl)
        sh = np.sinh(gl)
        b11, b12, b21, b22 = ch, zc * sh, sh / zc, ch
        m11, m12, m21, m22 = (
            m11 * b11 + m12 * b21,
            m11 * b12 + m12 * b22,
            m21 * b11 + m22 * b21,
            m21 * b12 + m22 * b22,
        )
    zr = radiation_impedance(freqs, float(area.areas[-1]), config)
    return TransferFunction(freqs, 1.0 / (m21 * zr + m22))


def extract_formants(tf, n=3, fmax=DEFAULT_FORMANT_FMAX_HZ):
    """Frequencies of the n lowest local maxima of |H|, parabolically refined.

    Raises ExtractionError when fewer than n local maxima exist below fmax.
    """
    mask = tf.freqs <= fmax
    freqs = tf.freqs[mask]
    mag = tf.magnitude[mask]
    if freqs.size < 3:
        raise ExtractionError("grid too short for peak picking")
    logmag = np.log(np.maximum(mag, 1e-300))
    inner = np.arange(1, freqs.size - 1)
    is_peak = (logmag[inner] > logmag[inner - 1]) & (logmag[inner] >= logmag[inner + 1])
    peaks = inner[is_peak]
    if peaks.size < n:
        raise ExtractionError(f"found {peaks.size} peaks, need {n}")
    out = []
    for i in peaks[:n]:
        left, mid, right = logmag[i - 1], logmag[i], logmag[i + 1]
        denom = left - 2.0 * mid + right
        shift = 0.0 if denom == 0.0 else 0.5 * (left - right) / denom
        shift = float(np.clip(shift, -0.5, 0.5))
        step = freqs[i + 1] - freqs[i] if shift >= 0 else freqs[i] - freqs[i - 1]
        out.append(float(freqs[i] + shift * step))
    return tuple(out)


@dataclass(frozen=True)
class FormantTrack:
    """Per-frame formant frequencies with a validity flag."""

    frames: np.ndarray        # (n_frames, n_formants), Hz; NaN where invalid
    valid: np.ndarray         # (n_frames,) bool
    frame_ms: float
    onset_center_index: int

    @property
    def n_frames(self):
        return self.frames.shape[0]

    def formant(self, k):
        """1-based formant column (k=2 -> F2)."""
        return self.frames[:, k - 1]

    def times_ms(self):
        return np.arange(self.n_frames) * self.frame_ms


def track_formants(area_frames, closed, onset_center_index, config=AcousticConfig(),
                   n=3, frame_ms=10.0):
    """Solve per-frame transfer functions and extract a FormantTrack.

    closed[i] marks frames whose tract is occluded; those are skipped and
    flagged invalid, as is any frame where peak picking fails.
    """
    grid = config.fft_grid()
    n_frames = len(area_frames)
    frames = np.full((n_frames, n), np.nan)
    valid = np.zeros(n_frames, dtype=bool)
    for i, area in enumerate(area_frames):
        if closed[i]:
            continue
        try:
            tf = transfer_function(area, grid, config)
            frames[i] = extract_formants(tf, n=n, fmax=config.formant_fmax_hz)
            valid[i] = True
        except (AcousticDomainError, ExtractionError):
            continue
    return FormantTrack(frames, valid, frame_ms, onset_center_index)


def glottal_source(n_samples, config=AcousticConfig()):
    """Rosenberg-style glottal flow pulse train, flat f0, deterministic."""
    sr = config.sample_rate
    period = sr / config.f0_hz
    t_open = 0.40
    t_close = 0.16
    flow = np.zeros(n_samples)
    start = 0.0
    while start < n_samples:
        i0 = int(round(start))
        n_o = int(round(t_open * period))
        n_c = int(round(t_close * period))
        n_pulse = n_o + n_c
        idx = np.arange(n_pulse)
        pulse = np.empty(n_pulse)
        pulse[:n_o] = 0.5 * (1.0 - np.cos(np.pi * idx[:n_o] / max(n_o, 1)))
        pulse[n_o:] = np.cos(0.5 * np.pi * (idx[n_o:] - n_o) / max(n_c, 1))
        stop = min(i0 + n_pulse, n_samples)
        if stop > i0:
            flow[i0:stop] += pulse[: stop - i0]
        start += period
    return flow


def amplitude_envelope(n_samples, onset_center_sample, config=AcousticConfig()):
    """Vowel-level envelope: exact zero inside the silent window around the
    consonant onset center, raised-cosine ramps on both sides, 1 elsewhere."""
    sr = config.sample_rate
    half_silent = 0.5 * config.silent_ms * 1e-3 * sr
    ramp = config.ramp_ms * 1e-3 * sr
    t = np.arange(n_samples, dtype=float)
    dist = np.abs(t - onset_center_sample)
    env = np.ones(n_samples)
    inside = dist <= half_silent
    env[inside] = 0.0
    on_ramp = (dist > half_silent) & (dist < half_silent + ramp)
    x = (dist[on_ramp] - half_silent) / ramp
    env[on_ramp] = 0.5 * (1.0 - np.cos(np.pi * x))
    return env


@dataclass(frozen=True)
class RenderedSyllable:
    """Normalized mono audio plus its envelope and frame metadata."""

    samples: np.ndarray
    envelope: np.ndarray
    sample_rate: int
    frame_ms: float
    onset_center_sample: int


def render(area_frames, closed, onset_center_index, config=AcousticConfig(),
           frame_ms=10.0):
    """Render a syllable from per-frame area functions.

    The glottal train is filtered frame-by-frame (20 ms Hann segments, 50%
    overlap-add) with the transfer function of the frame under the segment
    center; occluded frames contribute silence.  The lip flow is then
    differentiated (radiation), enveloped, and peak-normalized.
    """
    sr = config.sample_rate
    frame_len = int(round(frame_ms * 1e-3 * sr))
    n_frames = len(area_frames)
    n_samples = n_frames * frame_len

    grid = config.fft_grid()
    gains = np.zeros((n_frames, grid.size), dtype=complex)
    for i, area in enumerate(area_frames):
        if not closed[i]:
            gains[i] = transfer_function(area, grid, config).gain

    source = glottal_source(n_samples, config)
    win_len = 2 * frame_len
    hop = frame_len
    window = np.hanning(win_len + 1)[:-1]  # periodic: 50% OLA sums to 1
    padded = np.concatenate([np.zeros(win_len), source, np.zeros(2 * win_len)])
    out = np.zeros_like(padded)
    n_segments = (padded.size - win_len) // hop
    for seg in range(n_segments):
        a = seg * hop
        center = a + win_len // 2 - win_len  # position in the unpadded signal
        frame_idx = int(center // frame_len)
        if frame_idx < 0 or frame_idx >= n_frames:
            continue
        spec = np.fft.rfft(padded[a:a + win_len] * window, n=config.nfft)
        filtered = np.fft.irfft(spec * gains[frame_idx], n=config.nfft)
        stop = min(a + config.nfft, out.size)
        out[a:stop] += filtered[: stop - a]
    lips = out[win_len:win_len + n_samples]

    pressure = np.empty_like(lips)
    pressure[0] = lips[0]
    pressure[1:] = np.diff(lips)

    onset_center_sample = int((onset_center_index + 0.5) * frame_len)
    env = amplitude_envelope(n_samples, onset_center_sample, config)
    audio = pressure * env
    peak = np.max(np.abs(audio))
    if peak > 0.0:
        audio = 0.95 * audio / peak
    return RenderedSyllable(audio, env, sr, frame_ms, onset_center_sample)


@dataclass(frozen=True)
class SpectrogramGrid:
    """STFT magnitude in dB on a time (ms) x frequency (Hz) grid."""

    times_ms: np.ndarray
    freqs_hz: np.ndarray
    mag_db: np.ndarray  # (n_times, n_freqs)


def spectrogram(samples, sample_rate=DEFAULT_SAMPLE_RATE, window_ms=25.0,
                hop_ms=5.0, fmax=4000.0, nfft=DEFAULT_NFFT):
    """Hann STFT magnitude in dB, floored at -100 dB re max."""
    samples = np.asarray(samples, dtype=float)
    win_len = int(round(window_ms * 1e-3 * sample_rate))
    hop = int(round(hop_ms * 1e-3 * sample_rate))
    if samples.size < win_len:
        raise SizeError(f"signal shorter than the {window_ms} ms window")
    window = np.hanning(win_len)
    n_times = 1 + (samples.size - win_len) // hop
    freqs = np.fft.rfftfreq(nfft, 1.0 / sample_rate)
    keep = freqs <= fmax
    mags = np.empty((n_times, int(np.sum(keep))))
    for i in range(n_times):
        seg = samples[i * hop: i * hop + win_len] * window
        mags[i] = np.abs(np.fft.rfft(seg, n=nfft))[keep]
    ref = np.max(mags)
    if ref <= 0.0:
        mag_db = np.full_like(mags, DB_FLOOR)
    else:
        mag_db = 20.0 * np.log10(np.maximum(mags / ref, 10 ** (DB_FLOOR / 20.0)))
    times = (np.arange(n_times) * hop + 0.5 * win_len) / sample_rate * 1e3
    return SpectrogramGrid(times, freqs[keep], mag_db)


def write_wav(path, rendered):
    """Write 16-bit PCM mono WAV (deterministic bytes)."""
    from scipy.io import wavfile

    samples = np.clip(rendered.samples, -1.0, 1.0)
    wavfile.write(path, rendered.sample_rate,
                  (samples * 32767.0).astype(np.int16))
