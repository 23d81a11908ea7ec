"""Vocal-tract area model.

The tract is described on a row of sagittal stations from glottis to lips.
A 7-parameter articulatory vector p (jaw, body, dorsum, tip, lipp, liph, hy;
each clamped to [-3, 3] upstream) bends a mean sagittal-width profile through
a fixed linear basis:

    d(s) = mean_d(s) + basis(s) . p        [cm, floored at 0]

Per-station widths become cross-sectional areas with the usual power law
A = alpha * d^beta, with alpha/beta constant per anatomical region, and the
area profile is resampled onto equal-length cylindrical sections for the
acoustic solver.  Lip protrusion and larynx height additionally stretch or
shrink the overall tract length.

The numeric tables (stations, mean profile, basis vectors, region constants)
live in a versioned text asset; see data/tract_model.txt and the README for
the format.
"""

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DataError, ParameterError
from .inventory import N_PARAMS

# a section narrower than this counts as an occlusion
DEFAULT_CLOSURE_AREA_CM2 = 0.05

# hard numeric floor applied to every section area
DEFAULT_AREA_FLOOR_CM2 = 1e-3

LENGTH_BOUNDS_CM = (12.0, 22.0)


@dataclass(frozen=True)
class AreaFunction:
    """Concatenation of uniform cylindrical sections, glottis to lips."""

    lengths: np.ndarray  # cm
    areas: np.ndarray    # cm^2

    def __post_init__(self):
        lengths = np.asarray(self.lengths, dtype=float)
        areas = np.asarray(self.areas, dtype=float)
        if lengths.shape != areas.shape or lengths.ndim != 1 or not lengths.size:
            raise ParameterError("lengths and areas must be matching 1-d arrays")
        if np.any(lengths <= 0.0):
            raise ParameterError("section lengths must be positive")
        if np.any(areas < 0.0):
            raise ParameterError("section areas must be non-negative")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "areas", areas)

    @property
    def total_length(self):
        return float(np.sum(self.lengths))

    @property
    def min_area(self):
        return float(np.min(self.areas))

    def is_closed(self, threshold=DEFAULT_CLOSURE_AREA_CM2):
        return self.min_area < threshold


class TractModel:
    """Loaded coefficient tables plus the parameter-to-area conversion."""

    def __init__(self, stations, mean_d, basis, alpha, beta, n_sections,
                 base_length_cm, lipp_length_cm, hy_length_cm,
                 area_floor=DEFAULT_AREA_FLOOR_CM2):
        self.stations = np.asarray(stations, dtype=float)
        self.mean_d = np.asarray(mean_d, dtype=float)
        self.basis = np.asarray(basis, dtype=float)
        self.alpha = np.asarray(alpha, dtype=float)
        self.beta = np.asarray(beta, dtype=float)
        self.n_sections = int(n_sections)
        self.base_length_cm = float(base_length_cm)
        self.lipp_length_cm = float(lipp_length_cm)
        self.hy_length_cm = float(hy_length_cm)
        self.area_floor = float(area_floor)

        ns = self.stations.size
        if ns < 2 or np.any(np.diff(self.stations) <= 0.0):
            raise DataError("stations must be strictly increasing")
        if self.mean_d.shape != (ns,) or np.any(self.mean_d <= 0.0):
            raise DataError("mean_d must be positive, one value per station")
        if self.basis.shape != (ns, N_PARAMS):
            raise DataError(f"basis must be stations x {N_PARAMS}")
        if self.alpha.shape != (ns,) or self.beta.shape != (ns,):
            raise DataError("alpha/beta must give one value per station")
        if np.any(self.alpha <= 0.0) or np.any(self.beta <= 0.0):
            raise DataError("alpha and beta must be positive")
        if self.n_sections < 2:
            raise DataError("n_sections must be at least 2")

    def sagittal(self, p):
        """Sagittal width profile for a parameter vector, floored at 0 cm."""
        p = np.asarray(p, dtype=float)
        if p.shape != (N_PARAMS,):
            raise ParameterError(f"expected {N_PARAMS} parameters")
        return np.maximum(self.mean_d + self.basis @ p, 0.0)

    def total_length(self, p):
        return (self.base_length_cm
                + self.lipp_length_cm * float(p[4])
                + self.hy_length_cm * float(p[6]))

    def params_to_area(self, p, n_sections=None):
        """Convert a parameter vector into an AreaFunction.

        Station areas follow the power law; the resampling interpolates the
        station area profile at the midpoints of n equal sections.
        """
        p = np.asarray(p, dtype=float)
        n = self.n_sections if n_sections is None else int(n_sections)
        d = self.sagittal(p)
        station_areas = self.alpha * d ** self.beta
        mids = (np.arange(n) + 0.5) / n
        areas = np.interp(mids, self.stations, station_areas)
        areas = np.maximum(areas, self.area_floor)
        total = self.total_length(p)
        if not LENGTH_BOUNDS_CM[0] <= total <= LENGTH_BOUNDS_CM[1]:
            raise ParameterError(f"tract length {total:.2f} cm outside "
                                 f"{LENGTH_BOUNDS_CM}")
        lengths = np.full(n, total / n)
        return AreaFunction(lengths, areas)


def _need(header, key, origin):
    if key not in header:
        raise DataError(f"{origin}: missing header field {key!r}")
    return header[key]


def _parse_tract_text(text, origin):
    header = {}
    regions = []
    rows = []
    mode = "header"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if mode == "header" and parts[0] == "region":
            mode = "regions"
        if mode == "regions" and parts[0] != "region":
            mode = "stations"
        try:
            if mode == "header":
                if len(parts) != 2:
                    raise ValueError("expected 'key value'")
                header[parts[0]] = float(parts[1])
            elif mode == "regions":
                if len(parts) != 5:
                    raise ValueError("expected 'region s0 s1 alpha beta'")
                regions.append(tuple(float(x) for x in parts[1:]))
            else:
                if len(parts) != 2 + N_PARAMS:
                    raise ValueError(f"expected {2 + N_PARAMS} station columns")
                rows.append(tuple(float(x) for x in parts))
        except ValueError as exc:
            raise DataError(f"{origin}:{lineno}: {exc}") from exc

    if int(_need(header, "version", origin)) != 1:
        raise DataError(f"{origin}: unsupported version")
    n_stations = int(_need(header, "stations", origin))
    if not regions:
        raise DataError(f"{origin}: no regions defined")
    if len(rows) != n_stations:
        raise DataError(f"{origin}: expected {n_stations} station rows, "
                        f"got {len(rows)}")

    table = np.asarray(rows, dtype=float)
    stations = table[:, 0]
    mean_d = table[:, 1]
    basis = table[:, 2:]

    alpha = np.zeros(n_stations)
    beta = np.zeros(n_stations)
    for s0, s1, a, b in regions:
        mask = (stations >= s0) & (stations < s1)
        alpha[mask] = a
        beta[mask] = b
    if np.any(alpha == 0.0):
        raise DataError(f"{origin}: regions do not cover all stations")

    return TractModel(
        stations, mean_d, basis, alpha, beta,
        n_sections=int(_need(header, "sections", origin)),
        base_length_cm=_need(header, "base_length_cm", origin),
        lipp_length_cm=_need(header, "lipp_length_cm", origin),
        hy_length_cm=_need(header, "hy_length_cm", origin),
        area_floor=header.get("area_floor_cm2", DEFAULT_AREA_FLOOR_CM2),
    )


def load_tract_model(path=None):
    """Load a tract table file; with no path, load the packaged default."""
    if path is None:
        ref = resources.files("syllarc.data").joinpath("tract_model.txt")
        return _parse_tract_text(ref.read_text(encoding="utf-8"), "tract_model.txt")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read tract model {path}: {exc}") from exc
    return _parse_tract_text(text, str(path))
