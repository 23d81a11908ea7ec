"""Generate the sagittal tract tables shipped as syllarc/data/tract_model.txt.

The published midsagittal-to-area models that inspired this component are not
redistributable, so the package ships a stand-in built from smooth analytic
shapes: a resting diameter profile interpolated through anatomical anchors and
one Gaussian deflection lobe set per articulatory parameter. The numbers below
were tuned (see syllarc/calibrate.py) so that the synthesizer meets its vowel
and closure targets; they are not measurements.

Run from the repository root:

    python3 tools/build_tract_tables.py

Conventions: x is the normalized glottis-to-lips axis (0 = glottis, 1 = lips),
diameters are cm, areas cm^2, area = alpha * d**beta per region.
"""

import io
import os

import numpy as np
from scipy.interpolate import PchipInterpolator

N_STATIONS = 40
N_SECTIONS = 29

# glottis->lips regions: (x0, x1, alpha, beta)
REGIONS = [
    (0.00, 0.22, 1.60, 1.40),
    (0.22, 0.60, 1.70, 1.50),
    (0.60, 0.87, 1.60, 1.50),
    (0.87, 1.01, 1.20, 1.30),
]

BASE_LENGTH_CM = 17.4
LIPP_LENGTH_CM = 0.30
HY_LENGTH_CM = -0.30
AREA_FLOOR_CM2 = 1.0e-3

# Resting area anchors (x, cm^2). The mid-tract dome is deliberately wide:
# closures are driven by deflections proportional to gesture radius, so the
# velar channel needs headroom for a stop gesture (radius 1.2) to seal while
# the colinear close vowel (radius 1.0) keeps an open constriction.
NEUTRAL_AREA_ANCHORS = [
    (0.00, 1.10),
    (0.08, 1.60),
    (0.20, 3.00),
    (0.32, 4.20),
    (0.45, 4.30),
    (0.55, 4.30),
    (0.64, 4.00),
    (0.72, 3.00),
    (0.80, 2.70),
    (0.88, 2.50),
    (0.94, 2.50),
    (1.00, 2.50),
]

# Deflection lobes per parameter: list of (amplitude, center, width).
# Positive parameter value times positive amplitude widens the tract there;
# negative amplitude narrows it.
BASIS_LOBES = {
    "jaw": [(-0.30, 0.68, 0.14), (0.10, 0.18, 0.10)],
    "body": [(-0.52, 0.50, 0.075), (0.30, 0.22, 0.12)],
    "dorsum": [(-0.55, 0.62, 0.11)],
    "tip": [(-0.75, 0.85, 0.055), (0.03, 0.68, 0.08)],
    "lipp": [(-0.35, 0.96, 0.05)],
    "liph": [(0.62, 0.965, 0.05)],
    "hy": [(-0.30, 0.07, 0.13), (-0.45, 0.36, 0.20)],
}

PARAM_ORDER = ("jaw", "body", "dorsum", "tip", "lipp", "liph", "hy")


def _gauss(x, center, width):
    return np.exp(-0.5 * ((x - center) / width) ** 2)


def _region_coeffs(x):
    for x0, x1, alpha, beta in REGIONS:
        if x0 <= x < x1:
            return alpha, beta
    return REGIONS[-1][2], REGIONS[-1][3]


def build_model(anchors=None, lobes=None):
    """Return the tract table file content as a string."""
    anchors = NEUTRAL_AREA_ANCHORS if anchors is None else anchors
    lobes = BASIS_LOBES if lobes is None else lobes

    xs = np.array([a[0] for a in anchors])
    areas = np.array([a[1] for a in anchors])
    area_of = PchipInterpolator(xs, areas)

    stations = (np.arange(N_STATIONS) + 0.5) / N_STATIONS
    out = io.StringIO()
    out.write("# syllarc sagittal tract tables. Generated by tools/build_tract_tables.py;\n")
    out.write("# analytic stand-in profile, tuned for this synthesizer (not measurements).\n")
    out.write("version 1\n")
    out.write(f"stations {N_STATIONS}\n")
    out.write(f"sections {N_SECTIONS}\n")
    out.write(f"base_length_cm {BASE_LENGTH_CM}\n")
    out.write(f"lipp_length_cm {LIPP_LENGTH_CM}\n")
    out.write(f"hy_length_cm {HY_LENGTH_CM}\n")
    out.write(f"area_floor_cm2 {AREA_FLOOR_CM2}\n")
    for x0, x1, alpha, beta in REGIONS:
        out.write(f"region {x0:.4f} {x1:.4f} {alpha:.4f} {beta:.4f}\n")
    for x in stations:
        alpha, beta = _region_coeffs(x)
        mean_d = (float(area_of(x)) / alpha) ** (1.0 / beta)
        cols = []
        for name in PARAM_ORDER:
            val = sum(a * _gauss(x, c, w) for a, c, w in lobes[name])
            cols.append(f"{val:+.6f}")
        out.write(f"{x:.6f} {mean_d:.6f} " + " ".join(cols) + "\n")
    return out.getvalue()


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    dest = os.path.join(here, "..", "src", "syllarc", "data", "tract_model.txt")
    text = build_model()
    with open(dest, "w") as fh:
        fh.write(text)
    print(f"wrote {os.path.normpath(dest)} ({text.count(chr(10))} lines)")


if __name__ == "__main__":
    main()
