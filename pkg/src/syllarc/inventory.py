"""Phoneme inventory for polar-plane syllable planning.

Each phoneme is a point (rho, theta) in a polar plane whose angle encodes
place of articulation and whose radius encodes degree of opening: vowels sit
on or inside the unit circle, consonants slightly outside it.  The velar stop
has two positional allophones and is routed on the following vowel: a front
V2 selects the palatal variant, a back V2 the velar one.  Vowels on the lower
half of the circle (sin(theta) < 0) form the front branch; the rest are back.
"""

import math
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import InventoryError, DataError

VOWEL = "vowel"
CONSONANT = "consonant"

N_PARAMS = 7
PARAM_NAMES = ("jaw", "body", "dorsum", "tip", "lipp", "liph", "hy")

TWO_PI = 2.0 * math.pi

# base label of the contextually routed velar stop and its two variants
VELAR_BASE = "g"
VELAR_FRONT = "g_p"
VELAR_BACK = "g_v"

_PI_FRACTION = re.compile(r"^(\d+)?pi(?:/(\d+))?$")


def parse_angle(text):
    """Parse an angle given as 'Npi/M', 'pi/M', 'Npi', 'pi' or plain radians."""
    text = text.strip()
    m = _PI_FRACTION.match(text)
    if m:
        num = int(m.group(1)) if m.group(1) else 1
        den = int(m.group(2)) if m.group(2) else 1
        return num * math.pi / den
    try:
        return float(text)
    except ValueError as exc:
        raise DataError(f"cannot parse angle {text!r}") from exc


@dataclass(frozen=True)
class PolarTarget:
    """A phoneme target in the planning plane.

    rho is the degree coordinate (vowels <= 1, consonants > 1), theta the
    place coordinate in radians, normalized to [0, 2pi).  Consonants carry
    the 1-based indices of the articulatory parameters they recruit.
    """

    label: str
    rho: float
    theta: float
    kind: str = VOWEL
    articulators: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "theta", self.theta % TWO_PI)
        if self.kind not in (VOWEL, CONSONANT):
            raise InventoryError(f"{self.label}: unknown kind {self.kind!r}")
        if self.rho < 0.0:
            raise InventoryError(f"{self.label}: rho must be non-negative")
        if self.kind == VOWEL and self.rho > 1.0:
            raise InventoryError(f"{self.label}: vowel rho must be <= 1.0")
        if self.kind == CONSONANT and self.rho <= 1.0:
            raise InventoryError(f"{self.label}: consonant rho must be > 1.0")
        if self.kind == CONSONANT:
            arts = tuple(sorted(set(self.articulators)))
            if not arts:
                raise InventoryError(f"{self.label}: consonant needs articulators")
            if any(i < 1 or i > N_PARAMS for i in arts):
                raise InventoryError(f"{self.label}: articulator index out of range")
            object.__setattr__(self, "articulators", arts)
        elif self.articulators:
            raise InventoryError(f"{self.label}: vowels carry no articulator set")

    @property
    def position(self):
        """Complex-plane position rho * e^(i theta)."""
        return self.rho * complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def is_vowel(self):
        return self.kind == VOWEL

    @property
    def is_front(self):
        """Front-branch membership: lower half of the vowel circle."""
        return math.sin(self.theta) < 0.0

    def reduced(self, factor=0.5):
        """Reduced form used as the start of a CV syllable: same place, half degree."""
        if not self.is_vowel:
            raise InventoryError(f"{self.label}: only vowels reduce")
        return PolarTarget(self.label + "_red", factor * self.rho, self.theta, VOWEL)


class Inventory:
    """Lookup table of phoneme targets plus the velar-routing rule."""

    def __init__(self, targets):
        self._targets = {}
        for t in targets:
            if t.label in self._targets:
                raise InventoryError(f"duplicate label {t.label!r}")
            self._targets[t.label] = t
        for needed in (VELAR_FRONT, VELAR_BACK):
            if needed not in self._targets:
                raise InventoryError(f"inventory is missing {needed!r}")

    def __contains__(self, label):
        return label in self._targets

    def __iter__(self):
        return iter(self._targets.values())

    def get(self, label):
        try:
            return self._targets[label]
        except KeyError:
            raise InventoryError(f"unknown phoneme label {label!r}") from None

    def vowels(self):
        return [t for t in self if t.is_vowel]

    def consonants(self):
        return [t for t in self if not t.is_vowel]

    def route_consonant(self, label, v2):
        """Resolve a consonant label in the context of the following vowel."""
        if label == VELAR_BASE:
            label = VELAR_FRONT if v2.is_front else VELAR_BACK
        target = self.get(label)
        if target.is_vowel:
            raise InventoryError(f"{label!r} is not a consonant")
        return target

    def resolve_vcv(self, v1_label, c_label, v2_label):
        """Resolve a V1-C-V2 triple, applying velar routing on V2."""
        v1 = self.get(v1_label)
        v2 = self.get(v2_label)
        if not (v1.is_vowel and v2.is_vowel):
            raise InventoryError("V1 and V2 must be vowels")
        c = self.route_consonant(c_label, v2)
        return v1, c, v2

    def resolve_cv(self, c_label, v_label):
        """Resolve a CV pair: the start point is the reduced target vowel."""
        v2 = self.get(v_label)
        if not v2.is_vowel:
            raise InventoryError(f"{v_label!r} is not a vowel")
        c = self.route_consonant(c_label, v2)
        return v2.reduced(), c, v2


def _parse_inventory_text(text, origin):
    targets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 5:
            raise DataError(f"{origin}:{lineno}: expected 5 columns, got {len(parts)}")
        label, kind, rho_s, theta_s, arts_s = parts
        try:
            rho = float(rho_s)
        except ValueError as exc:
            raise DataError(f"{origin}:{lineno}: bad rho {rho_s!r}") from exc
        theta = parse_angle(theta_s)
        if arts_s == "-":
            arts = ()
        else:
            try:
                arts = tuple(int(x) for x in arts_s.split(","))
            except ValueError as exc:
                raise DataError(f"{origin}:{lineno}: bad articulators {arts_s!r}") from exc
        targets.append(PolarTarget(label, rho, theta, kind, arts))
    if not targets:
        raise DataError(f"{origin}: no phoneme records found")
    return Inventory(targets)


def load_inventory(path=None):
    """Load an inventory file; with no path, load the packaged default."""
    if path is None:
        ref = resources.files("syllarc.data").joinpath("inventory.txt")
        return _parse_inventory_text(ref.read_text(encoding="utf-8"), "inventory.txt")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read inventory file {path}: {exc}") from exc
    return _parse_inventory_text(text, str(path))
