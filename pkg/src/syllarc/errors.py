"""Exception hierarchy for syllarc.

Every error raised on a contract violation derives from SyllarcError so the
command-line runner can map failures onto its exit-code scheme:
configuration problems -> 2, data-asset problems -> 3, pipeline failures -> 4.
"""


class SyllarcError(Exception):
    """Base class for all syllarc errors."""


class ConfigError(SyllarcError):
    """Bad run configuration (flags, unknown corpus, unwritable output dir)."""

    exit_code = 2


class DataError(SyllarcError):
    """Missing or malformed data asset (inventory, tract tables, calibration)."""

    exit_code = 3


class PipelineError(SyllarcError):
    """Failure while synthesizing or analyzing a syllable."""

    exit_code = 4


class ParameterError(PipelineError):
    """Numeric argument outside its admissible domain."""


class InventoryError(DataError):
    """Unknown phoneme label or inventory record violating its invariants."""


class CompositionError(PipelineError):
    """Articulator composition called with inconsistent inputs."""


class AcousticDomainError(PipelineError):
    """Acoustic solver called on a tract outside its numeric domain."""


class ExtractionError(PipelineError):
    """Too few spectral peaks to report the requested formant count."""


class SamplingError(PipelineError):
    """No valid formant frame near a requested sampling offset."""


class FitError(PipelineError):
    """Regression input degenerate or too small."""


class CompletenessError(PipelineError):
    """A corpus-level table was requested from an incomplete item set."""


class SizeError(PipelineError):
    """Signal too short for the requested analysis window."""
