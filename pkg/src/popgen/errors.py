"""Exception hierarchy shared across the package.

Everything derives from ``PopgenError`` so callers can catch broadly; the
domain-specific classes double as ``ValueError`` where the failure is a bad
argument, so generic code that expects ``ValueError`` keeps working.
"""


class PopgenError(Exception):
    """Base class for all popgen errors."""


class MalformedSymbol(PopgenError, ValueError):
    """Chord label string could not be parsed."""


class UnsupportedChordType(PopgenError, ValueError):
    """Chord type outside the reduced triad/seventh vocabulary."""


class InvalidDegree(PopgenError, ValueError):
    """Decoration degree outside its allowed set."""


class RootOrTypeMismatch(PopgenError, ValueError):
    """Decoration distance requested across different roots or chord types."""


class EmptyProgression(PopgenError, ValueError):
    """Operation requires a non-empty chord progression."""


class EmptyCorpus(PopgenError, ValueError):
    """Training requires a non-empty corpus."""


class UnknownState(PopgenError, KeyError):
    """Decoration state not present in the trained model inventory."""


class EmptyObservation(PopgenError, ValueError):
    """Viterbi decoding requires a non-empty observation sequence."""


class LengthMismatch(PopgenError, ValueError):
    """Sequences that must align have different lengths."""


class LengthNotDivisible(PopgenError, ValueError):
    """Signal length is not divisible by 2**p."""


class BadLayerIndex(PopgenError, ValueError):
    """Layer index outside 1..p."""


class AllSilence(PopgenError, ValueError):
    """Melody contains no pitched step, so no curve can be derived."""


class NonStationaryParams(PopgenError, ValueError):
    """AR coefficients violate |phi| < 1 / |Phi| < 1 (or MA invertibility)."""


class ConstantSeries(PopgenError, ValueError):
    """Autocorrelation is undefined for a constant series."""


class SeriesTooShort(PopgenError, ValueError):
    """Series shorter than the requested maximum lag."""


class EmptyRange(PopgenError, ValueError):
    """Quantizer pitch range contains no candidates."""


class NotAnOnset(PopgenError, ValueError):
    """Index does not point at a note onset."""


class EmptyTrack(PopgenError, ValueError):
    """Operation requires a track with at least one onset."""


class BarOutOfRange(PopgenError, IndexError):
    """Bar index outside the track."""


class EmptySamples(PopgenError, ValueError):
    """Pattern estimation requires at least one sample bar."""


class PeriodMismatch(PopgenError, ValueError):
    """Pattern sample bars have different lengths."""


class ParseError(PopgenError, ValueError):
    """A data file could not be parsed.

    Carries the offending line number when known.
    """

    def __init__(self, reason: str, line: int | None = None):
        self.line = line
        self.reason = reason
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{reason}{where}")


class DurationMismatch(PopgenError, ValueError):
    """Progression durations do not sum to the configured phrase length."""


class NoFilesFound(PopgenError, FileNotFoundError):
    """Corpus directory contains no readable annotation files."""


class PipelineStageError(PopgenError, RuntimeError):
    """A pipeline stage produced output that fails its invariants."""

    def __init__(self, stage: str, reason: str):
        self.stage = stage
        super().__init__(f"[{stage}] {reason}")
