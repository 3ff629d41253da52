"""Chord-context quantizer: continuous contours to MIDI pitch steps.

Implements the error term of the melody model. Rhythm falls out of the
contour itself: adjacent values closer than the merge threshold eta become
sustains. Every other step picks a pitch by a Gaussian centered on the
contour value, weighted by how well each pitch class fits the active chord.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chords import Chord, ChordType, expand_timeline, realize_relative_pitch_classes
from .contour import FOUR_FOUR, SUSTAIN, MelodyTrack, Meter, is_pitch
from .errors import EmptyCorpus, EmptyRange, LengthMismatch

MAJOR_SCALE = frozenset({0, 2, 4, 5, 7, 9, 11})

CHORD_TONE_WEIGHT = 1.0
SCALE_TONE_WEIGHT = 0.3
OTHER_TONE_WEIGHT = 0.05

Signature = tuple[ChordType, frozenset[int]]


def chord_signature(ch: Chord) -> Signature:
    """Root-independent keying of a chord: type plus realized relative set."""
    return (ch.chord_type, realize_relative_pitch_classes(ch))


def rule_based_prior(ch: Chord) -> np.ndarray:
    """Fallback pitch-class weights (absolute, normalized) for a chord.

    Chord tones 1.0, other major-scale-of-root tones 0.3, everything else
    0.05, then normalized to sum 1.
    """
    from .chords import realize_pitch_classes

    chord_pcs = realize_pitch_classes(ch)
    scale_pcs = {(ch.root + s) % 12 for s in MAJOR_SCALE}
    row = np.full(12, OTHER_TONE_WEIGHT)
    for pc in scale_pcs:
        row[pc] = SCALE_TONE_WEIGHT
    for pc in chord_pcs:
        row[pc] = CHORD_TONE_WEIGHT
    return row / row.sum()


@dataclass
class PitchContextModel:
    """p(pitch class | chord) table, learned from data or rule-based.

    Learned rows are stored relative to the chord root and rotated into
    absolute pitch classes on lookup; signatures never seen in training fall
    back to the rule-based prior.
    """

    rows: dict[Signature, np.ndarray] | None = None

    @property
    def mode(self) -> str:
        return "rule-based" if self.rows is None else "learned"

    def weight_row(self, ch: Chord) -> np.ndarray:
        if self.rows is not None:
            rel = self.rows.get(chord_signature(ch))
            if rel is not None:
                return np.roll(rel, ch.root)
        return rule_based_prior(ch)


RULE_BASED_MODEL = PitchContextModel()


def train_pitch_context(corpus: list[tuple[MelodyTrack, list[Chord]]]) -> PitchContextModel:
    """Count sounding pitch classes relative to the chord root, per signature.

    Sustains count toward their held pitch; silences contribute nothing.
    Rows are add-one smoothed so no pitch class gets zero weight.
    """
    if not corpus:
        raise EmptyCorpus("pitch-context training needs at least one melody/chord pair")
    counts: dict[Signature, np.ndarray] = {}
    for track, chords in corpus:
        timeline = expand_timeline(chords, len(track))
        for i in range(len(track)):
            pitch = track.sounding_pitch(i)
            if pitch is None:
                continue
            ch = timeline[i]
            row = counts.setdefault(chord_signature(ch), np.zeros(12))
            row[(pitch - ch.root) % 12] += 1
    rows = {sig: (row + 1.0) / (row.sum() + 12.0) for sig, row in counts.items()}
    return PitchContextModel(rows=rows)


@dataclass(frozen=True)
class QuantizeConfig:
    """Knobs of the quantizer: merge threshold, Gaussian width, range, mode."""

    eta: float = 0.5
    sigma_q: float = 1.0
    pitch_range: tuple[int, int] = (48, 84)
    mode: str = "argmax"  # or "sample"

    def __post_init__(self):
        if self.eta <= 0 or self.eta >= 12:
            raise ValueError(f"eta must be in (0, 12), got {self.eta}")
        if self.sigma_q <= 0:
            raise ValueError(f"sigma_q must be > 0, got {self.sigma_q}")
        low, high = self.pitch_range
        if not (0 <= low < high <= 127):
            raise EmptyRange(f"pitch range must satisfy 0 <= low < high <= 127: {self.pitch_range}")
        if self.mode not in ("argmax", "sample"):
            raise ValueError(f"mode must be 'argmax' or 'sample', got {self.mode!r}")


def _candidate_scores(candidates: np.ndarray, center: float, sigma: float,
                      weights: np.ndarray) -> np.ndarray:
    # Unnormalized Gaussian with the peak rescaled to 1 keeps tiny sigmas stable.
    exponent = -0.5 * ((candidates - center) / sigma) ** 2
    return np.exp(exponent - exponent.max()) * weights[candidates % 12]


def quantize(contour: np.ndarray, chords: list[Chord], model: PitchContextModel,
             cfg: QuantizeConfig, seed=None, meter: Meter = FOUR_FOUR) -> MelodyTrack:
    """Quantize a contour into a melody track under chord context.

    Step i becomes a sustain when |c_i - c_{i-1}| < eta (never the first
    step); otherwise the pitch maximizing Gaussian-times-chord-weight wins
    (ties to the lower pitch), or is sampled proportionally in "sample" mode.
    """
    contour = np.asarray(contour, dtype=float)
    timeline = expand_timeline(chords, len(contour))
    low, high = cfg.pitch_range
    candidates = np.arange(low, high + 1)
    rng = np.random.default_rng(seed) if cfg.mode == "sample" else None

    steps: list[int] = []
    weight_cache: dict[int, np.ndarray] = {}
    for i, center in enumerate(contour):
        if i > 0 and abs(center - contour[i - 1]) < cfg.eta:
            steps.append(SUSTAIN)
            continue
        ch = timeline[i]
        key = id(ch)
        if key not in weight_cache:
            weight_cache[key] = model.weight_row(ch)
        scores = _candidate_scores(candidates, center, cfg.sigma_q, weight_cache[key])
        if rng is None:
            pitch = int(candidates[int(np.argmax(scores))])
        else:
            pitch = int(rng.choice(candidates, p=scores / scores.sum()))
        steps.append(pitch)
    return MelodyTrack(steps=tuple(steps), meter=meter)
