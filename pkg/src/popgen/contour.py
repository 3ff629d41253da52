"""Step-state melody tracks and the dyadic layered-signal decomposition.

A melody is a step sequence at 16th-note resolution where each step is a
MIDI pitch, ``SILENCE`` or ``SUSTAIN`` (sentinel ints, piano-roll style).
Its continuous counterpart is a real-valued pitch curve; a curve splits into
layered signals s0..sp where s0 is a constant trend and layer k carries only
the detail visible at sample stride n / 2**k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AllSilence,
    BadLayerIndex,
    LengthMismatch,
    LengthNotDivisible,
)

SILENCE = -1
SUSTAIN = -2

MIN_PITCH = 0
MAX_PITCH = 127


def is_pitch(step: int) -> bool:
    return MIN_PITCH <= step <= MAX_PITCH


@dataclass(frozen=True)
class Meter:
    beats_per_bar: int = 4
    steps_per_beat: int = 4

    @property
    def steps_per_bar(self) -> int:
        return self.beats_per_bar * self.steps_per_beat


FOUR_FOUR = Meter()


@dataclass(frozen=True)
class MelodyTrack:
    """Monophonic step sequence over {MIDI pitch, SILENCE, SUSTAIN}."""

    steps: tuple[int, ...]
    meter: Meter = FOUR_FOUR

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))
        self.validate()

    def validate(self):
        if len(self.steps) < 1:
            raise ValueError("melody track must have at least one step")
        if self.steps[0] == SUSTAIN:
            raise ValueError("first step may not be a sustain")
        prev = self.steps[0]
        for i, step in enumerate(self.steps):
            if step != SILENCE and step != SUSTAIN and not is_pitch(step):
                raise ValueError(f"step {i} is not a pitch/silence/sustain: {step}")
            if step == SUSTAIN and not (is_pitch(prev) or prev == SUSTAIN):
                raise ValueError(f"sustain at step {i} does not extend a note")
            prev = step

    def __len__(self) -> int:
        return len(self.steps)

    def onsets(self) -> list[int]:
        """Indices of note onsets (pitched steps)."""
        return [i for i, s in enumerate(self.steps) if is_pitch(s)]

    def note_duration(self, onset: int) -> int:
        """Steps the note starting at ``onset`` sounds, including its sustains."""
        dur = 1
        for s in self.steps[onset + 1:]:
            if s != SUSTAIN:
                break
            dur += 1
        return dur

    def sounding_pitch(self, index: int) -> int | None:
        """Pitch sounding at ``index`` (resolving sustains), or None if silent."""
        for i in range(index, -1, -1):
            s = self.steps[i]
            if is_pitch(s):
                return s
            if s == SILENCE:
                return None
        return None

    def bar_count(self) -> int:
        return (len(self.steps) + self.meter.steps_per_bar - 1) // self.meter.steps_per_bar


def melody_to_pitch_curve(track: MelodyTrack) -> np.ndarray:
    """Continuous pitch curve of a melody.

    Sustain and silence hold the previous curve value; leading silences take
    the first pitched value. Raises :class:`AllSilence` if no step is pitched.
    """
    pitched = [s for s in track.steps if is_pitch(s)]
    if not pitched:
        raise AllSilence("melody has no pitched step")
    curve = np.empty(len(track.steps), dtype=float)
    current = float(pitched[0])
    for i, s in enumerate(track.steps):
        if is_pitch(s):
            current = float(s)
        curve[i] = current
    return curve


@dataclass
class LayeredSignals:
    """Dyadic decomposition s0..sp of a contour; all layers full length.

    ``sum(layers)`` reconstructs the decomposed curve (exactly when the
    finest layer runs at stride 1, i.e. 2**p == n).
    """

    p: int
    layers: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.p < 1:
            raise BadLayerIndex(f"need at least one stochastic layer, got p={self.p}")
        if len(self.layers) != self.p + 1:
            raise LengthMismatch(
                f"expected {self.p + 1} layers (s0..s{self.p}), got {len(self.layers)}"
            )
        n = len(self.layers[0])
        if any(len(layer) != n for layer in self.layers):
            raise LengthMismatch("layers have unequal lengths")
        if n % (1 << self.p) != 0:
            raise LengthNotDivisible(f"length {n} not divisible by 2**{self.p}")

    @property
    def n(self) -> int:
        return len(self.layers[0])


def _grid_sample_hold(curve: np.ndarray, stride: int) -> np.ndarray:
    """Zero-order hold of ``curve`` sampled at indices 0, stride, 2*stride, ..."""
    return np.repeat(curve[::stride], stride)


def decompose(curve: np.ndarray, p: int) -> LayeredSignals:
    """Split a curve into a constant trend plus p detail layers.

    Layer k is the zero-order-hold resample at stride n/2**k minus the
    coarser resample, so the layers telescope and layer k vanishes on the
    layer-(k-1) grid.
    """
    curve = np.asarray(curve, dtype=float)
    n = len(curve)
    if p < 1:
        raise BadLayerIndex(f"need at least one stochastic layer, got p={p}")
    if n % (1 << p) != 0:
        raise LengthNotDivisible(f"curve length {n} not divisible by 2**{p}")
    layers = [np.full(n, curve[0])]
    prev = layers[0]
    for k in range(1, p + 1):
        x_k = _grid_sample_hold(curve, n >> k)
        layers.append(x_k - prev)
        prev = x_k
    return LayeredSignals(p=p, layers=layers)


def reconstruct(ls: LayeredSignals) -> np.ndarray:
    """Elementwise sum of all layers."""
    return np.sum(ls.layers, axis=0)


def overlap_zero_mask(p: int, n: int, k: int) -> np.ndarray:
    """Boolean mask of indices where layer k must be zero.

    Those are the layer-(k-1) grid points (stride n / 2**(k-1)): the coarser
    layer already carries the curve value there.
    """
    if not 1 <= k <= p:
        raise BadLayerIndex(f"layer index {k} outside 1..{p}")
    if n % (1 << p) != 0:
        raise LengthNotDivisible(f"length {n} not divisible by 2**{p}")
    mask = np.zeros(n, dtype=bool)
    mask[:: n >> (k - 1)] = True
    return mask


def default_layer_count(n: int) -> int:
    """Largest p with 2**p dividing n: the finest dyadic layering available."""
    p = (n & -n).bit_length() - 1 if n > 0 else 0
    if p < 1:
        raise LengthNotDivisible(f"phrase length {n} has no dyadic layering")
    return p
