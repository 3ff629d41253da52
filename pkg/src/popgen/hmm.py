"""Decoration HMM: learn how chords get decorated, re-decorate progressions.

Hidden states are the (add, omit) decoration tuples observed in a training
corpus; observations are the undecorated chord skeletons (type, bucketed
duration, and the root intervals to the neighbouring chords). Decoding runs
an exact top-N list Viterbi, then a style-fit score picks the winner among
the N best paths.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chords import Chord, ChordType, Decorations, decoration_set_distance
from .errors import (
    EmptyCorpus,
    EmptyObservation,
    EmptyProgression,
    LengthMismatch,
    UnknownState,
)

CHORD_TYPE_ORDER = list(ChordType)
_TYPE_INDEX = {t: i for i, t in enumerate(CHORD_TYPE_ORDER)}

# Duration buckets in 16th steps: raw durations are too sparse to emit.
DURATION_BUCKETS = ((1, 2), (3, 4), (5, 8), (9, 16), (17, None))

# Folded root intervals live in -5..6; index 12 is the sequence boundary.
N_INTERVAL_SYMBOLS = 13
BOUNDARY = 12

MODEL_FORMAT = "popgen-decoration-hmm"
MODEL_VERSION = 1


def duration_bucket(steps: int) -> int:
    for i, (lo, hi) in enumerate(DURATION_BUCKETS):
        if hi is None or steps <= hi:
            return i
    raise AssertionError("unreachable")


def fold_interval(from_root: int, to_root: int) -> int:
    """Signed pitch-class difference folded to -5..6 (ties go to +6)."""
    diff = (to_root - from_root) % 12
    return diff if diff <= 6 else diff - 12


def _interval_symbol(interval: int | None) -> int:
    return BOUNDARY if interval is None else interval + 5


@dataclass(frozen=True)
class ChordObservation:
    """Observable chord skeleton: root, type, duration, neighbour intervals."""

    root: int
    chord_type: ChordType
    duration: int
    prev_interval: int | None
    next_interval: int | None

    @property
    def connection_symbol(self) -> int:
        return _interval_symbol(self.prev_interval) * N_INTERVAL_SYMBOLS + _interval_symbol(
            self.next_interval
        )


def extract_observation_sequence(
    progression: list[Chord],
) -> tuple[list[ChordObservation], list[Decorations]]:
    """Split a progression into observed skeletons and hidden decoration states."""
    if not progression:
        raise EmptyProgression("cannot extract observations from an empty progression")
    observations = []
    for i, ch in enumerate(progression):
        prev_iv = fold_interval(progression[i - 1].root, ch.root) if i > 0 else None
        next_iv = fold_interval(ch.root, progression[i + 1].root) if i < len(progression) - 1 else None
        observations.append(
            ChordObservation(ch.root, ch.chord_type, ch.duration, prev_iv, next_iv)
        )
    return observations, [ch.decorations for ch in progression]


def _smooth(counts: np.ndarray, alpha: float) -> np.ndarray:
    """Add-alpha smoothing along the last axis; rows become stochastic."""
    smoothed = counts + alpha
    return smoothed / smoothed.sum(axis=-1, keepdims=True)


@dataclass
class DecorationHmm:
    """Trained transition and factored-emission tables over decoration states."""

    states: tuple[Decorations, ...]
    initial: np.ndarray
    transition: np.ndarray
    emit_type: np.ndarray
    emit_duration: np.ndarray
    emit_connection: np.ndarray
    smoothing_alpha: float
    state_ids: dict[Decorations, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.state_ids = {d: i for i, d in enumerate(self.states)}
        for name in ("initial", "transition", "emit_type", "emit_duration", "emit_connection"):
            table = getattr(self, name)
            if not np.allclose(table.sum(axis=-1), 1.0, atol=1e-9):
                raise ValueError(f"{name} rows are not stochastic")
            if (table <= 0).any():
                raise ValueError(f"{name} contains non-positive entries after smoothing")

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_id(self, deco: Decorations) -> int:
        try:
            return self.state_ids[deco]
        except KeyError:
            raise UnknownState(f"decoration {deco} not in the trained inventory") from None

    # --- serialization (versioned JSON document) ---

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "smoothing_alpha": self.smoothing_alpha,
            "states": [
                {"add": sorted(d.add), "omit": sorted(d.omit)} for d in self.states
            ],
            "initial": self.initial.tolist(),
            "transition": self.transition.tolist(),
            "emit_type": self.emit_type.tolist(),
            "emit_duration": self.emit_duration.tolist(),
            "emit_connection": self.emit_connection.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DecorationHmm":
        if doc.get("format") != MODEL_FORMAT:
            raise ValueError(f"not a decoration HMM document: {doc.get('format')!r}")
        if doc.get("version") != MODEL_VERSION:
            raise ValueError(f"unsupported model version {doc.get('version')!r}")
        states = tuple(
            Decorations(
                add=frozenset((int(d), int(o)) for d, o in s["add"]),
                omit=frozenset(int(d) for d in s["omit"]),
            )
            for s in doc["states"]
        )
        return cls(
            states=states,
            initial=np.asarray(doc["initial"], dtype=float),
            transition=np.asarray(doc["transition"], dtype=float),
            emit_type=np.asarray(doc["emit_type"], dtype=float),
            emit_duration=np.asarray(doc["emit_duration"], dtype=float),
            emit_connection=np.asarray(doc["emit_connection"], dtype=float),
            smoothing_alpha=float(doc["smoothing_alpha"]),
        )

    def save(self, path: str | Path):
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path: str | Path) -> "DecorationHmm":
        return cls.from_dict(json.loads(Path(path).read_text()))


def train(corpus: list[list[Chord]], alpha: float = 1.0) -> DecorationHmm:
    """Count-and-smooth training; states are fully observed, so no EM."""
    if not corpus:
        raise EmptyCorpus("decoration HMM training needs at least one progression")
    if alpha <= 0:
        raise ValueError(f"smoothing alpha must be > 0, got {alpha}")

    sequences = [extract_observation_sequence(p) for p in corpus]
    inventory = {Decorations()}
    for _, states in sequences:
        inventory.update(states)
    states = tuple(sorted(inventory, key=Decorations.sort_key))
    ids = {d: i for i, d in enumerate(states)}

    s = len(states)
    initial = np.zeros(s)
    transition = np.zeros((s, s))
    emit_type = np.zeros((s, len(CHORD_TYPE_ORDER)))
    emit_duration = np.zeros((s, len(DURATION_BUCKETS)))
    emit_connection = np.zeros((s, N_INTERVAL_SYMBOLS * N_INTERVAL_SYMBOLS))

    for observations, hidden in sequences:
        state_ids = [ids[d] for d in hidden]
        initial[state_ids[0]] += 1
        for prev, cur in zip(state_ids, state_ids[1:]):
            transition[prev, cur] += 1
        for obs, sid in zip(observations, state_ids):
            emit_type[sid, _TYPE_INDEX[obs.chord_type]] += 1
            emit_duration[sid, duration_bucket(obs.duration)] += 1
            emit_connection[sid, obs.connection_symbol] += 1

    return DecorationHmm(
        states=states,
        initial=_smooth(initial, alpha),
        transition=_smooth(transition, alpha),
        emit_type=_smooth(emit_type, alpha),
        emit_duration=_smooth(emit_duration, alpha),
        emit_connection=_smooth(emit_connection, alpha),
        smoothing_alpha=alpha,
    )


def _emission_log_matrix(model: DecorationHmm, obs: ChordObservation) -> np.ndarray:
    """log emission of one observation under every state, shape (S,)."""
    return (
        np.log(model.emit_type[:, _TYPE_INDEX[obs.chord_type]])
        + np.log(model.emit_duration[:, duration_bucket(obs.duration)])
        + np.log(model.emit_connection[:, obs.connection_symbol])
    )


def emission_log_prob(model: DecorationHmm, obs: ChordObservation, deco: Decorations) -> float:
    """log p(obs | state): sum of the three factor log-masses."""
    sid = model.state_id(deco)
    return float(_emission_log_matrix(model, obs)[sid])


def viterbi_top_n(
    model: DecorationHmm, observations: list[ChordObservation], n: int
) -> list[tuple[list[int], float]]:
    """Exact N-best state paths, best first.

    List Viterbi: each state keeps its n best partial paths per step; the
    global n best full paths are extensions of those, so no pruning error.
    Returns (state-id path, log score) pairs ordered by descending score,
    ties broken by path order for determinism.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not observations:
        raise EmptyObservation("cannot decode an empty observation sequence")

    log_initial = np.log(model.initial)
    log_transition = np.log(model.transition)

    emit0 = _emission_log_matrix(model, observations[0])
    lists: list[list[tuple[float, tuple[int, ...]]]] = [
        [(float(log_initial[s] + emit0[s]), (s,))] for s in range(model.n_states)
    ]
    for obs in observations[1:]:
        emit = _emission_log_matrix(model, obs)
        new_lists = []
        for j in range(model.n_states):
            extended = [
                (score + float(log_transition[i, j]) + float(emit[j]), path + (j,))
                for i in range(model.n_states)
                for score, path in lists[i]
            ]
            extended.sort(key=lambda e: (-e[0], e[1]))
            new_lists.append(extended[:n])
        lists = new_lists

    merged = [entry for per_state in lists for entry in per_state]
    merged.sort(key=lambda e: (-e[0], e[1]))
    return [(list(path), score) for score, path in merged[:n]]


@dataclass(frozen=True)
class StyleWeights:
    """Weights of the path-selection score: likelihood vs change vs repetition."""

    w_ll: float = 1.0
    w_change: float = 0.5
    w_rep: float = 0.2


STYLE_PROFILES = {
    "pop": StyleWeights(w_ll=1.0, w_change=0.5, w_rep=0.2),
    "jazz": StyleWeights(w_ll=1.0, w_change=0.1, w_rep=0.3),
}


def path_log_likelihood(
    model: DecorationHmm, observations: list[ChordObservation], decorated: list[Decorations]
) -> float:
    """Joint log probability of a state path and the observations."""
    if len(observations) != len(decorated):
        raise LengthMismatch("observation and state sequences differ in length")
    ids = [model.state_id(d) for d in decorated]
    ll = float(np.log(model.initial[ids[0]]))
    for prev, cur in zip(ids, ids[1:]):
        ll += float(np.log(model.transition[prev, cur]))
    for obs, sid in zip(observations, ids):
        ll += float(_emission_log_matrix(model, obs)[sid])
    return ll


def style_fit_score(
    progression: list[Chord],
    decorated: list[Decorations],
    model: DecorationHmm,
    weights: StyleWeights,
) -> float:
    """Higher-is-better fit of a decoration path to a progression.

    Likelihood, minus how far the decorations moved from the original ones,
    minus a penalty per adjacent repeated decoration state.
    """
    if len(progression) != len(decorated):
        raise LengthMismatch("progression and decoration path differ in length")
    observations, _ = extract_observation_sequence(progression)
    ll = path_log_likelihood(model, observations, decorated)
    change = sum(
        decoration_set_distance(ch.decorations, deco)
        for ch, deco in zip(progression, decorated)
    )
    repeats = sum(1 for a, b in zip(decorated, decorated[1:]) if a == b)
    return weights.w_ll * ll - weights.w_change * change - weights.w_rep * repeats


def decorate_progression_detailed(
    model: DecorationHmm,
    progression: list[Chord],
    n: int = 10,
    weights: StyleWeights = STYLE_PROFILES["pop"],
) -> tuple[list[Chord], dict]:
    """Re-decorate a progression; also report which candidate path won.

    Decodes the top-n paths, re-scores them with the style-fit function and
    applies the winner's decorations. Root, type, bass and duration of every
    chord are preserved.
    """
    observations, _ = extract_observation_sequence(progression)
    candidates = viterbi_top_n(model, observations, n)
    best_rank, best_score, best_path = None, -math.inf, None
    for rank, (path, _) in enumerate(candidates):
        decorations = [model.states[sid] for sid in path]
        score = style_fit_score(progression, decorations, model, weights)
        if score > best_score:
            best_rank, best_score, best_path = rank, score, decorations
    decorated = [ch.with_decorations(d) for ch, d in zip(progression, best_path)]
    report = {
        "candidates": len(candidates),
        "chosen_rank": best_rank,
        "style_score": best_score,
        "viterbi_log_score": candidates[best_rank][1],
    }
    return decorated, report


def decorate_progression(
    model: DecorationHmm,
    progression: list[Chord],
    n: int = 10,
    weights: StyleWeights = STYLE_PROFILES["pop"],
) -> list[Chord]:
    decorated, _ = decorate_progression_detailed(model, progression, n, weights)
    return decorated
