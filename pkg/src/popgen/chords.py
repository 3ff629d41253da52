"""Structured chord representation and the add/omit decoration algebra.

A chord is four parts: root pitch class, reduced chord type (triads and
seventh chords only), decorations (added 9th/11th/13th with a semitone
offset, omitted 1st/3rd/5th), and a bass pitch class. Richer symbols from
source data (9th chords, sus chords, 6th chords) are canonicalized into this
closed vocabulary at parse time.

Label grammar (documented in the README):

    <note>[:type][(ext{,ext})][/note]

    note ∈ {A-G}[#|b]
    type ∈ {maj, min, dim, aug, maj7, min7, 7, dim7, hdim7, minmaj7,
            sus2, sus4, 9, maj9, min9, 11, 13, maj6, min6, add9}
    ext  ∈ accidental-prefixed degree (9, b9, #9, bb9, ##9, 11, #11, ...)
           or omit1 / omit3 / omit5
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    InvalidDegree,
    MalformedSymbol,
    RootOrTypeMismatch,
    UnsupportedChordType,
)

NOTE_NAME_TO_PC = {
    "C": 0, "C#": 1, "Db": 1, "D": 2, "D#": 3, "Eb": 3, "E": 4, "Fb": 4,
    "E#": 5, "F": 5, "F#": 6, "Gb": 6, "G": 7, "G#": 8, "Ab": 8, "A": 9,
    "A#": 10, "Bb": 10, "B": 11, "Cb": 11, "B#": 0,
}

# Rendering uses sharps only; spelling is presentation-level.
PC_TO_NOTE_NAME = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"]

ADD_DEGREES = (9, 11, 13)
OMIT_DEGREES = (1, 3, 5)

# Semitone offset of each default add degree above the root, mod 12:
# major 9th = 14, perfect 11th = 17, major 13th = 21.
ADD_DEGREE_BASE_PC = {9: 2, 11: 5, 13: 9}

# Added notes may be altered by at most two semitones either way.
MAX_ADD_OFFSET = 2


class ChordType(Enum):
    """Reduced chord-type vocabulary: triads and seventh chords."""

    MAJ = "maj"
    MIN = "min"
    DIM = "dim"
    AUG = "aug"
    MAJ7 = "maj7"
    MIN7 = "min7"
    DOM7 = "7"
    DIM7 = "dim7"
    HDIM7 = "hdim7"
    MINMAJ7 = "minmaj7"


CHORD_TYPE_INTERVALS = {
    ChordType.MAJ: (0, 4, 7),
    ChordType.MIN: (0, 3, 7),
    ChordType.DIM: (0, 3, 6),
    ChordType.AUG: (0, 4, 8),
    ChordType.MAJ7: (0, 4, 7, 11),
    ChordType.MIN7: (0, 3, 7, 10),
    ChordType.DOM7: (0, 4, 7, 10),
    ChordType.DIM7: (0, 3, 6, 9),
    ChordType.HDIM7: (0, 3, 6, 10),
    ChordType.MINMAJ7: (0, 3, 7, 11),
}

# Which interval (semitones above root) each omittable degree points at,
# per chord type: index 0 = root, 1 = third, 2 = fifth.
def _omit_interval(chord_type: ChordType, degree: int) -> int:
    intervals = CHORD_TYPE_INTERVALS[chord_type]
    return intervals[{1: 0, 3: 1, 5: 2}[degree]]


# Default weights for decoration_distance. Monotone with musical impact:
# losing the root changes the chord most, upper extensions change it least.
DEFAULT_CHANGE_WEIGHTS = {
    ("omit", 1): 1.0,
    ("omit", 3): 0.6,
    ("omit", 5): 0.6,
    ("add", 9): 0.4,
    ("add", 11): 0.3,
    ("add", 13): 0.2,
}


@dataclass(frozen=True)
class Decorations:
    """The (add, omit) decoration tuple.

    ``add`` holds (degree, offset) pairs with at most one entry per degree;
    ``omit`` holds degrees from {1, 3, 5}. Immutable and hashable so it can
    key HMM state inventories.
    """

    add: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    omit: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        degrees = [d for d, _ in self.add]
        if len(degrees) != len(set(degrees)):
            raise InvalidDegree(f"duplicate add degree in {sorted(self.add)}")
        for degree, offset in self.add:
            if degree not in ADD_DEGREES:
                raise InvalidDegree(f"add degree must be one of {ADD_DEGREES}, got {degree}")
            if not -MAX_ADD_OFFSET <= offset <= MAX_ADD_OFFSET:
                raise InvalidDegree(f"add offset out of [-2, 2]: {offset}")
        for degree in self.omit:
            if degree not in OMIT_DEGREES:
                raise InvalidDegree(f"omit degree must be one of {OMIT_DEGREES}, got {degree}")

    @property
    def is_empty(self) -> bool:
        return not self.add and not self.omit

    def add_offset(self, degree: int) -> int | None:
        """Offset of the add entry for ``degree``, or None if absent."""
        for d, offset in self.add:
            if d == degree:
                return offset
        return None

    def sort_key(self):
        """Deterministic ordering key (for stable state inventories)."""
        return (sorted(self.add), sorted(self.omit))


NO_DECORATIONS = Decorations()


@dataclass(frozen=True)
class Chord:
    """Four-part chord: root, type, decorations, bass; plus a duration in 16th steps."""

    root: int
    chord_type: ChordType
    decorations: Decorations = NO_DECORATIONS
    bass: int | None = None
    duration: int = 4

    def __post_init__(self):
        if not 0 <= self.root <= 11:
            raise MalformedSymbol(f"root pitch class out of range: {self.root}")
        if self.bass is None:
            object.__setattr__(self, "bass", self.root)
        elif not 0 <= self.bass <= 11:
            raise MalformedSymbol(f"bass pitch class out of range: {self.bass}")
        if self.duration < 1:
            raise MalformedSymbol(f"duration must be >= 1 step, got {self.duration}")

    @property
    def symbol(self) -> str:
        return render_chord_symbol(self)

    def with_decorations(self, deco: Decorations) -> "Chord":
        return Chord(self.root, self.chord_type, deco, self.bass, self.duration)

    def with_duration(self, duration: int) -> "Chord":
        return Chord(self.root, self.chord_type, self.decorations, self.bass, duration)


def realize_pitch_classes(ch: Chord) -> set[int]:
    """Pitch-class set realized by a chord.

    Base intervals of the chord type transposed to the root, minus omitted
    degrees, plus added degrees at their offsets. Omitting a degree whose
    pitch is already absent changes nothing.
    """
    pcs = {(ch.root + iv) % 12 for iv in CHORD_TYPE_INTERVALS[ch.chord_type]}
    for degree in ch.decorations.omit:
        pcs.discard((ch.root + _omit_interval(ch.chord_type, degree)) % 12)
    for degree, offset in ch.decorations.add:
        pcs.add((ch.root + ADD_DEGREE_BASE_PC[degree] + offset) % 12)
    return pcs


def realize_relative_pitch_classes(ch: Chord) -> frozenset[int]:
    """Realized set re-rooted to 0; the root-independent chord signature."""
    return frozenset((pc - ch.root) % 12 for pc in realize_pitch_classes(ch))


def apply_add(ch: Chord, degree: int, offset: int = 0) -> Chord:
    """Insert (degree, offset) into the add set, replacing any entry for that degree."""
    if degree not in ADD_DEGREES:
        raise InvalidDegree(f"add degree must be one of {ADD_DEGREES}, got {degree}")
    if not -MAX_ADD_OFFSET <= offset <= MAX_ADD_OFFSET:
        raise InvalidDegree(f"add offset out of [-2, 2]: {offset}")
    add = frozenset({(d, o) for d, o in ch.decorations.add if d != degree} | {(degree, offset)})
    return ch.with_decorations(Decorations(add=add, omit=ch.decorations.omit))


def apply_omit(ch: Chord, degree: int) -> Chord:
    """Insert a degree into the omit set."""
    if degree not in OMIT_DEGREES:
        raise InvalidDegree(f"omit degree must be one of {OMIT_DEGREES}, got {degree}")
    return ch.with_decorations(
        Decorations(add=ch.decorations.add, omit=ch.decorations.omit | {degree})
    )


def decoration_set_distance(a: Decorations, b: Decorations, weights=None) -> float:
    """Weighted count of decoration coordinates on which ``a`` and ``b`` differ.

    Each add degree is one coordinate (value = offset or absent; an offset
    change counts the degree's weight once) and each omit degree is one
    boolean coordinate. This is a weighted Hamming distance, hence a metric.
    """
    w = DEFAULT_CHANGE_WEIGHTS if weights is None else weights
    dist = 0.0
    for degree in ADD_DEGREES:
        if a.add_offset(degree) != b.add_offset(degree):
            dist += w[("add", degree)]
    for degree in OMIT_DEGREES:
        if (degree in a.omit) != (degree in b.omit):
            dist += w[("omit", degree)]
    return dist


def decoration_distance(a: Chord, b: Chord, weights=None) -> float:
    """Change magnitude between two chords that share root and type."""
    if a.root != b.root or a.chord_type != b.chord_type:
        raise RootOrTypeMismatch(
            f"cannot compare decorations of {render_chord_symbol(a)} and {render_chord_symbol(b)}"
        )
    return decoration_set_distance(a.decorations, b.decorations, weights)


# --- parsing -----------------------------------------------------------------

_SYMBOL_RE = re.compile(
    r"^(?P<root>[A-G][#b]?)"
    r"(?::(?P<type>[a-zA-Z0-9]+))?"
    r"(?:\((?P<exts>[^)]*)\))?"
    r"(?:/(?P<bass>[A-G][#b]?))?$"
)

_EXT_RE = re.compile(r"^(?P<acc>[#b]{0,2})(?P<degree>9|11|13)$")

# Source labels outside the 10-type vocabulary, canonicalized to
# type + decorations. sus chords drop the third and add the suspension.
_TYPE_ALIASES: dict[str, tuple[ChordType, list[tuple[int, int]], list[int]]] = {
    "sus2": (ChordType.MAJ, [(9, 0)], [3]),
    "sus4": (ChordType.MAJ, [(11, 0)], [3]),
    "9": (ChordType.DOM7, [(9, 0)], []),
    "maj9": (ChordType.MAJ7, [(9, 0)], []),
    "min9": (ChordType.MIN7, [(9, 0)], []),
    "11": (ChordType.DOM7, [(9, 0), (11, 0)], []),
    "min11": (ChordType.MIN7, [(9, 0), (11, 0)], []),
    "13": (ChordType.DOM7, [(9, 0), (13, 0)], []),
    "maj13": (ChordType.MAJ7, [(9, 0), (13, 0)], []),
    "min13": (ChordType.MIN7, [(9, 0), (13, 0)], []),
    "6": (ChordType.MAJ, [(13, 0)], []),
    "maj6": (ChordType.MAJ, [(13, 0)], []),
    "min6": (ChordType.MIN, [(13, 0)], []),
    "add9": (ChordType.MAJ, [(9, 0)], []),
}

_TYPE_BY_VALUE = {t.value: t for t in ChordType}


def _parse_extension(token: str) -> tuple[int, int]:
    m = _EXT_RE.match(token)
    if not m:
        raise MalformedSymbol(f"unrecognized extension token {token!r}")
    offset = sum(1 if c == "#" else -1 for c in m.group("acc"))
    return int(m.group("degree")), offset


def parse_chord_symbol(text: str, duration: int = 4) -> Chord:
    """Parse a chord label into a structured :class:`Chord`.

    Raises :class:`MalformedSymbol` for unparseable text and
    :class:`UnsupportedChordType` for types outside the vocabulary that have
    no canonicalization.
    """
    m = _SYMBOL_RE.match(text.strip())
    if not m:
        raise MalformedSymbol(f"cannot parse chord label {text!r}")
    root = NOTE_NAME_TO_PC[m.group("root")]
    bass = NOTE_NAME_TO_PC[m.group("bass")] if m.group("bass") else None

    type_token = m.group("type") or "maj"
    adds: dict[int, int] = {}
    omits: set[int] = set()
    if type_token in _TYPE_BY_VALUE:
        chord_type = _TYPE_BY_VALUE[type_token]
    elif type_token in _TYPE_ALIASES:
        chord_type, alias_adds, alias_omits = _TYPE_ALIASES[type_token]
        adds.update(alias_adds)
        omits.update(alias_omits)
    else:
        raise UnsupportedChordType(f"chord type {type_token!r} in {text!r} is not supported")

    exts = m.group("exts")
    if exts is not None:
        tokens = [t.strip() for t in exts.split(",")] if exts.strip() else []
        if not tokens:
            raise MalformedSymbol(f"empty extension list in {text!r}")
        for token in tokens:
            if token.startswith("omit"):
                try:
                    degree = int(token[4:])
                except ValueError:
                    raise MalformedSymbol(f"bad omit token {token!r} in {text!r}") from None
                if degree not in OMIT_DEGREES:
                    raise MalformedSymbol(f"cannot omit degree {degree} in {text!r}")
                omits.add(degree)
            else:
                degree, offset = _parse_extension(token)
                adds[degree] = offset

    deco = Decorations(add=frozenset(adds.items()), omit=frozenset(omits))
    return Chord(root=root, chord_type=chord_type, decorations=deco, bass=bass,
                 duration=duration)


def expand_timeline(progression: list[Chord], n: int) -> list[Chord]:
    """Per-step chord lookup: progression expanded by duration to ``n`` steps."""
    from .errors import LengthMismatch  # local import to keep module deps flat

    total = sum(ch.duration for ch in progression)
    if total != n:
        raise LengthMismatch(f"progression covers {total} steps, phrase needs {n}")
    steps: list[Chord] = []
    for ch in progression:
        steps.extend([ch] * ch.duration)
    return steps


def render_chord_symbol(ch: Chord) -> str:
    """Inverse of :func:`parse_chord_symbol`: ``parse(render(ch)) == ch``."""
    parts = [PC_TO_NOTE_NAME[ch.root], ":", ch.chord_type.value]
    exts = []
    for degree, offset in sorted(ch.decorations.add):
        acc = "#" * offset if offset > 0 else "b" * (-offset)
        exts.append(f"{acc}{degree}")
    for degree in sorted(ch.decorations.omit):
        exts.append(f"omit{degree}")
    if exts:
        parts.append(f"({','.join(exts)})")
    if ch.bass != ch.root:
        parts.append(f"/{PC_TO_NOTE_NAME[ch.bass]}")
    return "".join(parts)
