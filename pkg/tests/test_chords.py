"""Chord representation, parsing, and decoration algebra."""

import itertools

import pytest
from hypothesis import given, strategies as st

from popgen.chords import (
    ADD_DEGREES,
    MAX_ADD_OFFSET,
    OMIT_DEGREES,
    Chord,
    ChordType,
    Decorations,
    apply_add,
    apply_omit,
    decoration_distance,
    expand_timeline,
    parse_chord_symbol,
    realize_pitch_classes,
    render_chord_symbol,
)
from popgen.errors import (
    InvalidDegree,
    LengthMismatch,
    MalformedSymbol,
    RootOrTypeMismatch,
    UnsupportedChordType,
)


class TestParse:
    def test_plain_major(self):
        ch = parse_chord_symbol("C:maj", duration=4)
        assert ch == Chord(root=0, chord_type=ChordType.MAJ, duration=4)
        assert ch.bass == 0
        assert ch.decorations.is_empty

    def test_slash_sets_bass(self):
        ch = parse_chord_symbol("E:min7/G")
        assert ch.root == 4
        assert ch.chord_type == ChordType.MIN7
        assert ch.bass == 7
        assert ch.decorations.is_empty

    def test_extension_to_add_set(self):
        ch = parse_chord_symbol("C:maj(9)")
        assert ch.root == 0
        assert ch.chord_type == ChordType.MAJ
        assert ch.decorations.add == frozenset({(9, 0)})
        assert ch.bass == 0

    def test_bare_root_is_major(self):
        assert parse_chord_symbol("G").chord_type == ChordType.MAJ

    def test_flat_root(self):
        assert parse_chord_symbol("Bb:min").root == 10

    def test_dom7_shorthand(self):
        assert parse_chord_symbol("G:7").chord_type == ChordType.DOM7

    def test_accidental_extensions(self):
        ch = parse_chord_symbol("C:7(#9,b13)")
        assert ch.decorations.add == frozenset({(9, 1), (13, -1)})

    def test_omit_tokens(self):
        ch = parse_chord_symbol("E:min7(omit3)")
        assert ch.decorations.omit == frozenset({3})

    def test_sus4_canonicalizes(self):
        ch = parse_chord_symbol("G:sus4")
        assert ch.chord_type == ChordType.MAJ
        assert ch.decorations.add == frozenset({(11, 0)})
        assert ch.decorations.omit == frozenset({3})
        # realized as the sus4 sonority
        assert realize_pitch_classes(ch) == {7, 0, 2}

    def test_ninth_chord_canonicalizes(self):
        ch = parse_chord_symbol("C:9")
        assert ch.chord_type == ChordType.DOM7
        assert ch.decorations.add == frozenset({(9, 0)})

    def test_malformed(self):
        for bad in ["", "H:maj", "C:maj(", "C:maj()", "C:maj(foo)", "C:maj(omit2)", "xyz"]:
            with pytest.raises(MalformedSymbol):
                parse_chord_symbol(bad)

    def test_unsupported_type(self):
        with pytest.raises(UnsupportedChordType):
            parse_chord_symbol("C:power5")


class TestRealize:
    def test_major_triad(self):
        assert realize_pitch_classes(parse_chord_symbol("C:maj")) == {0, 4, 7}

    def test_em7_omit_root_is_g_major(self):
        # dropping the root of Em7 leaves the G major triad
        ch = apply_omit(parse_chord_symbol("E:min7"), 1)
        assert realize_pitch_classes(ch) == {7, 11, 2}

    def test_cmaj_add4(self):
        ch = apply_add(parse_chord_symbol("C:maj"), 11, 0)
        assert realize_pitch_classes(ch) == {0, 4, 5, 7}

    def test_sharp11_on_maj7(self):
        ch = apply_add(parse_chord_symbol("C:maj7"), 11, 1)
        pcs = realize_pitch_classes(ch)
        assert 6 in pcs  # the #11
        assert 2 not in pcs  # no 9th present

    def test_size_bounds(self):
        for kind in ChordType:
            for degree in ADD_DEGREES:
                ch = apply_add(Chord(root=5, chord_type=kind), degree, 1)
                assert 1 <= len(realize_pitch_classes(ch)) <= 7


class TestDecorationOps:
    def test_add_idempotent(self):
        base = parse_chord_symbol("C:maj")
        once = apply_add(base, 9, 0)
        twice = apply_add(once, 9, 0)
        assert once == twice

    def test_add_replaces_offset(self):
        ch = apply_add(apply_add(parse_chord_symbol("C:maj"), 9, 0), 9, 1)
        assert ch.decorations.add == frozenset({(9, 1)})

    def test_omit_idempotent(self):
        base = parse_chord_symbol("E:min7")
        assert apply_omit(base, 3) == apply_omit(apply_omit(base, 3), 3)

    def test_omit_absent_degree_changes_nothing(self):
        # Em7 already realizes without a 9th; omitting degrees not present
        # in the sounding set leaves the realization unchanged
        base = parse_chord_symbol("E:min7")
        fifth_gone = apply_omit(base, 5)
        again = apply_omit(fifth_gone, 5)
        assert realize_pitch_classes(fifth_gone) == realize_pitch_classes(again)

    def test_ops_commute_across_degrees(self):
        base = parse_chord_symbol("C:maj7")
        ab = apply_omit(apply_add(base, 9, 0), 5)
        ba = apply_add(apply_omit(base, 5), 9, 0)
        assert realize_pitch_classes(ab) == realize_pitch_classes(ba)
        assert ab == ba

    def test_invalid_degrees(self):
        base = parse_chord_symbol("C:maj")
        with pytest.raises(InvalidDegree):
            apply_add(base, 7, 0)
        with pytest.raises(InvalidDegree):
            apply_add(base, 9, 3)
        with pytest.raises(InvalidDegree):
            apply_omit(base, 9)


def _all_decorations(max_adds=2, max_omits=2):
    """Every decoration with up to max_adds adds (offsets -1..1) and max_omits omits."""
    add_entries = [(d, o) for d in ADD_DEGREES for o in (-1, 0, 1)]
    decos = []
    for n_add in range(max_adds + 1):
        for adds in itertools.combinations(add_entries, n_add):
            if len({d for d, _ in adds}) != len(adds):
                continue
            for n_omit in range(max_omits + 1):
                for omits in itertools.combinations(OMIT_DEGREES, n_omit):
                    decos.append(Decorations(add=frozenset(adds), omit=frozenset(omits)))
    return decos


class TestDistance:
    def test_identity(self):
        ch = parse_chord_symbol("C:maj")
        assert decoration_distance(ch, ch) == 0.0

    def test_single_add(self):
        a = parse_chord_symbol("C:maj")
        assert decoration_distance(a, apply_add(a, 9, 0)) == pytest.approx(0.4)

    def test_add_plus_omit(self):
        a = parse_chord_symbol("C:maj")
        b = apply_omit(apply_add(a, 13, 0), 5)
        assert decoration_distance(a, b) == pytest.approx(0.8)

    def test_mismatch_rejected(self):
        with pytest.raises(RootOrTypeMismatch):
            decoration_distance(parse_chord_symbol("C:maj"), parse_chord_symbol("D:maj"))

    def test_metric_axioms(self):
        decos = _all_decorations()
        base = Chord(root=0, chord_type=ChordType.MAJ)
        chords = [base.with_decorations(d) for d in decos]
        for a in chords:
            assert decoration_distance(a, a) == 0.0
        for a, b in itertools.combinations(chords, 2):
            d_ab = decoration_distance(a, b)
            assert d_ab > 0.0
            assert d_ab == pytest.approx(decoration_distance(b, a))
        # triangle inequality on a deterministic subsample (full cube is huge)
        sample = chords[::7]
        for a, b, c in itertools.combinations(sample, 3):
            assert decoration_distance(a, c) <= (
                decoration_distance(a, b) + decoration_distance(b, c) + 1e-12
            )


_chord_strategy = st.builds(
    Chord,
    root=st.integers(0, 11),
    chord_type=st.sampled_from(list(ChordType)),
    decorations=st.builds(
        Decorations,
        add=st.dictionaries(
            st.sampled_from(ADD_DEGREES),
            st.integers(-MAX_ADD_OFFSET, MAX_ADD_OFFSET),
            max_size=3,
        ).map(lambda d: frozenset(d.items())),
        omit=st.sets(st.sampled_from(OMIT_DEGREES)).map(frozenset),
    ),
    bass=st.integers(0, 11),
    duration=st.integers(1, 64),
)


class TestRender:
    def test_plain(self):
        assert render_chord_symbol(Chord(root=0, chord_type=ChordType.MAJ)) == "C:maj"

    def test_omit(self):
        ch = apply_omit(parse_chord_symbol("E:min7"), 3)
        assert render_chord_symbol(ch) == "E:min7(omit3)"

    def test_add_and_bass(self):
        ch = apply_add(parse_chord_symbol("C:maj7/G"), 9, 0)
        assert render_chord_symbol(ch) == "C:maj7(9)/G"

    @given(_chord_strategy)
    def test_round_trip(self, ch):
        assert parse_chord_symbol(render_chord_symbol(ch), duration=ch.duration) == ch

    def test_round_trip_exhaustive_single_decorations(self):
        # every type x every single decoration (all offsets), plus bare types
        for kind in ChordType:
            base = Chord(root=3, chord_type=kind, bass=10, duration=8)
            variants = [base]
            for degree in ADD_DEGREES:
                for offset in range(-MAX_ADD_OFFSET, MAX_ADD_OFFSET + 1):
                    variants.append(apply_add(base, degree, offset))
            for degree in OMIT_DEGREES:
                variants.append(apply_omit(base, degree))
            for ch in variants:
                assert parse_chord_symbol(render_chord_symbol(ch), duration=8) == ch


class TestTimeline:
    def test_expand(self):
        chords = [parse_chord_symbol("C:maj", 4), parse_chord_symbol("F:maj", 4)]
        steps = expand_timeline(chords, 8)
        assert len(steps) == 8
        assert steps[0] is chords[0] and steps[7] is chords[1]

    def test_length_checked(self):
        with pytest.raises(LengthMismatch):
            expand_timeline([parse_chord_symbol("C:maj", 4)], 8)
