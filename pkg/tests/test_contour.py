"""Melody tracks, pitch curves, and the layered-signal decomposition."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from popgen.contour import (
    SILENCE,
    SUSTAIN,
    LayeredSignals,
    MelodyTrack,
    decompose,
    default_layer_count,
    melody_to_pitch_curve,
    overlap_zero_mask,
    reconstruct,
)
from popgen.errors import AllSilence, BadLayerIndex, LengthNotDivisible


class TestMelodyTrack:
    def test_valid(self):
        MelodyTrack(steps=(60, SUSTAIN, SILENCE, 62))

    def test_rejects_leading_sustain(self):
        with pytest.raises(ValueError):
            MelodyTrack(steps=(SUSTAIN, 60))

    def test_rejects_sustain_after_silence(self):
        with pytest.raises(ValueError):
            MelodyTrack(steps=(60, SILENCE, SUSTAIN))

    def test_rejects_bad_pitch(self):
        with pytest.raises(ValueError):
            MelodyTrack(steps=(60, 200))

    def test_onsets_and_durations(self):
        t = MelodyTrack(steps=(60, SUSTAIN, SUSTAIN, 62, SILENCE, 64))
        assert t.onsets() == [0, 3, 5]
        assert t.note_duration(0) == 3
        assert t.note_duration(3) == 1

    def test_sounding_pitch(self):
        t = MelodyTrack(steps=(60, SUSTAIN, SILENCE, 64))
        assert t.sounding_pitch(1) == 60
        assert t.sounding_pitch(2) is None
        assert t.sounding_pitch(3) == 64


class TestPitchCurve:
    def test_sustain_holds(self):
        t = MelodyTrack(steps=(60, SUSTAIN, SUSTAIN, 62))
        assert melody_to_pitch_curve(t).tolist() == [60, 60, 60, 62]

    def test_silence_holds_through(self):
        t = MelodyTrack(steps=(60, SILENCE, 62, SUSTAIN))
        assert melody_to_pitch_curve(t).tolist() == [60, 60, 62, 62]

    def test_leading_silence_takes_first_pitch(self):
        t = MelodyTrack(steps=(SILENCE, SILENCE, 64, 64))
        assert melody_to_pitch_curve(t).tolist() == [64, 64, 64, 64]

    def test_all_silence_rejected(self):
        with pytest.raises(AllSilence):
            melody_to_pitch_curve(MelodyTrack(steps=(SILENCE, SILENCE)))

    def test_values_come_from_input_pitches(self):
        t = MelodyTrack(steps=(60, SUSTAIN, 65, SILENCE, 67))
        curve = melody_to_pitch_curve(t)
        assert len(curve) == len(t)
        assert set(curve.tolist()) <= {60.0, 65.0, 67.0}


class TestDecompose:
    def test_constant_curve(self):
        ls = decompose(np.full(8, 60.0), p=3)
        assert np.array_equal(ls.layers[0], np.full(8, 60.0))
        for layer in ls.layers[1:]:
            assert not layer.any()

    def test_worked_example(self):
        # hand-executed zero-order-hold definition on [60, 62, 64, 62]
        ls = decompose(np.array([60.0, 62.0, 64.0, 62.0]), p=2)
        assert ls.layers[0].tolist() == [60, 60, 60, 60]
        assert ls.layers[1].tolist() == [0, 0, 4, 4]
        assert ls.layers[2].tolist() == [0, 2, 0, -2]

    def test_divisibility_enforced(self):
        with pytest.raises(LengthNotDivisible):
            decompose(np.zeros(12), p=3)

    def test_round_trip_random(self):
        rng = np.random.default_rng(7)
        for n in (16, 32, 64):
            p = default_layer_count(n)
            for _ in range(50):
                curve = rng.uniform(40, 90, n)
                back = reconstruct(decompose(curve, p))
                assert np.max(np.abs(back - curve)) < 1e-9

    def test_zero_overlap_invariant(self):
        rng = np.random.default_rng(8)
        n, p = 32, 5
        for _ in range(20):
            ls = decompose(rng.uniform(40, 90, n), p)
            for k in range(1, p + 1):
                mask = overlap_zero_mask(p, n, k)
                assert not ls.layers[k][mask].any()

    def test_layer0_constant(self):
        ls = decompose(np.random.default_rng(9).uniform(40, 90, 16), 4)
        assert ls.layers[0].max() == ls.layers[0].min()

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_linearity(self, seed):
        rng = np.random.default_rng(seed)
        u, v = rng.normal(60, 5, 16), rng.normal(60, 5, 16)
        a, b = rng.uniform(-2, 2, 2)
        lhs = decompose(a * u + b * v, 4)
        ru, rv = decompose(u, 4), decompose(v, 4)
        for k in range(5):
            assert np.allclose(lhs.layers[k], a * ru.layers[k] + b * rv.layers[k], atol=1e-9)


class TestMask:
    def test_examples(self):
        assert overlap_zero_mask(2, 4, 2).tolist() == [True, False, True, False]
        assert overlap_zero_mask(2, 4, 1).tolist() == [True, False, False, False]

    def test_finest_layer_alternates(self):
        assert overlap_zero_mask(3, 8, 3).tolist() == [True, False] * 4

    def test_bad_layer(self):
        with pytest.raises(BadLayerIndex):
            overlap_zero_mask(2, 4, 3)
        with pytest.raises(BadLayerIndex):
            overlap_zero_mask(2, 4, 0)


class TestLayeredSignals:
    def test_reconstruct_zero_layers(self):
        ls = LayeredSignals(p=2, layers=[np.full(4, 60.0), np.zeros(4), np.zeros(4)])
        assert reconstruct(ls).tolist() == [60, 60, 60, 60]

    def test_layer_count_checked(self):
        with pytest.raises(Exception):
            LayeredSignals(p=2, layers=[np.zeros(4)])

    def test_default_layer_count(self):
        assert default_layer_count(64) == 6
        assert default_layer_count(16) == 4
        assert default_layer_count(48) == 4
        with pytest.raises(LengthNotDivisible):
            default_layer_count(3)
