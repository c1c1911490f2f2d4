import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tactile_regrasp.core import (
    DataError,
    GraspScore,
    ImagePair,
    PixelOffset,
    PlanarOffset,
    SensorGeometry,
    ShakeOutcome,
    TactileImage,
    hand_to_pixel,
    pixel_to_hand,
    round_half_away,
    score_from_shake,
)

GEOM = SensorGeometry(100, 100, 0.05, 0.05)


class TestScoreFromShake:
    def test_failure_at_start_scores_zero(self):
        assert score_from_shake(ShakeOutcome(True, 0.0, 0.0, 4.0)).value == 0.0

    def test_survived_scores_one(self):
        assert score_from_shake(ShakeOutcome(False, None, 0.0, 4.0)).value == 1.0

    def test_halfway_failure_over_four_seconds(self):
        assert score_from_shake(ShakeOutcome(True, 2.0, 0.0, 4.0)).value == 0.25

    def test_failure_at_end_scores_half(self):
        assert score_from_shake(ShakeOutcome(True, 4.0, 0.0, 4.0)).value == 0.5

    def test_nonzero_start_time(self):
        assert score_from_shake(ShakeOutcome(True, 3.0, 1.0, 4.0)).value == 0.25

    def test_failure_before_start(self):
        assert score_from_shake(ShakeOutcome(True, 0.5, 1.0, 4.0)).value == 0.0

    def test_failure_after_shake_end_is_rejected(self):
        with pytest.raises(DataError):
            score_from_shake(ShakeOutcome(True, 4.5, 0.0, 4.0))

    @pytest.mark.parametrize("args", [(True, None, 0.0, 4.0), (True, -1.0, 0.0, 4.0),
                                      (False, None, 0.0, 0.0), (False, 1.0, 0.0, 4.0)])
    def test_invalid_outcomes(self, args):
        with pytest.raises(DataError):
            ShakeOutcome(*args)

    @given(st.floats(0, 10), st.floats(0.1, 10), st.floats(0, 1), st.floats(0, 1))
    def test_monotone_in_failure_time(self, t0, ts, a, b):
        lo, hi = sorted((a, b))
        s_lo = score_from_shake(ShakeOutcome(True, t0 + lo * ts, t0, ts)).value
        s_hi = score_from_shake(ShakeOutcome(True, t0 + hi * ts, t0, ts)).value
        assert 0.0 <= s_lo <= s_hi <= 0.5


def test_grasp_score_range():
    with pytest.raises(DataError):
        GraspScore(1.2)
    assert GraspScore(0.7).success and not GraspScore(0.5).success


class TestImages:
    def test_shape_and_range_checked(self):
        with pytest.raises(DataError):
            TactileImage(np.full((2, 2), 1.5))
        with pytest.raises(DataError):
            TactileImage(np.zeros((0, 3)))
        with pytest.raises(DataError):
            ImagePair.from_arrays(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_pixels_are_read_only(self):
        img = TactileImage(np.zeros((3, 4)))
        assert (img.width, img.height) == (4, 3)
        with pytest.raises(ValueError):
            img.pixels[0, 0] = 1.0


class TestFrameConversion:
    def test_zero(self):
        assert hand_to_pixel(PlanarOffset(0, 0), GEOM) == PixelOffset(0, 0)
        assert pixel_to_hand(PixelOffset(0, 0), GEOM) == PlanarOffset(0, 0)

    def test_direct_substitution(self):
        assert hand_to_pixel(PlanarOffset(0.01, -0.02), GEOM) == PixelOffset(20, -40)

    def test_rounds_to_nearest(self):
        assert hand_to_pixel(PlanarOffset(0.0123, 0), GEOM) == PixelOffset(25, 0)

    def test_inverse(self):
        back = pixel_to_hand(PixelOffset(20, -40), GEOM)
        assert back.dx == pytest.approx(0.01) and back.dy == pytest.approx(-0.02)

    def test_ties_round_away_from_zero(self):
        np.testing.assert_array_equal(round_half_away([0.5, 1.5, 2.5, -0.5, -2.5]), [1, 2, 3, -1, -3])

    @given(st.floats(-1, 1), st.floats(-1, 1))
    def test_odd(self, dx, dy):
        a = hand_to_pixel(PlanarOffset(dx, dy), GEOM)
        b = hand_to_pixel(PlanarOffset(-dx, -dy), GEOM)
        assert (a.dx, a.dy) == (-b.dx, -b.dy)

    @given(st.integers(-500, 500), st.integers(-500, 500), st.sampled_from([GEOM, SensorGeometry(96, 80, 0.048, 0.031)]))
    def test_round_trip_on_integer_pixels(self, px, py, geom):
        assert hand_to_pixel(pixel_to_hand(PixelOffset(px, py), geom), geom) == PixelOffset(px, py)

    def test_geometry_must_be_positive(self):
        with pytest.raises(DataError):
            SensorGeometry(0, 10, 0.01, 0.01)


@settings(max_examples=300)
@given(st.booleans(), st.floats(0, 20), st.floats(0.01, 20), st.floats(0, 1))
def test_score_range_and_failure_cap(failed, t0, ts, frac):
    outcome = ShakeOutcome(failed, t0 + frac * ts if failed else None, t0, ts)
    s = score_from_shake(outcome).value
    assert 0.0 <= s <= 1.0
    assert not failed or s <= 0.5
    assert math.isfinite(s)
