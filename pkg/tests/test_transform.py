import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import mirror_translate
from tactile_regrasp.core import ImagePair, PixelOffset, PlanarOffset, SensorGeometry, TactileImage
from tactile_regrasp.transform import mirror_index_map, simulate_regrasp_pair, translate_with_mirror

GEOM = SensorGeometry(100, 100, 0.05, 0.05)


def test_zero_offset_is_identity():
    img = TactileImage(np.random.default_rng(0).random((9, 7)))
    assert translate_with_mirror(img, PixelOffset(0, 0)) == img


def test_hand_traced_row():
    row = TactileImage(np.arange(1, 9)[None, :] / 8.0)
    out = translate_with_mirror(row, PixelOffset(3, 0), mirror_width=2)
    np.testing.assert_array_equal(out.pixels[0] * 8, [2, 2, 1, 1, 2, 3, 4, 5])


def test_negative_shift_fills_the_right():
    row = TactileImage(np.arange(1, 9)[None, :] / 8.0)
    out = translate_with_mirror(row, PixelOffset(-3, 0), mirror_width=2)
    np.testing.assert_array_equal(out.pixels[0] * 8, [4, 5, 6, 7, 8, 8, 7, 7])


def test_pure_padding_when_shift_exceeds_size():
    # content sits at virtual columns 6..9; band in[0], in[1]; k = 6 - x
    assert list(mirror_index_map(4, 6, 2)) == [1, 0, 0, 1]
    assert list(mirror_index_map(4, -6, 2)) == [2, 3, 3, 2]


def test_random_16x16_matches_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(50):
        px = rng.random((16, 16))
        dx, dy = rng.integers(-20, 21, size=2)
        got = translate_with_mirror(TactileImage(px), PixelOffset(dx, dy)).pixels
        np.testing.assert_array_equal(got, mirror_translate(px, dx, dy))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_oracle_equivalence_property(data):
    h = data.draw(st.integers(1, 32))
    w = data.draw(st.integers(1, 32))
    px = data.draw(arrays(np.float64, (h, w), elements=st.floats(0, 1)))
    dx = data.draw(st.integers(-(w + 5), w + 5))
    dy = data.draw(st.integers(-(h + 5), h + 5))
    m = data.draw(st.integers(1, 20))
    out = translate_with_mirror(TactileImage(px), PixelOffset(dx, dy), m).pixels
    assert out.shape == px.shape
    assert set(np.unique(out)) <= set(np.unique(px))
    np.testing.assert_array_equal(out, mirror_translate(px, dx, dy, m))


def test_rejects_bad_mirror_width():
    with pytest.raises(ValueError):
        translate_with_mirror(TactileImage(np.zeros((3, 3))), PixelOffset(1, 0), mirror_width=0)


class TestSimulateRegraspPair:
    def _pair(self, seed=0, shape=(16, 16)):
        rng = np.random.default_rng(seed)
        return ImagePair.from_arrays(rng.random(shape), rng.random(shape))

    def test_zero_motion(self):
        pair = self._pair()
        out = simulate_regrasp_pair(pair, PlanarOffset(0, 0), GEOM)
        assert out.left == pair.left and out.right == pair.right

    def test_imprint_moves_opposite_to_gripper(self):
        pair = self._pair(shape=(40, 40))
        out = simulate_regrasp_pair(pair, PlanarOffset(0.01, 0.0), GEOM)
        expect = translate_with_mirror(pair.left, PixelOffset(-20, 0))
        assert out.left == expect
        assert out.right == translate_with_mirror(pair.right, PixelOffset(-20, 0))

    def test_flip_right_mirrors_x_only(self):
        pair = self._pair(shape=(40, 40))
        out = simulate_regrasp_pair(pair, PlanarOffset(0.01, 0.005), GEOM, flip_right=True)
        assert out.right == translate_with_mirror(pair.right, PixelOffset(20, -10))

    def test_composition_agrees_where_both_paths_read_the_original(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            px = rng.random((16, 16))
            a = rng.integers(-6, 7, size=2)
            b = rng.integers(-6, 7, size=2)
            img = TactileImage(px)
            twice = translate_with_mirror(translate_with_mirror(img, PixelOffset(*a)), PixelOffset(*b)).pixels
            once = translate_with_mirror(img, PixelOffset(*(a + b))).pixels
            ys, xs = np.indices(px.shape)
            # source of the composite, through both intermediate steps, is in range
            sx1, sy1 = xs - b[0], ys - b[1]
            sx0, sy0 = sx1 - a[0], sy1 - a[1]
            ok = ((0 <= sx1) & (sx1 < 16) & (0 <= sy1) & (sy1 < 16)
                  & (0 <= sx0) & (sx0 < 16) & (0 <= sy0) & (sy0 < 16))
            np.testing.assert_array_equal(twice[ok], once[ok])
