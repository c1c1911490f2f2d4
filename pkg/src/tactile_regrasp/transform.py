"""Rigid translation of tactile imprints with iterated mirror padding.

This is how the planner predicts the imprint a regrasp would produce: shift
the measured image in pixel space and fill the exposed border by reflecting
a fixed-width band of the nearest valid pixels, over and over, until the
image is covered.
"""

from __future__ import annotations

import numpy as np

from .core import ImagePair, PixelOffset, PlanarOffset, SensorGeometry, TactileImage, hand_to_pixel

MIRROR_WIDTH = 15


def _band_position(k: np.ndarray, m: int) -> np.ndarray:
    # k-th exposed pixel (k >= 1) -> 1-based band position, period 2m: 1..m, m..1
    r = (k - 1) % (2 * m)
    return np.where(r < m, r + 1, 2 * m - r)


def mirror_index_map(n: int, shift: int, mirror_width: int = MIRROR_WIDTH) -> np.ndarray:
    """Source index along one axis for every output index after shifting by ``shift``.

    Output positions whose source ``i - shift`` is in range copy it directly.
    Exposed positions reflect the band of the ``mirror_width`` valid pixels
    nearest the fill frontier. When nothing valid remains in the output
    (``|shift| >= n``) the band is taken from the source edge that would sit
    next to the output.
    """
    if mirror_width < 1:
        raise ValueError("mirror_width must be >= 1")
    out = np.arange(n) - shift
    lo = max(shift, 0)            # first valid output index
    hi = min(n - 1, n - 1 + shift)  # last valid output index
    if lo <= hi:
        m = min(mirror_width, hi - lo + 1)
        src_lo, src_hi = lo - shift, hi - shift
    elif shift > 0:
        # content lies entirely to the right of the output
        m = min(mirror_width, n)
        lo, src_lo = shift, 0
        hi, src_hi = n - 1, -1  # no right frontier inside the output
    else:
        m = min(mirror_width, n)
        hi, src_hi = n - 1 + shift, n - 1
        lo, src_lo = n, n  # no left frontier inside the output

    idx = np.arange(n)
    left = idx < lo
    if left.any():
        p = _band_position(lo - idx[left], m)
        out[left] = src_lo + p - 1
    right = idx > hi
    if right.any():
        p = _band_position(idx[right] - hi, m)
        out[right] = src_hi - (p - 1)
    return out


def translate_with_mirror(img: TactileImage, off: PixelOffset, mirror_width: int = MIRROR_WIDTH) -> TactileImage:
    """Shift ``img`` by ``off`` pixels, out[x, y] = in[x - dx, y - dy].

    Horizontal fill happens first, then vertical fill over the completed rows.
    Both passes are index remappings, so the result is a gather on the
    original pixels.
    """
    if off.dx == 0 and off.dy == 0:
        return img
    cols = mirror_index_map(img.width, off.dx, mirror_width)
    rows = mirror_index_map(img.height, off.dy, mirror_width)
    return TactileImage(img.pixels[np.ix_(rows, cols)])


def simulate_regrasp_pair(
    pair: ImagePair,
    motion: PlanarOffset,
    geom: SensorGeometry,
    mirror_width: int = MIRROR_WIDTH,
    flip_right: bool = False,
) -> ImagePair:
    """Predicted imprints after moving the gripper by ``motion``.

    The imprint moves opposite to the gripper. With ``flip_right`` the right
    finger's x axis is taken as mirrored relative to the left one.
    """
    shift = hand_to_pixel(-motion, geom)
    right_shift = PixelOffset(-shift.dx, shift.dy) if flip_right else shift
    return ImagePair(
        translate_with_mirror(pair.left, shift, mirror_width),
        translate_with_mirror(pair.right, right_shift, mirror_width),
    )
