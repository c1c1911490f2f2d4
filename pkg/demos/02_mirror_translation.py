"""
Predicting a regrasp imprint by translation
===========================================

Moving the gripper by a few millimetres shifts the imprint the opposite way
on the sensor. The planner predicts the new imprint by translating the
current one, filling the exposed border by reflecting a band of the
surviving content.
"""

import numpy as np

from tactile_regrasp import ImagePair, PlanarOffset, simulate_regrasp_pair, translate_with_mirror
from tactile_regrasp.core import PixelOffset, SensorGeometry, TactileImage


def show(pixels):
    for row in pixels:
        print(" ".join(f"{v:3.0f}" for v in row * 9))
    print()


# A small ramp image makes the reflections easy to follow.
img = TactileImage(np.add.outer(np.arange(6), np.arange(8)) / 12.0)
print("original")
show(img.pixels)

# Shift right by 3 columns with a 2-pixel band: the left border repeats the
# first two surviving columns, mirrored back and forth.
print("shifted +3 columns, band 2")
show(translate_with_mirror(img, PixelOffset(3, 0), mirror_width=2).pixels)

# Horizontal fill happens first, then vertical.
print("shifted (-2, +2), band 2")
show(translate_with_mirror(img, PixelOffset(-2, 2), mirror_width=2).pixels)

# In hand coordinates: a 1 mm gripper motion on a 6 px / 6 mm sensor moves
# the imprint one pixel the other way.
geom = SensorGeometry(8, 6, 0.008, 0.006)
pair = ImagePair(img, img)
moved = simulate_regrasp_pair(pair, PlanarOffset(0.001, 0.0), geom, mirror_width=2)
print("gripper +1 mm in x -> imprint one column to the left")
show(moved.left.pixels)
