"""
Labelling a grasp by shaking it
===============================

A grasp is scored by how long it survives a ramped shake. Surviving the
whole shake scores 1, failing on the spot scores 0, and failing part way
scores between 0 and 0.5.
"""

import numpy as np

from tactile_regrasp import GraspPose, PlanarOffset, ShakeConfig, render_imprint
from tactile_regrasp.config import load_config
from tactile_regrasp.core import ShakeOutcome, score_from_shake
from tactile_regrasp.synthworld import holding_capacity, inertial_load, shake_time_grid, simulate_shake

# The score only needs the failure time relative to the start of the shake.
for t_fail in (0.0, 1.0, 2.0, 4.0, None):
    outcome = ShakeOutcome(t_fail is not None, t_fail, 0.0, 4.0)
    print(f"failure at {t_fail!s:>4}  ->  score {score_from_shake(outcome).value:.3f}")

# In the synthetic world the grip holds while the friction capacity exceeds
# the inertial load. Capacity scales with contact quality, so the same
# object held off-center drops sooner.
cfg = load_config()
can, shake = cfg.objects[0], ShakeConfig()
t = shake_time_grid(shake)
print(f"\n{can.id}: mass {can.mass} kg, peak load {inertial_load(can, shake, t).max():.2f} N")
for dx in (0.0, 0.015, 0.03, 0.035):
    pair = render_imprint(can, GraspPose(PlanarOffset(dx, -0.007)), cfg.geometry, seed=None)
    out = simulate_shake(can, pair, shake)
    print(f"offset {dx * 1000:4.0f} mm  capacity {holding_capacity(can, pair, shake):5.2f} N  "
          f"fails at {out.failure_time}  score {score_from_shake(out).value:.3f}")

# The load ramps up over the shake, so when failure happens is a smooth
# proxy for how much margin the grasp had.
peaks = np.arange(4) + 0.125  # crests of the 2 Hz sine
print("\nload at crests", peaks, "s:", np.round(inertial_load(can, shake, peaks), 2))
