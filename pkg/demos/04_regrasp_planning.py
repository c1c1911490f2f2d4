"""
Planning a regrasp
==================

The planner tries every motion on an 11 x 11 grid, predicts each resulting
imprint by translation, scores it, and takes the best. Here the scorer is
the world's own contact quality, so no training is needed. Any callable
from an ImagePair to a number works, and so do trained model weights.
"""

import numpy as np

from tactile_regrasp import GraspPose, PlanarOffset, centroid_centering, plan_regrasp, render_imprint
from tactile_regrasp.config import load_config
from tactile_regrasp.core import score_from_shake
from tactile_regrasp.evaluation import oracle_scorer, run_policy_experiment
from tactile_regrasp.synthworld import simulate_shake

cfg = load_config()
obj = cfg.policy_objects[0]

# A badly placed grasp: too far off the object's center.
pose = GraspPose(PlanarOffset(0.03, -0.01))
pair = render_imprint(obj, pose, cfg.geometry, seed=3)
before = score_from_shake(simulate_shake(obj, pair, cfg.shake)).value

plan = plan_regrasp(pair, oracle_scorer, cfg.geometry, cfg.grid)
move = plan.chosen_offset
print(f"{len(plan.candidates)} candidates, keep score {plan.keep_score:.3f}, "
      f"best {max(plan.scores):.3f} at ({move.dx * 1000:.0f}, {move.dy * 1000:.0f}) mm")

# Execute: the world re-renders the imprint at the new pose.
after_pair = render_imprint(obj, GraspPose(pose.offset + move), cfg.geometry, seed=4)
after = score_from_shake(simulate_shake(obj, after_pair, cfg.shake)).value
print(f"shake score {before:.3f} -> {after:.3f}")

# The heuristic baseline just recentres the imprint's intensity centroid.
c = centroid_centering(pair, cfg.geometry, cfg.grid)
print(f"centroid baseline would move ({c.dx * 1000:.1f}, {c.dy * 1000:.1f}) mm")

# Over many perturbed grasps, with the same seeds for each policy.
for policy, scorer in (("none", None), ("centroid", None), ("tactile", oracle_scorer)):
    report = run_policy_experiment(cfg.policy_objects, 15, policy, scorer, seed=5, geom=cfg.geometry,
                                   shake=cfg.shake, grid=cfg.grid)
    rates = {k: v["success_rate"] for k, v in report["per_object"].items()}
    print(f"{policy:9s} mean success {report['mean_success']:.2f}  {np.round(list(rates.values()), 2)}")
