"""Experiment protocols: held-out accuracy, leave-one-object-out, and the
closed-loop regrasp benchmark with its baselines."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import replace

import numpy as np

from .core import SensorGeometry, score_from_shake
from .model import ModelConfig, evaluate, train
from .planner import ActionGrid, centroid_centering, plan_regrasp
from .synthworld import (
    NOISE_SCALE,
    GraspPose,
    ShakeConfig,
    SyntheticObject,
    pair_quality,
    record_seed,
    render_imprint,
    sample_noisy_grasp,
    simulate_shake,
)

POLICIES = ("none", "centroid", "tactile")
CROSSVAL_EPOCHS = 100


def split_dataset(records, test_fraction: float, seed: int):
    """Stratified (per object) random split into (train, test).

    Each object contributes round(n * test_fraction) test records, at least one
    and never all of them.
    """
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must be in (0, 1)")
    groups = defaultdict(list)
    for i, r in enumerate(records):
        groups[r.object_id].append(i)
    rng = np.random.default_rng(seed)
    test_idx = set()
    for obj_id in sorted(groups):
        idx = groups[obj_id]
        if len(idx) < 2:
            raise ValueError(f"object {obj_id!r} has fewer than 2 records; cannot split")
        n_test = min(max(int(round(len(idx) * test_fraction)), 1), len(idx) - 1)
        test_idx.update(rng.choice(idx, size=n_test, replace=False).tolist())
    train_set = [r for i, r in enumerate(records) if i not in test_idx]
    test_set = [r for i, r in enumerate(records) if i in test_idx]
    return train_set, test_set


def _object_ids(objects) -> list[str]:
    return [o.id if isinstance(o, SyntheticObject) else str(o) for o in objects]


def leave_one_out(objects, dataset, config: ModelConfig, epochs: int = CROSSVAL_EPOCHS) -> dict:
    """Train on all objects but one, test on the withheld one, for each object."""
    ids = _object_ids(objects)
    if len(ids) < 2:
        raise ValueError("leave-one-out needs at least 2 objects")
    cfg = replace(config, epochs=epochs)
    per_object = {}
    for obj_id in ids:
        held = [r for r in dataset if r.object_id == obj_id]
        rest = [r for r in dataset if r.object_id != obj_id]
        if not held or not rest:
            raise ValueError(f"object {obj_id!r} leaves an empty train or test split")
        params, _ = train(rest, cfg)
        per_object[obj_id] = evaluate(params, held, input_size=cfg.input_size)
    return {
        "per_object": per_object,
        "mean_accuracy": float(np.mean([m["accuracy"] for m in per_object.values()])),
    }


def oracle_scorer(pair) -> float:
    """The world's own contact quality, usable in place of a trained model."""
    return pair_quality(pair)


def run_policy_experiment(
    objects: list[SyntheticObject],
    n_grasps: int,
    policy: str,
    params,
    seed: int,
    geom: SensorGeometry,
    shake: ShakeConfig = ShakeConfig(),
    grid: ActionGrid = ActionGrid(),
    input_size: int = 32,
    noise_scale: float = NOISE_SCALE,
) -> dict:
    """Closed-loop grasp trials for one policy.

    Trial i of object j uses the same seed under every policy, so arms are
    paired: identical perturbed proposals and identical sensor noise. The
    regrasped imprint is re-rendered from the world, not taken from the
    planner's prediction. ``params`` is only used by the tactile policy and may
    be a callable scorer.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if policy == "tactile" and params is None:
        raise ValueError("tactile policy needs trained params or a scorer")
    per_object = {}
    for j, obj in enumerate(objects):
        trials = []
        for i in range(n_grasps):
            s = record_seed(seed, j, i)
            pose = sample_noisy_grasp(obj, GraspPose(), s, noise_scale)
            pair = render_imprint(obj, pose, geom, s)
            if policy == "none":
                final_pair, motion = pair, None
            else:
                if policy == "centroid":
                    motion = centroid_centering(pair, geom, grid)
                else:
                    motion = plan_regrasp(pair, params, geom, grid, input_size).chosen_offset
                pose = GraspPose(pose.offset + motion)
                final_pair = render_imprint(obj, pose, geom, (s + 1) % 2**64)
            score = score_from_shake(simulate_shake(obj, final_pair, shake)).value
            trials.append({
                "seed": s,
                "motion": None if motion is None else [motion.dx, motion.dy],
                "score": score,
                "success": score > 0.5,
            })
        rate = float(np.mean([t["success"] for t in trials])) if trials else None
        per_object[obj.id] = {"success_rate": rate, "n": n_grasps, "trials": trials}
    return {"policy": policy, "per_object": per_object, "mean_success": _mean_rate(per_object)}


def _mean_rate(per_object: dict):
    rates = [v["success_rate"] for v in per_object.values() if v["success_rate"] is not None]
    return float(np.mean(rates)) if rates else None


def improvement(report: dict, baseline: dict) -> dict:
    """Absolute and relative success improvement of ``report`` over ``baseline``, per object.

    Relative improvement is None when the baseline rate is zero or undefined.
    """
    out = {}
    for obj_id, entry in report["per_object"].items():
        acc, base = entry["success_rate"], baseline["per_object"][obj_id]["success_rate"]
        if acc is None or base is None:
            out[obj_id] = {"absolute": None, "relative": None}
            continue
        out[obj_id] = {"absolute": acc - base, "relative": (acc - base) / base if base > 0 else None}
    rel = [v["relative"] for v in out.values() if v["relative"] is not None]
    ab = [v["absolute"] for v in out.values() if v["absolute"] is not None]
    return {
        "per_object": out,
        "mean_absolute": float(np.mean(ab)) if ab else None,
        "mean_relative": float(np.mean(rel)) if rel else None,
    }


def compare_baseline(objects, n_grasps: int, params, seed: int, geom: SensorGeometry, **kwargs) -> dict:
    """No-regrasp vs. centroid-centering vs. tactile policy on shared seeds."""
    reports = {p: run_policy_experiment(objects, n_grasps, p, params, seed, geom, **kwargs) for p in POLICIES}
    rows = []
    for p in POLICIES:
        imp = improvement(reports[p], reports["none"])
        rows.append({
            "policy": p,
            "mean_success": reports[p]["mean_success"],
            "mean_absolute_improvement": imp["mean_absolute"],
            "mean_relative_improvement": imp["mean_relative"],
            "per_object": {
                k: {"success_rate": v["success_rate"], **imp["per_object"][k]}
                for k, v in reports[p]["per_object"].items()
            },
        })
    return {"table": rows, "reports": reports}
