"""
Training the grasp-quality model
================================

Generate a labelled dataset from the synthetic suite, hold out a stratified
test split, and fit the two-branch convolutional regressor. Sizes here are
cut down so the script runs in well under a minute.
"""

from dataclasses import replace

from tactile_regrasp import evaluate, generate_dataset, train
from tactile_regrasp.config import load_config
from tactile_regrasp.evaluation import split_dataset

cfg = load_config()

# Each grasp proposal is perturbed by up to 80% of the object's half-extent,
# which gives a mix of good and marginal grasps.
records = generate_dataset(cfg.objects, 80, cfg.geometry, cfg.shake, master_seed=1)
successes = sum(r.score.success for r in records)
print(f"{len(records)} grasps, {successes} survived the shake")

train_set, test_set = split_dataset(records, 0.2, seed=0)
model_cfg = replace(cfg.model, epochs=25)
params, history = train(train_set, model_cfg)
print("loss every 5 epochs:", [round(v, 3) for v in history[::5]])

# Success means a score above 0.5, the same rule the shake uses.
for name, subset in (("train", train_set), ("test", test_set)):
    m = evaluate(params, subset)
    print(f"{name:5s} accuracy {m['accuracy']:.3f}  "
          f"(tp {m['true_positive']}, fp {m['false_positive']}, tn {m['true_negative']}, fn {m['false_negative']})")
