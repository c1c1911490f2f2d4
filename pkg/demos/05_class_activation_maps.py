"""
Where the model looks
=====================

With global average pooling in front of a single output unit, weighting the
last feature maps by the output weights gives a class activation map: a
heatmap of which parts of each imprint push the quality up.
"""

from dataclasses import replace
from pathlib import Path

import numpy as np

from tactile_regrasp import ImagePair, cam, generate_dataset, train
from tactile_regrasp.config import load_config
from tactile_regrasp.model import prepare
from tactile_regrasp.persistence import write_pgm

cfg = load_config()
records = generate_dataset(cfg.objects, 60, cfg.geometry, cfg.shake, master_seed=2)
params, _ = train(records, replace(cfg.model, epochs=20))

out = Path("cam_demo")
out.mkdir(exist_ok=True)
shown = 0
for i, r in enumerate(records):
    x = prepare(r.pair, cfg.model.input_size)[0, 0]
    if not r.score.success or x.all():
        continue
    left, right = cam(params, r.pair, cfg.model.input_size)
    contact = x > 0
    print(f"record {i} ({r.object_id}): heat on contact {left[contact].mean():.2f}, "
          f"on free membrane {left[~contact].mean():.2f}")
    write_pgm(out / f"{i:04d}_imprint.pgm", x)
    write_pgm(out / f"{i:04d}_cam.pgm", left)
    shown += 1
    if shown == 4:
        break

# A featureless input carries no spatial information, so its map is flat zero.
flat = cam(params, ImagePair.from_arrays(np.full((32, 32), 0.5), np.full((32, 32), 0.5)))
print("uniform input -> max heat", flat[0].max())
print(f"PGM heatmaps written to {out}/")
