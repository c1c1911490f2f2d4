"""Regrasp planning from tactile imprints alone.

Every candidate gripper motion on a grid is turned into a predicted imprint
pair by translating the measured one; the quality model scores each, and the
best-scoring motion wins. ``centroid_centering`` is the heuristic baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ImagePair, PlanarOffset, SensorGeometry
from .model import QualityModelParams, predict
from .transform import MIRROR_WIDTH, simulate_regrasp_pair


@dataclass(frozen=True)
class ActionGrid:
    step: float = 0.006
    max_offset: float = 0.03
    axes: int = 2

    def __post_init__(self):
        if self.step <= 0 or self.max_offset < 0 or self.axes not in (1, 2):
            raise ValueError(f"invalid action grid {self}")


@dataclass(frozen=True)
class RegraspPlan:
    candidates: list[PlanarOffset]
    scores: list[float]
    chosen: int

    @property
    def chosen_offset(self) -> PlanarOffset:
        return self.candidates[self.chosen]

    @property
    def keep_score(self) -> float:
        return self.scores[self.candidates.index(PlanarOffset(0.0, 0.0))]


def candidate_offsets(grid: ActionGrid) -> list[PlanarOffset]:
    """Signed grid over the finger plane, lexicographic in (dx, dy).

    With ``axes=1`` only x motions are produced.
    """
    n = int(np.floor(grid.max_offset / grid.step + 1e-9))
    values = [k * grid.step for k in range(-n, n + 1)]
    ys = values if grid.axes == 2 else [0.0]
    return [PlanarOffset(float(dx), float(dy)) for dx in values for dy in ys]


def _scorer(scorer, input_size: int):
    if isinstance(scorer, QualityModelParams):
        return lambda pairs: predict(scorer, pairs, input_size)
    return lambda pairs: np.asarray([scorer(p) for p in pairs], dtype=np.float64)


def select_best(candidates: list[PlanarOffset], scores) -> int:
    """Argmax with ties broken by smaller offset norm, then lexicographic (dx, dy)."""
    keys = [(-float(s), c.norm, c.dx, c.dy) for c, s in zip(candidates, scores)]
    return min(range(len(keys)), key=keys.__getitem__)


def plan_regrasp(
    pair: ImagePair,
    scorer,
    geom: SensorGeometry,
    grid: ActionGrid = ActionGrid(),
    input_size: int = 32,
    mirror_width: int = MIRROR_WIDTH,
) -> RegraspPlan:
    """Score every candidate motion on its simulated imprint and pick the best.

    ``scorer`` is either trained :class:`QualityModelParams` or any callable
    taking an :class:`ImagePair` and returning a quality.
    """
    candidates = candidate_offsets(grid)
    simulated = [simulate_regrasp_pair(pair, c, geom, mirror_width) for c in candidates]
    scores = _scorer(scorer, input_size)(simulated)
    return RegraspPlan(candidates, [float(s) for s in scores], select_best(candidates, scores))


def intensity_centroid(pixels: np.ndarray):
    """Intensity-weighted (x, y) centroid in pixels relative to the image center, or None."""
    total = pixels.sum()
    if total <= 0:
        return None
    h, w = pixels.shape
    ys, xs = np.indices(pixels.shape)
    return (pixels * xs).sum() / total - (w - 1) / 2, (pixels * ys).sum() / total - (h - 1) / 2


def centroid_centering(pair: ImagePair, geom: SensorGeometry, grid: ActionGrid = ActionGrid()) -> PlanarOffset:
    """Gripper motion that brings the averaged imprint centroid to the sensor center."""
    cents = [c for c in (intensity_centroid(pair.left.pixels), intensity_centroid(pair.right.pixels)) if c is not None]
    if not cents:
        return PlanarOffset(0.0, 0.0)
    cx, cy = np.mean(cents, axis=0)
    # imprint moves opposite to the gripper, so motion follows the centroid
    motion_x, motion_y = cx * geom.width_x / geom.res_x, cy * geom.width_y / geom.res_y
    lim = grid.max_offset
    dy = float(np.clip(motion_y, -lim, lim)) if grid.axes == 2 else 0.0
    return PlanarOffset(float(np.clip(motion_x, -lim, lim)), dy)
