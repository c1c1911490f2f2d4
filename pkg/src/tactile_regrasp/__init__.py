"""Tactile grasp-quality learning and local regrasp planning.

A numpy tactile regrasp pipeline: a synthetic tactile
world produces self-labelled grasps, a small shared-backbone CNN learns grasp
quality from the two finger imprints, and a planner picks the regrasp whose
simulated imprint scores best.
"""

from .core import (
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
    score_from_shake,
)
from .model import ModelConfig, QualityModelParams, cam, evaluate, forward, train
from .planner import ActionGrid, RegraspPlan, candidate_offsets, centroid_centering, plan_regrasp
from .synthworld import GraspPose, GraspRecord, ShakeConfig, SyntheticObject, generate_dataset, render_imprint
from .transform import simulate_regrasp_pair, translate_with_mirror

__version__ = "0.1.0"
