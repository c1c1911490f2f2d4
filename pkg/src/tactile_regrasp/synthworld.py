"""Deterministic synthetic stand-in for the robot, objects and tactile sensor.

Objects are flat-topped height profiles built from disks, rectangles and
ridge arrays. A grasp renders the profile under the sensor window into a pair
of imprints, and a shake test with a ramped sinusoidal load decides whether
the grip holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DataError,
    GraspScore,
    ImagePair,
    PlanarOffset,
    SensorGeometry,
    ShakeOutcome,
    TactileImage,
    score_from_shake,
)

H_MAX = 0.01  # indentation depth (m) that saturates the sensor
SENSOR_NOISE = 0.02
NOISE_SCALE = 0.8
TIME_STEP = 1e-3
SHAPES = ("disk", "rectangle", "ridge-array")


@dataclass(frozen=True)
class Primitive:
    """One raised feature of an object.

    ``size`` is the radius for a disk and the (x, y) half-extents otherwise.
    Ridge arrays are stripes parallel to y with period ``pitch`` and 50% duty.
    """

    shape: str
    center: tuple[float, float]
    size: tuple[float, float]
    height: float
    pitch: float = 0.006

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise DataError(f"unknown primitive shape {self.shape!r}")
        size = tuple(float(s) for s in np.broadcast_to(np.asarray(self.size, float), (2,)))
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not 0 < self.height <= H_MAX:
            raise DataError(f"primitive height must be in (0, {H_MAX}]")
        if min(size) <= 0 or self.pitch <= 0:
            raise DataError("primitive size and pitch must be positive")

    def half_extent(self) -> tuple[float, float]:
        sx, sy = self.size
        if self.shape == "disk":
            sy = sx
        return abs(self.center[0]) + sx, abs(self.center[1]) + sy

    def heights(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        u, v = x - self.center[0], y - self.center[1]
        sx, sy = self.size
        if self.shape == "disk":
            inside = u * u + v * v <= sx * sx
        else:
            inside = (np.abs(u) <= sx) & (np.abs(v) <= sy)
            if self.shape == "ridge-array":
                inside &= np.mod(u + sx, self.pitch) < 0.5 * self.pitch
        return np.where(inside, self.height, 0.0)


@dataclass(frozen=True)
class SyntheticObject:
    id: str
    primitives: tuple[Primitive, ...]
    mass: float
    friction: float

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))
        if not self.primitives:
            raise DataError(f"object {self.id!r} has no primitives")
        if self.mass <= 0 or self.friction <= 0:
            raise DataError(f"object {self.id!r} needs positive mass and friction")

    def half_extent(self) -> tuple[float, float]:
        ext = np.array([p.half_extent() for p in self.primitives])
        return float(ext[:, 0].max()), float(ext[:, 1].max())

    def height_map(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.max([p.heights(x, y) for p in self.primitives], axis=0)


@dataclass(frozen=True)
class GraspPose:
    offset: PlanarOffset = field(default_factory=lambda: PlanarOffset(0.0, 0.0))


@dataclass(frozen=True)
class ShakeConfig:
    grip_force: float = 30.0
    amplitude: float = 10.0
    frequency: float = 2.0
    duration: float = 4.0
    gravity: float = 9.81

    def __post_init__(self):
        if min(self.grip_force, self.amplitude, self.frequency, self.duration, self.gravity) <= 0:
            raise DataError("shake parameters must be positive")


@dataclass(frozen=True)
class GraspRecord:
    pair: ImagePair
    score: GraspScore
    object_id: str
    pose: GraspPose
    seed: int


def pixel_centers(geom: SensorGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Sensor-frame coordinates (m) of every pixel center, shaped (res_y, res_x)."""
    xs = (np.arange(geom.res_x) + 0.5 - geom.res_x / 2) * (geom.width_x / geom.res_x)
    ys = (np.arange(geom.res_y) + 0.5 - geom.res_y / 2) * (geom.width_y / geom.res_y)
    return np.meshgrid(xs, ys)


def clean_imprint(obj: SyntheticObject, pose: GraspPose, geom: SensorGeometry) -> np.ndarray:
    """Noise-free normalized indentation depth under the sensor window."""
    x, y = pixel_centers(geom)
    # sensor-frame point (x, y) touches object-frame point (x + dx, y + dy)
    depth = obj.height_map(x + pose.offset.dx, y + pose.offset.dy)
    return np.clip(depth / H_MAX, 0.0, 1.0)


def _noisy(clean: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    noise = rng.uniform(-SENSOR_NOISE, SENSOR_NOISE, size=clean.shape)
    # noise only where the gel is indented, so free membrane stays exactly 0
    return np.where(clean > 0, np.clip(clean + noise, 0.0, 1.0), 0.0)


def render_imprint(obj: SyntheticObject, pose: GraspPose, geom: SensorGeometry, seed: int | None = 0) -> ImagePair:
    """Left/right imprints for a grasp; identical profiles, independent noise.

    ``seed=None`` skips sensor noise entirely.
    """
    clean = clean_imprint(obj, pose, geom)
    if seed is None:
        return ImagePair.from_arrays(clean, clean)
    rng = np.random.default_rng([seed, 1])
    return ImagePair.from_arrays(_noisy(clean, rng), _noisy(clean, rng))


def contact_quality(img) -> float:
    """Contact quality of one imprint: coverage-weighted mean depth times centering.

    (mean over nonzero pixels) * (nonzero fraction) * (1 - normalized centroid distance).
    """
    px = img.pixels if isinstance(img, TactileImage) else np.asarray(img, dtype=np.float64)
    total = px.sum()
    if total <= 0:
        return 0.0
    h, w = px.shape
    nz = px > 0
    mean_nz = total / nz.sum()
    frac = nz.mean()
    ys, xs = np.indices(px.shape)
    cx = (px * xs).sum() / total - (w - 1) / 2
    cy = (px * ys).sum() / total - (h - 1) / 2
    d_hat = math.hypot(cx, cy) / (0.5 * math.hypot(w, h))
    return float(mean_nz * frac * (1.0 - d_hat))


def pair_quality(pair: ImagePair) -> float:
    return 0.5 * (contact_quality(pair.left) + contact_quality(pair.right))


def holding_capacity(obj: SyntheticObject, pair: ImagePair, cfg: ShakeConfig) -> float:
    return obj.friction * cfg.grip_force * pair_quality(pair)


def inertial_load(obj: SyntheticObject, cfg: ShakeConfig, t: np.ndarray, t0: float = 0.0) -> np.ndarray:
    ramp = (t - t0) / cfg.duration
    return obj.mass * (cfg.gravity + cfg.amplitude * ramp * np.abs(np.sin(2 * np.pi * cfg.frequency * t)))


def shake_time_grid(cfg: ShakeConfig) -> np.ndarray:
    n = int(round(cfg.duration / TIME_STEP))
    return np.arange(n + 1) * TIME_STEP


def simulate_shake(obj: SyntheticObject, pair: ImagePair, cfg: ShakeConfig) -> ShakeOutcome:
    """Shake until the inertial load first exceeds the holding capacity."""
    t0 = 0.0
    if not (pair.left.pixels.any() or pair.right.pixels.any()):
        return ShakeOutcome(True, t0, t0, cfg.duration)
    capacity = holding_capacity(obj, pair, cfg)
    t = shake_time_grid(cfg)
    over = np.flatnonzero(inertial_load(obj, cfg, t, t0) > capacity)
    if over.size == 0:
        return ShakeOutcome(False, None, t0, cfg.duration)
    return ShakeOutcome(True, float(t[over[0]]), t0, cfg.duration)


def sample_noisy_grasp(obj: SyntheticObject, proposal: GraspPose, rng_seed: int, scale: float = NOISE_SCALE) -> GraspPose:
    """Perturb a grasp proposal uniformly by up to ``scale`` object half-extents per axis."""
    lx, ly = obj.half_extent()
    rng = np.random.default_rng(rng_seed)
    nx, ny = rng.uniform(-1.0, 1.0, size=2)
    return GraspPose(proposal.offset + PlanarOffset(scale * lx * nx, scale * ly * ny))


def record_seed(master_seed: int, object_index: int, record_index: int) -> int:
    """Per-record seed; independent of generation order."""
    ss = np.random.SeedSequence([master_seed, object_index, record_index])
    return int(ss.generate_state(1, np.uint64)[0])


def grasp_trial(obj: SyntheticObject, seed: int, geom: SensorGeometry, cfg: ShakeConfig, scale: float = NOISE_SCALE) -> GraspRecord:
    pose = sample_noisy_grasp(obj, GraspPose(), seed, scale)
    pair = render_imprint(obj, pose, geom, seed)
    score = score_from_shake(simulate_shake(obj, pair, cfg))
    return GraspRecord(pair, score, obj.id, pose, seed)


def generate_dataset(
    objects: list[SyntheticObject],
    n_per_object: int,
    geom: SensorGeometry,
    cfg: ShakeConfig,
    master_seed: int,
    scale: float = NOISE_SCALE,
) -> list[GraspRecord]:
    if n_per_object < 1:
        raise ValueError("n_per_object must be >= 1")
    return [
        grasp_trial(obj, record_seed(master_seed, j, i), geom, cfg, scale)
        for j, obj in enumerate(objects)
        for i in range(n_per_object)
    ]
