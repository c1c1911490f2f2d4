"""Value types shared by every stage of the pipeline, plus shake scoring and
the hand/pixel frame conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Raised for inputs that are well-typed but inconsistent."""


@dataclass(frozen=True, eq=False)
class TactileImage:
    """Single-channel contact imprint, intensities in [0, 1].

    ``pixels`` has shape ``(height, width)``; column index is x, row index is y.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise DataError(f"tactile image must be a non-empty 2D grid, got shape {px.shape}")
        if not np.all(np.isfinite(px)) or px.min() < 0.0 or px.max() > 1.0:
            raise DataError("tactile image intensities must lie in [0, 1]")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TactileImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True)
class ImagePair:
    left: TactileImage
    right: TactileImage

    def __post_init__(self):
        if self.left.pixels.shape != self.right.pixels.shape:
            raise DataError(
                f"pair images differ in size: {self.left.pixels.shape} vs {self.right.pixels.shape}"
            )

    @classmethod
    def from_arrays(cls, left, right) -> ImagePair:
        return cls(TactileImage(left), TactileImage(right))

    @property
    def shape(self) -> tuple[int, int]:
        return self.left.pixels.shape


@dataclass(frozen=True)
class SensorGeometry:
    """Pixel resolution and physical width of the sensing window, per axis."""

    res_x: int
    res_y: int
    width_x: float
    width_y: float

    def __post_init__(self):
        if min(self.res_x, self.res_y) <= 0 or min(self.width_x, self.width_y) <= 0:
            raise DataError(f"sensor geometry must be strictly positive: {self}")

    @property
    def pixels_per_meter(self) -> tuple[float, float]:
        return self.res_x / self.width_x, self.res_y / self.width_y


@dataclass(frozen=True)
class ShakeOutcome:
    failed: bool
    failure_time: float | None
    start_time: float
    duration: float

    def __post_init__(self):
        if not self.duration > 0:
            raise DataError("shake duration must be positive")
        if self.failed:
            if self.failure_time is None or self.failure_time < 0:
                raise DataError("failed shake needs a non-negative failure time")
        elif self.failure_time is not None:
            raise DataError("failure_time is only meaningful for failed shakes")


@dataclass(frozen=True)
class GraspScore:
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DataError(f"grasp score out of range: {self.value}")

    @property
    def success(self) -> bool:
        return self.value > 0.5


@dataclass(frozen=True)
class PlanarOffset:
    """Motion in the finger plane, meters."""

    dx: float
    dy: float

    def __post_init__(self):
        if not (math.isfinite(self.dx) and math.isfinite(self.dy)):
            raise DataError("planar offset must be finite")

    def __add__(self, other: PlanarOffset) -> PlanarOffset:
        return PlanarOffset(self.dx + other.dx, self.dy + other.dy)

    def __neg__(self) -> PlanarOffset:
        return PlanarOffset(-self.dx, -self.dy)

    @property
    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)


@dataclass(frozen=True)
class PixelOffset:
    dx: int
    dy: int

    def __post_init__(self):
        object.__setattr__(self, "dx", int(self.dx))
        object.__setattr__(self, "dy", int(self.dy))


def score_from_shake(outcome: ShakeOutcome) -> GraspScore:
    """Grasp quality from a shake test.

    Survived shakes score 1. A failure scores half the fraction of the shake it
    resisted, so every failure lands in [0, 0.5].
    """
    if not outcome.failed:
        return GraspScore(1.0)
    t0, ts, ti = outcome.start_time, outcome.duration, outcome.failure_time
    if ti < t0:
        return GraspScore(0.0)
    if ti > t0 + ts:
        raise DataError(
            f"failure reported at t={ti} after the shake ended at t={t0 + ts}"
        )
    return GraspScore(min(max(0.5 * (ti - t0) / ts, 0.0), 0.5))


def round_half_away(x):
    """Round to nearest integer, ties away from zero (np.round ties to even)."""
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def hand_to_pixel(offset: PlanarOffset, geom: SensorGeometry) -> PixelOffset:
    kx, ky = geom.pixels_per_meter
    return PixelOffset(int(round_half_away(kx * offset.dx)), int(round_half_away(ky * offset.dy)))


def pixel_to_hand(offset: PixelOffset, geom: SensorGeometry) -> PlanarOffset:
    return PlanarOffset(geom.width_x / geom.res_x * offset.dx, geom.width_y / geom.res_y * offset.dy)
