"""Experiment configuration: JSON <-> typed settings.

The shipped object suite lives in ``data/suite.json``; any key missing from a
user config falls back to it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import DataError, SensorGeometry
from .model import ModelConfig
from .planner import ActionGrid
from .synthworld import NOISE_SCALE, Primitive, ShakeConfig, SyntheticObject


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: SensorGeometry
    shake: ShakeConfig
    model: ModelConfig
    grid: ActionGrid
    objects: list[SyntheticObject]
    policy_objects: list[SyntheticObject]
    n_per_object: int = 250
    noise_scale: float = NOISE_SCALE
    test_fraction: float = 0.1
    n_grasps: int = 100
    raw: dict = field(default_factory=dict, repr=False)


def shipped_suite() -> dict:
    return json.loads(resources.files("tactile_regrasp").joinpath("data/suite.json").read_text())


def object_from_dict(d: dict) -> SyntheticObject:
    try:
        prims = [
            Primitive(p["shape"], tuple(p["center"]), p["size"], float(p["height"]), float(p.get("pitch", 0.006)))
            for p in d["primitives"]
        ]
        return SyntheticObject(str(d["id"]), tuple(prims), float(d["mass"]), float(d["friction"]))
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed object entry {d.get('id', '?')!r}: {exc!r}") from None


def object_to_dict(obj: SyntheticObject) -> dict:
    prims = []
    for p in obj.primitives:
        entry = {"shape": p.shape, "center": list(p.center),
                 "size": p.size[0] if p.shape == "disk" else list(p.size), "height": p.height}
        if p.shape == "ridge-array":
            entry["pitch"] = p.pitch
        prims.append(entry)
    return {"id": obj.id, "mass": obj.mass, "friction": obj.friction, "primitives": prims}


def config_from_dict(raw: dict) -> ExperimentConfig:
    base = shipped_suite()
    merged = {**base, **raw}
    try:
        model = dict(merged["model"])
        model["conv_channels"] = tuple(model.get("conv_channels", (8, 16)))
        dataset, policy = dict(merged.get("dataset", {})), dict(merged.get("policy", {}))
        return ExperimentConfig(
            geometry=SensorGeometry(**merged["geometry"]),
            shake=ShakeConfig(**merged["shake"]),
            model=ModelConfig(**model),
            grid=ActionGrid(**merged["grid"]),
            objects=[object_from_dict(o) for o in merged["objects"]],
            policy_objects=[object_from_dict(o) for o in merged.get("policy_objects", merged["objects"])],
            n_per_object=int(dataset.get("n_per_object", 250)),
            noise_scale=float(dataset.get("noise_scale", NOISE_SCALE)),
            test_fraction=float(dataset.get("test_fraction", 0.1)),
            n_grasps=int(policy.get("n_grasps", 100)),
            raw=merged,
        )
    except (TypeError, ValueError) as exc:
        raise DataError(f"invalid configuration: {exc}") from None


def load_config(path=None) -> ExperimentConfig:
    if path is None:
        return config_from_dict({})
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing config file: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataError(f"config {path} must be a JSON object")
    return config_from_dict(raw)
