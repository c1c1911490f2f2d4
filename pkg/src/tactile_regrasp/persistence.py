"""On-disk formats: PGM imprint datasets with a JSON manifest, and the
``TRGM`` binary weight file."""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .core import DataError, GraspScore, ImagePair, PlanarOffset, TactileImage
from .model import QualityModelParams
from .synthworld import GraspPose, GraspRecord

MANIFEST = "manifest.json"
MODEL_MAGIC = b"TRGM"
MODEL_VERSION = 1


class DatasetError(DataError):
    pass


class MissingFileError(DatasetError):
    pass


class ManifestError(DatasetError):
    pass


class DimensionMismatchError(DatasetError):
    pass


class ModelFormatError(DataError):
    pass


class BadMagicError(ModelFormatError):
    pass


class VersionMismatchError(ModelFormatError):
    pass


class TruncatedModelError(ModelFormatError):
    pass


# ---------------------------------------------------------------- PGM

def to_bytes(pixels: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(pixels, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def write_pgm(path, pixels: np.ndarray) -> None:
    data = to_bytes(np.asarray(pixels, dtype=np.float64))
    h, w = data.shape
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + data.tobytes())


def _pgm_tokens(buf: bytes, count: int):
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(buf) and buf[pos:pos + 1].isspace():
            pos += 1
        if buf[pos:pos + 1] == b"#":
            while pos < len(buf) and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise DatasetError("unexpected end of PGM header")
        tokens.append(buf[start:pos])
    return tokens, pos + 1  # single whitespace byte ends the header


def read_pgm(path) -> np.ndarray:
    """Load an 8-bit binary PGM as floats in [0, 1]."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"missing image file: {path.name}")
    buf = path.read_bytes()
    tokens, pos = _pgm_tokens(buf, 4)
    if tokens[0] != b"P5":
        raise DatasetError(f"{path.name}: not a binary PGM (magic {tokens[0]!r})")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise DatasetError(f"{path.name}: malformed PGM header") from None
    if maxval != 255:
        raise DatasetError(f"{path.name}: only 8-bit PGM is supported (maxval {maxval})")
    data = np.frombuffer(buf, dtype=np.uint8, count=-1, offset=pos)
    if data.size != w * h:
        raise DimensionMismatchError(
            f"{path.name}: header says {w}x{h} but payload has {data.size} bytes"
        )
    return data.reshape(h, w) / 255.0


# ---------------------------------------------------------------- datasets

def save_dataset(records, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, r in enumerate(records):
        left, right = f"{i:05d}_left.pgm", f"{i:05d}_right.pgm"
        write_pgm(directory / left, r.pair.left.pixels)
        write_pgm(directory / right, r.pair.right.pixels)
        entries.append({
            "left": left,
            "right": right,
            "width": r.pair.left.width,
            "height": r.pair.left.height,
            "score": r.score.value,
            "object_id": r.object_id,
            "pose": {"dx": r.pose.offset.dx, "dy": r.pose.offset.dy},
            "seed": int(r.seed),
        })
    manifest = {"format": "tactile-regrasp-dataset", "version": 1, "records": entries}
    (directory / MANIFEST).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return directory


def load_dataset(directory) -> list[GraspRecord]:
    directory = Path(directory)
    manifest_path = directory / MANIFEST
    if not manifest_path.is_file():
        raise MissingFileError(f"missing dataset manifest: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text())
        entries = manifest["records"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ManifestError(f"malformed manifest {manifest_path}: {exc}") from None
    records = []
    for n, e in enumerate(entries):
        try:
            names = (str(e["left"]), str(e["right"]))
            shape = (int(e["height"]), int(e["width"]))
            score, obj_id = float(e["score"]), str(e["object_id"])
            pose = GraspPose(PlanarOffset(float(e["pose"]["dx"]), float(e["pose"]["dy"])))
            seed = int(e["seed"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"malformed manifest entry {n}: {exc!r}") from None
        left, right = (read_pgm(directory / name) for name in names)
        for name, img in zip(names, (left, right)):
            if img.shape != shape:
                raise DimensionMismatchError(
                    f"{name}: image is {img.shape[1]}x{img.shape[0]}, manifest says {shape[1]}x{shape[0]}"
                )
        records.append(GraspRecord(ImagePair(TactileImage(left), TactileImage(right)),
                                   GraspScore(score), obj_id, pose, seed))
    return records


# ---------------------------------------------------------------- weights

def save_model(params: QualityModelParams, path) -> None:
    """Write weights as float32; layout is magic, version, count, then per array
    its rank, dims and row-major data, all little-endian."""
    arrays = params.arrays()
    chunks = [MODEL_MAGIC, struct.pack("<II", MODEL_VERSION, len(arrays))]
    for a in arrays:
        a = np.ascontiguousarray(a, dtype="<f4")
        chunks.append(struct.pack("<I", a.ndim))
        chunks.append(struct.pack(f"<{a.ndim}I", *a.shape))
        chunks.append(a.tobytes())
    Path(path).write_bytes(b"".join(chunks))


def load_model(path) -> QualityModelParams:
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"missing model file: {path}")
    buf = path.read_bytes()
    if buf[:4] != MODEL_MAGIC:
        raise BadMagicError(f"{path.name}: bad magic {buf[:4]!r}, expected {MODEL_MAGIC!r}")
    if len(buf) < 12:
        raise TruncatedModelError(f"{path.name}: truncated header")
    version, count = struct.unpack_from("<II", buf, 4)
    if version != MODEL_VERSION:
        raise VersionMismatchError(f"{path.name}: format version {version}, expected {MODEL_VERSION}")
    pos, arrays = 12, []
    for layer in range(count):
        try:
            (ndim,) = struct.unpack_from("<I", buf, pos)
            shape = struct.unpack_from(f"<{ndim}I", buf, pos + 4)
        except struct.error:
            raise TruncatedModelError(f"{path.name}: truncated shape of layer {layer}") from None
        pos += 4 + 4 * ndim
        n = int(np.prod(shape, dtype=np.int64))
        if pos + 4 * n > len(buf):
            raise TruncatedModelError(f"{path.name}: truncated weights in layer {layer}")
        arrays.append(np.frombuffer(buf, dtype="<f4", count=n, offset=pos).reshape(shape).astype(np.float32))
        pos += 4 * n
    if pos != len(buf):
        raise ModelFormatError(f"{path.name}: {len(buf) - pos} trailing bytes after layer {count - 1}")
    try:
        return QualityModelParams.from_arrays(arrays)
    except ValueError as exc:
        raise ModelFormatError(f"{path.name}: {exc}") from None
