"""Readers for the spikecam interchange formats.

The network consumes datasets through files only: `.spk` spike streams,
`.ten` float tensors, 8-bit grayscale images, and the plain-text
key=value manifest. These readers implement those published layouts from
scratch.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_SPK_HEADER = struct.Struct("<4sHIIIQ")


def read_spk(path) -> tuple[np.ndarray, int]:
    """Decode a `.spk` stream to a dense (N, H, W) uint8 tensor.

    Header: magic SPKS, u16 version=1, u32 height/width/length, u64
    origin tick; then one padded row of ceil(H*W/8) bytes per tick,
    LSB-first over row-major pixels. Returns (dense, origin_tick).
    """
    raw = Path(path).read_bytes()
    magic, version, height, width, length, origin = _SPK_HEADER.unpack_from(raw)
    if magic != b"SPKS" or version != 1:
        raise ValueError(f"{path}: not a version-1 .spk file")
    frame_bytes = (height * width + 7) // 8
    payload = np.frombuffer(raw, np.uint8, offset=_SPK_HEADER.size)
    if payload.size != length * frame_bytes:
        raise ValueError(f"{path}: truncated payload")
    rows = payload.reshape(length, frame_bytes)
    dense = np.unpackbits(rows, axis=1, count=height * width, bitorder="little")
    return dense.reshape(length, height, width), origin


def read_ten(path) -> np.ndarray:
    """Decode a `.ten` tensor: magic TENS, u8 rank, u32 dims, f32 payload."""
    raw = Path(path).read_bytes()
    if raw[:4] != b"TENS":
        raise ValueError(f"{path}: not a .ten file")
    rank = raw[4]
    dims = struct.unpack_from(f"<{rank}I", raw, 5)
    data = np.frombuffer(raw, "<f4", offset=5 + 4 * rank)
    if data.size != int(np.prod(dims)):
        raise ValueError(f"{path}: payload does not match dims {dims}")
    return data.reshape(dims).copy()


def read_gray(path) -> np.ndarray:
    """8-bit grayscale image (binary PGM or PNG) as float64 in [0, 1]."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        raw = path.read_bytes()
        fields, pos = [], 0
        while len(fields) < 4:
            while raw[pos:pos + 1].isspace():
                pos += 1
            if raw[pos:pos + 1] == b"#":
                pos = raw.index(b"\n", pos) + 1
                continue
            start = pos
            while not raw[pos:pos + 1].isspace():
                pos += 1
            fields.append(raw[start:pos])
        if fields[0] != b"P5" or int(fields[3]) != 255:
            raise ValueError(f"{path}: expected 8-bit binary PGM")
        width, height = int(fields[1]), int(fields[2])
        pixels = np.frombuffer(raw, np.uint8, offset=pos + 1, count=height * width)
        return pixels.reshape(height, width) / 255.0
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img.convert("L"), dtype=np.float64) / 255.0


def parse_kv(path) -> dict[str, str]:
    values: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#") and "=" in line:
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


@dataclass
class SceneFiles:
    scene_id: str
    stream: Path
    gt_images: list[Path]
    isi_dirs: dict[str, Path]  # variant -> directory of winNNNN.isi.ten


@dataclass
class DatasetIndex:
    """Resolved view of a spikecam dataset directory."""

    root: Path
    height: int
    width: int
    window_len: int
    num_windows: int
    scenes: list[SceneFiles]

    @property
    def global_cap(self) -> int:
        return self.num_windows * self.window_len


ISI_VARIANTS = ("fwd", "bwd", "comb", "lisi")


def load_dataset_index(root) -> DatasetIndex:
    """Read manifest.txt and locate streams, ground truth, and interval
    maps (under isi/<scene>/<variant>/)."""
    root = Path(root)
    values = parse_kv(root / "manifest.txt")
    height, width = int(values["height"]), int(values["width"])
    window_len = int(values["window_len"])
    num_windows = int(values["num_windows"])
    image_format = values.get("image_format", "pgm")

    scenes = []
    for i in range(int(values["scene_count"])):
        scene_id = values[f"scene.{i}.id"]
        gt_dir = root / values[f"scene.{i}.gt_dir"]
        scenes.append(SceneFiles(
            scene_id=scene_id,
            stream=root / values[f"scene.{i}.stream"],
            gt_images=[gt_dir / f"win{j:04d}.{image_format}"
                       for j in range(num_windows)],
            isi_dirs={v: root / "isi" / scene_id / v for v in ISI_VARIANTS},
        ))
    return DatasetIndex(root=root, height=height, width=width,
                        window_len=window_len, num_windows=num_windows,
                        scenes=scenes)
