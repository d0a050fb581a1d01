"""Dataset loading and batch assembly.

Scenes are loaded fully into memory at desk scale: decoded spike windows,
normalized interval maps for both sweep directions, and the ground-truth
frame per window center. Interval maps come from the dataset's
isi/<scene>/<variant>/ directories (written by the stream toolkit's
`transform` subcommand); `rep_source` picks globally completed maps
("gisi") or the window-local ablation variant ("lisi").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .fileio import DatasetIndex, SceneFiles, read_gray, read_spk, read_ten


@dataclass
class SceneTensors:
    scene_id: str
    windows: np.ndarray    # (K, L, H, W) float32, 0/1 occupancy
    intervals_fwd: np.ndarray  # (K, 1, H, W) float32 in [0, 1]
    intervals_bwd: np.ndarray
    targets: np.ndarray    # (K, H, W) float32 in [0, 1]


def _read_isi_stack(directory, num_windows: int, norm: float) -> np.ndarray:
    maps = []
    for i in range(num_windows):
        raw = read_ten(directory / f"win{i:04d}.isi.ten")
        maps.append(raw[None].astype(np.float32) / norm)
    return np.stack(maps)


def load_scene(index: DatasetIndex, files: SceneFiles,
               rep_source: str = "gisi",
               gisi_mode: str = "per-direction") -> SceneTensors:
    if rep_source not in ("gisi", "lisi"):
        raise ValueError(f"rep_source must be gisi or lisi, got {rep_source!r}")
    dense, _ = read_spk(files.stream)
    k, length = index.num_windows, index.window_len
    windows = dense[:k * length].reshape(k, length, index.height, index.width)
    targets = np.stack([read_gray(p) for p in files.gt_images]).astype(np.float32)

    if rep_source == "lisi":
        fwd = bwd = _read_isi_stack(files.isi_dirs["lisi"], k, float(length))
    elif gisi_mode == "combined":
        fwd = bwd = _read_isi_stack(files.isi_dirs["comb"], k,
                                    float(index.global_cap))
    else:
        fwd = _read_isi_stack(files.isi_dirs["fwd"], k, float(index.global_cap))
        bwd = _read_isi_stack(files.isi_dirs["bwd"], k, float(index.global_cap))
    return SceneTensors(scene_id=files.scene_id,
                        windows=windows.astype(np.float32),
                        intervals_fwd=fwd, intervals_bwd=bwd, targets=targets)


def load_scenes(index: DatasetIndex, rep_source: str = "gisi",
                gisi_mode: str = "per-direction") -> list[SceneTensors]:
    return [load_scene(index, files, rep_source, gisi_mode)
            for files in index.scenes]


def scene_to_tensors(scene: SceneTensors):
    """Full-frame tensors with a singleton batch axis."""
    return (torch.from_numpy(scene.windows)[None],
            torch.from_numpy(scene.intervals_fwd)[None],
            torch.from_numpy(scene.intervals_bwd)[None],
            torch.from_numpy(scene.targets)[None, :, None])


def sample_batch(scenes: list[SceneTensors], picks, rng: np.random.Generator,
                 crop: int, k_windows: int):
    """Assemble a cropped training batch from the picked scene indices."""
    wins, fwds, bwds, tgts = [], [], [], []
    for pick in picks:
        scene = scenes[pick]
        total_k, _, height, width = scene.windows.shape
        if k_windows > total_k:
            raise ValueError(f"k_windows {k_windows} exceeds {total_k} available")
        if crop > height or crop > width:
            raise ValueError(f"crop {crop} exceeds frame {height}x{width}")
        start = int(rng.integers(0, total_k - k_windows + 1))
        y0 = int(rng.integers(0, height - crop + 1))
        x0 = int(rng.integers(0, width - crop + 1))
        sl_k = slice(start, start + k_windows)
        sl_y, sl_x = slice(y0, y0 + crop), slice(x0, x0 + crop)
        wins.append(scene.windows[sl_k, :, sl_y, sl_x])
        fwds.append(scene.intervals_fwd[sl_k, :, sl_y, sl_x])
        bwds.append(scene.intervals_bwd[sl_k, :, sl_y, sl_x])
        tgts.append(scene.targets[sl_k, None, sl_y, sl_x])
    as_tensor = lambda parts: torch.from_numpy(np.stack(parts))  # noqa: E731
    return (as_tensor(wins), as_tensor(fwds), as_tensor(bwds), as_tensor(tgts))
