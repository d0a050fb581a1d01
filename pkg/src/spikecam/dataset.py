"""Synthetic low-light dataset generation.

Each scene draws a procedural moving pattern, darkens it by a random
constant from the configured range, simulates the spike stream, and
writes the stream plus one ground-truth frame per window center. All
randomness is derived from the master seed through per-scene seed
sequences, so a config generates byte-identical output on every run.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .codec import write_spk
from .imgio import write_gray
from .manifest import DatasetConfig, DatasetManifest, SceneEntry, write_manifest
from .recon import to_uint8
from .scenes import generate_synthetic_scene
from .simulator import apply_darkening, simulate_stream


def window_center_ticks(num_windows: int, window_len: int) -> list[int]:
    """Center tick of window i relative to stream origin: i*L + (L-1)/2."""
    delta = (window_len - 1) // 2
    return [i * window_len + delta for i in range(num_windows)]


def plan_scenes(config: DatasetConfig) -> list[SceneEntry]:
    """Derive the per-scene ids, kinds, seeds, and darkening factors."""
    entries = []
    for i in range(config.scenes):
        words = np.random.SeedSequence([config.seed, i]).generate_state(
            2, dtype=np.uint64)
        unit = float(words[1]) / float(2 ** 64)
        factor = config.darken_min + (config.darken_max - config.darken_min) * unit
        scene_id = f"scene{i:04d}"
        entries.append(SceneEntry(
            scene_id=scene_id,
            kind=config.kinds[i % len(config.kinds)],
            seed=int(words[0]),
            darkening=factor,
            stream_path=f"streams/{scene_id}.spk",
            gt_dir=f"gt/{scene_id}",
        ))
    return entries


def generate_dataset(config: DatasetConfig, out_dir) -> DatasetManifest:
    """Write streams, ground-truth frames, and the manifest."""
    out = Path(out_dir)
    (out / "streams").mkdir(parents=True, exist_ok=True)
    manifest = DatasetManifest(config=config, scenes=plan_scenes(config))
    centers = window_center_ticks(config.num_windows, config.window_len)

    for entry in manifest.scenes:
        scene = generate_synthetic_scene(
            entry.kind, config.height, config.width, config.stream_len,
            seed=entry.seed)
        dark_scene = apply_darkening(scene, entry.darkening)
        stream = simulate_stream(dark_scene, config.sim.with_seed(entry.seed))
        write_spk(stream, out / entry.stream_path)

        gt_dir = out / entry.gt_dir
        gt_dir.mkdir(parents=True, exist_ok=True)
        for rel, tick in zip(manifest.gt_paths(entry), centers):
            write_gray(to_uint8(dark_scene.frames[tick]), out / rel)

    write_manifest(manifest, out / "manifest.txt")
    return manifest
