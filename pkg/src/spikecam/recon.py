"""Training-free reconstructions from spike windows and interval maps.

Estimates live in the scene's normalized intensity domain: with threshold
phi and gain g, a pixel of intensity Y fires at rate g*Y/phi per tick, so
firing rate and interval reciprocal both invert to intensity up to
one-tick quantization.
"""

from __future__ import annotations

import numpy as np

from .isi import IsiMap, gisi_sweep
from .simulator import SimConfig
from .stream import SpikeWindow, spike_count_map

# A reconstructed image is a float64 H x W array of intensities in [0, 1].
ReconImage = np.ndarray


def tfp_reconstruct(window: SpikeWindow, cfg: SimConfig) -> ReconImage:
    """Windowed firing-rate estimate: Y = phi * count / (L * gain)."""
    counts = spike_count_map(window)
    image = cfg.threshold * counts / (window.length * cfg.gain)
    return np.clip(image, 0.0, 1.0)


def tfi_reconstruct(isi: IsiMap, cfg: SimConfig) -> ReconImage:
    """Interval-reciprocal estimate: Y = phi / (gain * interval).

    Works on either a local or a global interval map. Fully censored
    pixels carry the capped interval, so they land on the deterministic
    floor value phi / (gain * cap).
    """
    image = cfg.threshold / (cfg.gain * isi.intervals.astype(np.float64))
    return np.clip(image, 0.0, 1.0)


def gisi_tfi_reconstruct(windows: list[SpikeWindow],
                         cfg: SimConfig) -> list[ReconImage]:
    """Interval-reciprocal estimates from globally completed intervals."""
    sweep = gisi_sweep(windows)
    return [tfi_reconstruct(m, cfg) for m in sweep.gisi_combined]


def to_uint8(image: ReconImage) -> np.ndarray:
    """8-bit export: multiply by 255, round half up."""
    return np.clip(np.floor(np.asarray(image) * 255.0 + 0.5), 0, 255).astype(np.uint8)


def from_uint8(raw: np.ndarray) -> ReconImage:
    return np.asarray(raw, dtype=np.float64) / 255.0
