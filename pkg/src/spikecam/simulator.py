"""Integrate-and-fire spike camera simulation.

Each pixel accumulates input current once per readout tick and fires a
binary spike whenever the accumulation reaches the threshold, keeping the
mod-threshold remainder. The per-tick current is

    I_tot = gain * Y + dark            (accumulation units / tick)

with Y the scene intensity in [0, 1], an optional Poisson draw on the
photon term, and a per-pixel fixed-pattern dark current sampled once per
simulation.

Currents are quantized to integer accumulation quanta of 2**-32 units
before accumulating, so the spike arithmetic is exact integer math: the
emitted stream is reproducible bit-for-bit across backends and platforms,
and an independent prefix-sum check can predict it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._kernels import QUANTUM_SCALE, accumulate_fire, integrate_photon
from .stream import SpikeStream, pack_frames

QUANTUM_BITS = 32
_SCALE = QUANTUM_SCALE

# Ticks simulated per kernel call; bounds the transient int64 buffer while
# keeping per-call overhead negligible.
_CHUNK_TICKS = 128


def quantize_units(values) -> np.ndarray:
    """Quantize accumulation units (per tick) to int64 quanta."""
    return np.round(np.asarray(values, dtype=np.float64) * _SCALE).astype(np.int64)


@dataclass
class SimConfig:
    """Simulation parameters.

    threshold: accumulation level that triggers a spike (phi).
    gain: accumulation units per tick per unit intensity; the default
        makes a full-brightness pixel fire every 4 ticks.
    readout_period: ticks per readout; the discrete model fixes it at 1.
    dark_mean / dark_fpn_sigma: truncated-Gaussian fixed-pattern dark
        current, accumulation units per tick (default threshold/2500).
    shot_noise: Poisson-sample the photon term per tick.
    shot_photons_per_unit: photon count corresponding to one accumulation
        unit; sets the shot-noise magnitude.
    """

    threshold: float = 1.0
    gain: float = 0.25
    readout_period: int = 1
    dark_mean: float = 1.0 / 2500.0
    dark_fpn_sigma: float = 0.5 / 2500.0
    shot_noise: bool = False
    shot_photons_per_unit: float = 1000.0
    seed: int = 0

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be > 0")
        if self.gain <= 0:
            raise ValueError("gain must be > 0")
        if self.readout_period != 1:
            raise ValueError("the discrete model supports readout_period=1 only")
        if self.dark_mean < 0 or self.dark_fpn_sigma < 0:
            raise ValueError("dark current parameters must be >= 0")
        if self.shot_noise and self.shot_photons_per_unit <= 0:
            raise ValueError("shot_photons_per_unit must be > 0")

    @property
    def threshold_quanta(self) -> int:
        return int(quantize_units(self.threshold))

    def with_seed(self, seed: int) -> "SimConfig":
        return replace(self, seed=seed)


@dataclass
class PixelState:
    """Vectorized per-pixel sensor state.

    accumulator: residual accumulation in [0, threshold), units.
    dark_current: fixed-pattern dark current, units per tick.
    """

    accumulator: np.ndarray
    dark_current: np.ndarray


@dataclass
class SceneSequence:
    """Ground-truth intensity frames, one per readout tick.

    Intensity is piecewise-constant over each tick and normalized to
    [0, 1]. ``start_tick`` anchors frame 0 on the absolute tick clock.
    """

    frames: np.ndarray
    start_tick: int = 0

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float32)
        if frames.ndim != 3 or frames.shape[0] < 1:
            raise ValueError("frames must have shape (N, H, W) with N >= 1")
        if self.start_tick < 0:
            raise ValueError("start_tick must be >= 0")
        if frames.min() < 0.0 or frames.max() > 1.0:
            raise ValueError("scene intensities must lie in [0, 1]")
        self.frames = frames

    @property
    def length(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    def tick_of_frame(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise IndexError(f"frame index {index} out of range")
        return self.start_tick + index


def apply_darkening(scene: SceneSequence, factor: float) -> SceneSequence:
    """Scale every intensity by a constant in (0, 1]."""
    if not 0.0 < factor <= 1.0:
        raise ValueError(f"darkening factor must be in (0, 1], got {factor}")
    frames = np.clip(scene.frames * np.float32(factor), 0.0, 1.0)
    return SceneSequence(frames, scene.start_tick)


def sample_dark_current(cfg: SimConfig, height: int, width: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Per-pixel fixed-pattern dark current map (units/tick).

    Gaussian around ``dark_mean`` with spread ``dark_fpn_sigma``, clipped
    at zero; sampled once per simulation.
    """
    raw = rng.normal(cfg.dark_mean, cfg.dark_fpn_sigma, size=(height, width))
    return np.maximum(raw, 0.0)


def simulate_stream(scene: SceneSequence, cfg: SimConfig,
                    return_state: bool = False):
    """Convert an intensity sequence into a spike stream.

    Deterministic for a given (scene, cfg) including ``cfg.seed``: the RNG
    draws the dark map first, then (if enabled) per-chunk shot noise in
    tick order.
    """
    rng = np.random.default_rng(cfg.seed)
    dark = sample_dark_current(cfg, scene.height, scene.width, rng)
    dark_q = quantize_units(dark)
    threshold_q = cfg.threshold_quanta

    acc = np.zeros((scene.height, scene.width), dtype=np.int64)
    chunks = []
    for lo in range(0, scene.length, _CHUNK_TICKS):
        frames = scene.frames[lo:lo + _CHUNK_TICKS]
        if cfg.shot_noise:
            p = cfg.shot_photons_per_unit
            photon = rng.poisson(cfg.gain * frames.astype(np.float64) * p) / p
            currents_q = quantize_units(photon) + dark_q
            spikes = accumulate_fire(currents_q, threshold_q, acc)
        else:
            spikes = integrate_photon(frames, cfg.gain, dark_q, threshold_q, acc)
        chunks.append(pack_frames(spikes))

    stream = SpikeStream(scene.height, scene.width, scene.length,
                         np.concatenate(chunks, axis=0), scene.start_tick)
    if return_state:
        state = PixelState(accumulator=acc / _SCALE, dark_current=dark)
        return stream, state
    return stream
