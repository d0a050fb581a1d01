"""Deterministic procedural test scenes.

Four motion kinds cover the moving-pattern regimes the datasets need:
translating stripe patterns, a spinning spoked disk, a ball bouncing off
the image borders, and a smooth random texture under constant flow.
Every generator is a pure function of (dims, seed, params); unspecified
motion parameters are drawn from the seeded RNG within bounded ranges.
"""

from __future__ import annotations

import numpy as np

from .simulator import SceneSequence

KINDS = ("translating-bars", "rotating-disk", "bouncing-ball", "random-texture-flow")


def _grid(height: int, width: int):
    ys = np.arange(height, dtype=np.float64)
    xs = np.arange(width, dtype=np.float64)
    return ys[:, None], xs[None, :]


def _intensity_span(rng: np.random.Generator):
    lo = rng.uniform(0.02, 0.2)
    hi = rng.uniform(0.7, 1.0)
    return lo, hi


def translating_bars(height: int, width: int, length: int,
                     rng: np.random.Generator, *, velocity: float | None = None,
                     period: float | None = None, angle: float | None = None):
    """Sinusoidal stripe pattern sliding along its normal."""
    if velocity is None:
        velocity = rng.uniform(0.05, 0.4)
    if period is None:
        period = rng.uniform(8.0, 24.0)
    if angle is None:
        angle = rng.uniform(0.0, np.pi)
    lo, hi = _intensity_span(rng)
    ys, xs = _grid(height, width)
    u = xs * np.cos(angle) + ys * np.sin(angle)
    frames = np.empty((length, height, width), dtype=np.float64)
    for n in range(length):
        phase = 2.0 * np.pi * (u + velocity * n) / period
        frames[n] = lo + (hi - lo) * (0.5 + 0.5 * np.sin(phase))
    return frames


def rotating_disk(height: int, width: int, length: int,
                  rng: np.random.Generator, *, spokes: int | None = None,
                  ticks_per_rev: float | None = None):
    """Spoked disk spinning about the image center.

    The spoke phase advances by n / ticks_per_rev revolutions at frame n,
    reduced mod 1, so a whole number of revolutions reproduces frame 0
    exactly.
    """
    if spokes is None:
        spokes = int(rng.integers(3, 9))
    if ticks_per_rev is None:
        ticks_per_rev = float(rng.uniform(length / 2.0, 2.0 * length))
    lo, hi = _intensity_span(rng)
    ys, xs = _grid(height, width)
    cy, cx = (height - 1) / 2.0, (width - 1) / 2.0
    radius = 0.4 * min(height, width)
    theta = np.arctan2(ys - cy, xs - cx)
    inside = (ys - cy) ** 2 + (xs - cx) ** 2 <= radius ** 2
    frames = np.empty((length, height, width), dtype=np.float64)
    for n in range(length):
        phase = np.mod(n / ticks_per_rev, 1.0)
        pattern = lo + (hi - lo) * (0.5 + 0.5 * np.cos(
            spokes * (theta - 2.0 * np.pi * phase)))
        frames[n] = np.where(inside, pattern, lo)
    return frames


def bouncing_ball_path(height: int, width: int, length: int, radius: float,
                       start: tuple[float, float],
                       velocity: tuple[float, float]) -> np.ndarray:
    """Ball-center trajectory with elastic reflection off the borders.

    Returns (length, 2) array of (y, x); centers stay within
    [radius, dim - 1 - radius] on both axes.
    """
    ticks = np.arange(length, dtype=np.float64)
    path = np.empty((length, 2), dtype=np.float64)
    for axis, (dim, p0, v) in enumerate(
            zip((height, width), start, velocity)):
        lo, hi = radius, dim - 1 - radius
        if hi <= lo:
            raise ValueError("ball radius too large for the image")
        span = hi - lo
        q = np.mod(p0 - lo + v * ticks, 2.0 * span)
        path[:, axis] = lo + np.where(q > span, 2.0 * span - q, q)
    return path


def bouncing_ball(height: int, width: int, length: int,
                  rng: np.random.Generator, *, radius: float | None = None,
                  start: tuple[float, float] | None = None,
                  velocity: tuple[float, float] | None = None):
    """Bright soft-edged disk bouncing inside the frame."""
    if radius is None:
        radius = rng.uniform(0.08, 0.18) * min(height, width)
    if start is None:
        start = (rng.uniform(radius, height - 1 - radius),
                 rng.uniform(radius, width - 1 - radius))
    if velocity is None:
        speed = rng.uniform(0.05, 0.5)
        direction = rng.uniform(0.0, 2.0 * np.pi)
        velocity = (speed * np.sin(direction), speed * np.cos(direction))
    lo, hi = _intensity_span(rng)
    ys, xs = _grid(height, width)
    path = bouncing_ball_path(height, width, length, radius, start, velocity)
    frames = np.empty((length, height, width), dtype=np.float64)
    for n in range(length):
        dist = np.sqrt((ys - path[n, 0]) ** 2 + (xs - path[n, 1]) ** 2)
        coverage = np.clip(radius + 0.5 - dist, 0.0, 1.0)
        frames[n] = lo + (hi - lo) * coverage
    return frames


def random_texture_flow(height: int, width: int, length: int,
                        rng: np.random.Generator, *, waves: int = 6,
                        velocity: tuple[float, float] | None = None):
    """Smooth random sinusoid texture translating at constant velocity.

    The texture is evaluated analytically at flowed coordinates, so there
    is no resampling blur and the amplitude bound keeps values in [0, 1].
    """
    if velocity is None:
        speed = rng.uniform(0.05, 0.4)
        direction = rng.uniform(0.0, 2.0 * np.pi)
        velocity = (speed * np.sin(direction), speed * np.cos(direction))
    freq = rng.uniform(1.0 / 32.0, 1.0 / 6.0, size=waves)
    orient = rng.uniform(0.0, 2.0 * np.pi, size=waves)
    fy, fx = freq * np.sin(orient), freq * np.cos(orient)
    amp = rng.uniform(0.3, 1.0, size=waves)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=waves)
    norm = np.sum(np.abs(amp))
    lo, hi = _intensity_span(rng)
    ys, xs = _grid(height, width)
    vy, vx = velocity
    frames = np.empty((length, height, width), dtype=np.float64)
    for n in range(length):
        u, v = xs + vx * n, ys + vy * n
        tex = np.zeros((height, width), dtype=np.float64)
        for k in range(waves):
            tex += amp[k] * np.sin(2.0 * np.pi * (fx[k] * u + fy[k] * v) + phi[k])
        frames[n] = lo + (hi - lo) * (0.5 + 0.5 * tex / norm)
    return frames


_GENERATORS = {
    "translating-bars": translating_bars,
    "rotating-disk": rotating_disk,
    "bouncing-ball": bouncing_ball,
    "random-texture-flow": random_texture_flow,
}


def generate_synthetic_scene(kind: str, height: int, width: int, length: int,
                             seed: int = 0, start_tick: int = 0,
                             **params) -> SceneSequence:
    """Generate a moving scene of the given kind, deterministic under seed."""
    if kind not in _GENERATORS:
        raise ValueError(f"unknown scene kind {kind!r}, expected one of {KINDS}")
    rng = np.random.default_rng(seed)
    frames = _GENERATORS[kind](height, width, length, rng, **params)
    return SceneSequence(frames, start_tick)
