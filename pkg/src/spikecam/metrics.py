"""Reference PSNR and SSIM on [0, 1] images.

PSNR uses MAX = 1 and caps at 99 dB for vanishing error. SSIM is the
Gaussian-weighted local form: 11 x 11 window, sigma 1.5, K1 = 0.01,
K2 = 0.03, L = 1, mean of the local map over fully interior windows,
with no downsampling prefilter.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import fftconvolve

PSNR_CAP = 99.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _check_pair(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")


def mse(a: np.ndarray, b: np.ndarray) -> float:
    _check_pair(a, b)
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.mean(diff * diff))


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """10*log10(1/MSE) in dB, capped at 99 for (near-)identical images."""
    err = mse(a, b)
    if err == 0.0:
        return PSNR_CAP
    return min(10.0 * np.log10(1.0 / err), PSNR_CAP)


def gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    """Normalized 2-D Gaussian tap weights."""
    offsets = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    taps = np.exp(-(offsets ** 2) / (2.0 * sigma ** 2))
    kernel = np.outer(taps, taps)
    return kernel / kernel.sum()


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean local structural similarity over interior 11 x 11 windows."""
    _check_pair(a, b)
    if min(a.shape) < SSIM_WINDOW:
        raise ValueError(
            f"image sides must be >= {SSIM_WINDOW}, got {a.shape}")
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    w = gaussian_window()

    mu_x = fftconvolve(x, w, mode="valid")
    mu_y = fftconvolve(y, w, mode="valid")
    var_x = fftconvolve(x * x, w, mode="valid") - mu_x * mu_x
    var_y = fftconvolve(y * y, w, mode="valid") - mu_y * mu_y
    cov = fftconvolve(x * y, w, mode="valid") - mu_x * mu_y

    c1 = SSIM_K1 ** 2
    c2 = SSIM_K2 ** 2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))


@dataclass
class MetricReport:
    """Per-frame PSNR/SSIM plus their means over a sequence."""

    frame_psnr: list[float] = field(default_factory=list)
    frame_ssim: list[float] = field(default_factory=list)

    def add(self, reference: np.ndarray, candidate: np.ndarray):
        self.frame_psnr.append(psnr(reference, candidate))
        self.frame_ssim.append(ssim(reference, candidate))

    @property
    def mean_psnr(self) -> float:
        return float(np.mean(self.frame_psnr))

    @property
    def mean_ssim(self) -> float:
        return float(np.mean(self.frame_ssim))


def write_metrics_csv(rows: list[tuple[str, int, float, float]], path):
    """Rows of (scene, frame, psnr, ssim) under the fixed header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scene", "frame", "psnr", "ssim"])
        for scene, frame, p, s in rows:
            writer.writerow([scene, frame, f"{p:.6f}", f"{s:.6f}"])


def write_summary(rows: list[tuple[str, int, float, float]], path):
    """Plain-text per-scene and overall means."""
    scenes: dict[str, list[tuple[float, float]]] = {}
    for scene, _, p, s in rows:
        scenes.setdefault(scene, []).append((p, s))
    lines = [f"{'scene':<20} {'frames':>6} {'psnr':>10} {'ssim':>10}"]
    for scene in sorted(scenes):
        vals = np.asarray(scenes[scene])
        lines.append(f"{scene:<20} {len(vals):>6} "
                     f"{vals[:, 0].mean():>10.4f} {vals[:, 1].mean():>10.4f}")
    if rows:
        vals = np.asarray([(p, s) for _, _, p, s in rows])
        lines.append(f"{'mean':<20} {len(rows):>6} "
                     f"{vals[:, 0].mean():>10.4f} {vals[:, 1].mean():>10.4f}")
    Path(path).write_text("\n".join(lines) + "\n")
