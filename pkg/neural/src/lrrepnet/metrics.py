"""PSNR and Gaussian-windowed SSIM on [0, 1] images (validation only)."""

from __future__ import annotations

import numpy as np
import torch
import torch.nn.functional as F

PSNR_CAP = 99.0


def psnr(reference, candidate) -> float:
    a = np.asarray(reference, dtype=np.float64)
    b = np.asarray(candidate, dtype=np.float64)
    err = float(np.mean((a - b) ** 2))
    if err == 0.0:
        return PSNR_CAP
    return min(10.0 * np.log10(1.0 / err), PSNR_CAP)


def _gaussian_kernel(size: int = 11, sigma: float = 1.5) -> torch.Tensor:
    offsets = torch.arange(size, dtype=torch.float64) - (size - 1) / 2
    taps = torch.exp(-(offsets ** 2) / (2 * sigma ** 2))
    kernel = torch.outer(taps, taps)
    return (kernel / kernel.sum())[None, None]


def ssim(reference, candidate) -> float:
    """Mean local SSIM, 11x11 Gaussian window sigma 1.5, K1/K2 0.01/0.03."""
    a = torch.as_tensor(np.asarray(reference), dtype=torch.float64)[None, None]
    b = torch.as_tensor(np.asarray(candidate), dtype=torch.float64)[None, None]
    if min(a.shape[-2:]) < 11:
        raise ValueError("image sides must be >= 11")
    w = _gaussian_kernel()
    mu_a = F.conv2d(a, w)
    mu_b = F.conv2d(b, w)
    var_a = F.conv2d(a * a, w) - mu_a * mu_a
    var_b = F.conv2d(b * b, w) - mu_b * mu_b
    cov = F.conv2d(a * b, w) - mu_a * mu_b
    c1, c2 = 0.01 ** 2, 0.03 ** 2
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float((num / den).mean())
