"""Bidirectional recurrent reconstruction network.

Per window the model fuses two shallow feature stacks - one from the raw
spike window, one from the globally completed interval map - through a
sigmoid-gated attention block (the light-robust representation). A
16-conv residual backbone extracts deep features, which are fused with
the carried temporal features of each direction (with deformable
alignment of the carried features), and a 3-conv head decodes the
forward/backward pair into intensity.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn.functional as F
from torch import nn

try:
    from torchvision.ops import deform_conv2d

    HAS_DEFORM = True
except ImportError:  # pragma: no cover - torchvision is a declared dependency
    HAS_DEFORM = False

GISI_MODES = ("per-direction", "combined")
ALIGNMENT_KINDS = ("pcd-deform", "pyramid-plain")


@dataclass
class LrRepConfig:
    channels: int = 32
    window_len: int = 41
    gisi_mode: str = "per-direction"
    alignment: str = "auto"  # pcd-deform when deformable conv is available

    def __post_init__(self):
        if self.channels <= 0:
            raise ValueError("channels must be positive")
        if self.window_len % 2 != 1:
            raise ValueError("window_len must be odd")
        if self.gisi_mode not in GISI_MODES:
            raise ValueError(f"gisi_mode must be one of {GISI_MODES}")
        if self.alignment == "auto":
            self.alignment = "pcd-deform" if HAS_DEFORM else "pyramid-plain"
        if self.alignment not in ALIGNMENT_KINDS:
            raise ValueError(f"alignment must be one of {ALIGNMENT_KINDS}")
        if self.alignment == "pcd-deform" and not HAS_DEFORM:
            raise ValueError("pcd-deform requires torchvision deform_conv2d")


class ConvBlock(nn.Module):
    """Two 3x3 convs with LeakyReLU; the shallow feature extractor."""

    def __init__(self, in_ch: int, out_ch: int):
        super().__init__()
        self.conv1 = nn.Conv2d(in_ch, out_ch, 3, padding=1)
        self.conv2 = nn.Conv2d(out_ch, out_ch, 3, padding=1)

    def forward(self, x):
        x = F.leaky_relu(self.conv1(x), 0.1)
        return F.leaky_relu(self.conv2(x), 0.1)


class AttentionGates(nn.Module):
    """3-layer conv / 3-activation gate block.

    Maps the concatenated shallow features to two per-pixel gate maps
    through two LeakyReLU stages and a final sigmoid.
    """

    def __init__(self, channels: int):
        super().__init__()
        self.conv1 = nn.Conv2d(2 * channels, channels, 3, padding=1)
        self.conv2 = nn.Conv2d(channels, channels, 3, padding=1)
        self.final = nn.Conv2d(channels, 2 * channels, 3, padding=1)

    def forward(self, interval_feats, spike_feats):
        x = torch.cat([interval_feats, spike_feats], dim=1)
        x = F.leaky_relu(self.conv1(x), 0.1)
        x = F.leaky_relu(self.conv2(x), 0.1)
        gates = torch.sigmoid(self.final(x))
        beta, alpha = gates.chunk(2, dim=1)
        return beta, alpha


class ResidualBlock(nn.Module):
    """Bias-free conv-relu-conv with a learnable residual scale."""

    def __init__(self, channels: int):
        super().__init__()
        self.conv1 = nn.Conv2d(channels, channels, 3, padding=1, bias=False)
        self.conv2 = nn.Conv2d(channels, channels, 3, padding=1, bias=False)
        self.scale = nn.Parameter(torch.ones(1))

    def forward(self, x):
        return x + self.scale * self.conv2(F.relu(self.conv1(x)))


class DeformAlign(nn.Module):
    """Two-level pyramid cascade of deformable convolutions.

    Offsets predicted at half resolution steer the coarse alignment and
    cascade into the full-resolution offset prediction.
    """

    def __init__(self, channels: int):
        super().__init__()
        offset_ch = 2 * 3 * 3
        self.off_coarse = nn.Sequential(
            nn.Conv2d(2 * channels, channels, 3, padding=1),
            nn.LeakyReLU(0.1),
            nn.Conv2d(channels, offset_ch, 3, padding=1))
        self.weight_coarse = nn.Parameter(
            torch.empty(channels, channels, 3, 3))
        self.bias_coarse = nn.Parameter(torch.zeros(channels))
        self.off_fine = nn.Sequential(
            nn.Conv2d(2 * channels + offset_ch, channels, 3, padding=1),
            nn.LeakyReLU(0.1),
            nn.Conv2d(channels, offset_ch, 3, padding=1))
        self.weight_fine = nn.Parameter(torch.empty(channels, channels, 3, 3))
        self.bias_fine = nn.Parameter(torch.zeros(channels))
        self.merge = nn.Conv2d(2 * channels, channels, 3, padding=1)
        for w in (self.weight_coarse, self.weight_fine):
            nn.init.kaiming_uniform_(w, a=0.1)

    def forward(self, adjacent, current):
        size = adjacent.shape[-2:]
        adj2 = F.avg_pool2d(adjacent, 2)
        cur2 = F.avg_pool2d(current, 2)
        off2 = self.off_coarse(torch.cat([adj2, cur2], dim=1))
        aligned2 = deform_conv2d(adj2, off2, self.weight_coarse,
                                 self.bias_coarse, padding=1)
        off2_up = 2.0 * F.interpolate(off2, size=size, mode="nearest")
        off1 = self.off_fine(torch.cat([adjacent, current, off2_up], dim=1))
        aligned1 = deform_conv2d(adjacent, off1, self.weight_fine,
                                 self.bias_fine, padding=1)
        aligned2_up = F.interpolate(aligned2, size=size, mode="nearest")
        return self.merge(torch.cat([aligned1, aligned2_up], dim=1))


class PlainAlign(nn.Module):
    """Offset-free two-level fallback used when deformable convolution
    is unavailable (simplified alignment)."""

    def __init__(self, channels: int):
        super().__init__()
        self.coarse = ConvBlock(2 * channels, channels)
        self.fine = ConvBlock(2 * channels, channels)
        self.merge = nn.Conv2d(2 * channels, channels, 3, padding=1)

    def forward(self, adjacent, current):
        size = adjacent.shape[-2:]
        both2 = F.avg_pool2d(torch.cat([adjacent, current], dim=1), 2)
        coarse = F.interpolate(self.coarse(both2), size=size, mode="nearest")
        fine = self.fine(torch.cat([adjacent, current], dim=1))
        return self.merge(torch.cat([fine, coarse], dim=1))


class FusionModule(nn.Module):
    """One direction's temporal fusion: align the carried features to the
    current ones, add, concatenate, and re-extract."""

    def __init__(self, channels: int, alignment: str):
        super().__init__()
        self.align = (DeformAlign(channels) if alignment == "pcd-deform"
                      else PlainAlign(channels))
        self.reduce = nn.Conv2d(2 * channels, channels, 3, padding=1)
        self.blocks = nn.Sequential(ResidualBlock(channels),
                                    ResidualBlock(channels))

    def forward(self, current, carried):
        anchored = current + self.align(carried, current)
        fused = F.leaky_relu(self.reduce(torch.cat([anchored, carried], dim=1)),
                             0.1)
        return self.blocks(fused)


class LrRepNet(nn.Module):
    """Full reconstruction model over contiguous window sequences."""

    def __init__(self, cfg: LrRepConfig):
        super().__init__()
        self.cfg = cfg
        c = cfg.channels
        self.spike_feats = ConvBlock(cfg.window_len, c)
        self.interval_feats = ConvBlock(1, c)
        self.gates = AttentionGates(c)
        self.backbone = nn.Sequential(*[ResidualBlock(c) for _ in range(8)])
        self.fuse_forward = FusionModule(c, cfg.alignment)
        self.fuse_backward = FusionModule(c, cfg.alignment)
        self.head = nn.Sequential(
            nn.Conv2d(2 * c, c, 3, padding=1), nn.ReLU(),
            nn.Conv2d(c, c, 3, padding=1), nn.ReLU(),
            nn.Conv2d(c, 1, 3, padding=1))

    def lr_rep_forward(self, window, gisi, return_parts: bool = False):
        """Gated fusion of interval and spike features (the LR-Rep).

        window: (B, L, H, W) spike occupancy; gisi: (B, 1, H, W)
        intervals normalized to [0, 1] by their cap.
        """
        f_s = self.spike_feats(window)
        f_g = self.interval_feats(gisi)
        beta, alpha = self.gates(f_g, f_s)
        rep = beta * f_g + alpha * f_s
        if return_parts:
            return rep, f_g, f_s, beta, alpha
        return rep

    def backbone_forward(self, rep):
        return self.backbone(rep)

    def fuse_step(self, current, carried, direction: str):
        if direction == "forward":
            return self.fuse_forward(current, carried)
        if direction == "backward":
            return self.fuse_backward(current, carried)
        raise ValueError(f"direction must be forward or backward, got {direction!r}")

    def reconstruct_head(self, fused_forward, fused_backward):
        """Decode intensity from the direction pair, backward first."""
        return self.head(torch.cat([fused_backward, fused_forward], dim=1))

    def init_carry(self, batch: int, height: int, width: int, ref):
        c = self.cfg.channels
        return torch.zeros(batch, c, height, width, dtype=ref.dtype,
                           device=ref.device)

    def forward(self, windows, gisi_fwd, gisi_bwd, clamp: bool = False,
                return_features: bool = False):
        """Reconstruct every window of a sequence.

        windows: (B, K, L, H, W); gisi_fwd / gisi_bwd: (B, K, 1, H, W)
        (pass the combined map for both in combined mode). Returns
        (B, K, 1, H, W) predictions, optionally with the per-window
        fused features of both directions.
        """
        batch, num_windows = windows.shape[:2]
        height, width = windows.shape[-2:]

        carried = self.init_carry(batch, height, width, windows)
        backward_feats = [None] * num_windows
        for i in range(num_windows - 1, -1, -1):
            rep = self.lr_rep_forward(windows[:, i], gisi_bwd[:, i])
            carried = self.fuse_step(self.backbone_forward(rep), carried,
                                     "backward")
            backward_feats[i] = carried

        outputs = []
        forward_feats = []
        carried = self.init_carry(batch, height, width, windows)
        for i in range(num_windows):
            rep = self.lr_rep_forward(windows[:, i], gisi_fwd[:, i])
            carried = self.fuse_step(self.backbone_forward(rep), carried,
                                     "forward")
            forward_feats.append(carried)
            outputs.append(self.reconstruct_head(carried, backward_feats[i]))

        stacked = torch.stack(outputs, dim=1)
        if clamp:
            stacked = stacked.clamp(0.0, 1.0)
        if return_features:
            return stacked, forward_feats, backward_feats
        return stacked


def l1_loss(predictions, targets) -> torch.Tensor:
    """Sum over the K windows of the per-image mean absolute error,
    averaged over the batch."""
    if predictions.shape != targets.shape:
        raise ValueError(f"prediction/target shapes differ: "
                         f"{tuple(predictions.shape)} vs {tuple(targets.shape)}")
    per_image = (predictions - targets).abs().mean(dim=(-3, -2, -1))
    return per_image.sum(dim=-1).mean()


@torch.no_grad()
def bidirectional_inference(model: LrRepNet, windows, gisi_fwd, gisi_bwd):
    """Clamped sequence reconstruction in eval mode."""
    was_training = model.training
    model.eval()
    try:
        return model(windows, gisi_fwd, gisi_bwd, clamp=True)
    finally:
        model.train(was_training)
