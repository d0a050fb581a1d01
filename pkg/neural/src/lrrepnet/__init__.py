"""Bidirectional recurrent reconstruction network for spike-camera
streams, trained on spikecam datasets consumed through their on-disk
formats (.spk streams, .ten interval maps, PGM/PNG ground truth)."""

from .data import load_scene, load_scenes, sample_batch, scene_to_tensors
from .fileio import load_dataset_index, read_gray, read_spk, read_ten
from .metrics import psnr, ssim
from .model import (LrRepConfig, LrRepNet, bidirectional_inference, l1_loss)
from .train import (TrainConfig, default_header, evaluate, train,
                    train_ablation)

__version__ = "0.1.0"

__all__ = [
    "LrRepConfig", "LrRepNet", "bidirectional_inference", "l1_loss",
    "TrainConfig", "default_header", "evaluate", "train", "train_ablation",
    "load_dataset_index", "read_spk", "read_ten", "read_gray",
    "load_scene", "load_scenes", "sample_batch", "scene_to_tensors",
    "psnr", "ssim",
    "__version__",
]
