"""Spike-camera stream toolkit.

Simulates integrate-and-fire spike streams from intensity sequences,
stores them in a bit-packed `.spk` format, computes local and globally
completed inter-spike-interval maps, reconstructs intensity with
training-free estimators, and scores results with reference PSNR/SSIM.
"""

from .backend import active_backend, set_backend
from .codec import (SpkCorruptionError, SpkError, SpkFormatError,
                    SpkLengthError, decode_stream, encode_stream, read_spk,
                    write_spk)
from .isi import (GisiSweepResult, IsiMap, ReleaseTimeState, gisi_sweep,
                  gisi_update, lisi_transform, release_state_update)
from .metrics import MetricReport, psnr, ssim
from .recon import (gisi_tfi_reconstruct, tfi_reconstruct, tfp_reconstruct,
                    to_uint8)
from .scenes import KINDS, generate_synthetic_scene
from .simulator import (PixelState, SceneSequence, SimConfig, apply_darkening,
                        sample_dark_current, simulate_stream)
from .stream import (SpikeStream, SpikeWindow, contiguous_windows,
                     slice_window, spike_count_map)
from .tensorio import read_ten, write_ten

__version__ = "0.1.0"

__all__ = [
    "active_backend", "set_backend",
    "SpkError", "SpkFormatError", "SpkLengthError", "SpkCorruptionError",
    "encode_stream", "decode_stream", "read_spk", "write_spk",
    "IsiMap", "ReleaseTimeState", "GisiSweepResult",
    "lisi_transform", "gisi_update", "release_state_update", "gisi_sweep",
    "MetricReport", "psnr", "ssim",
    "tfp_reconstruct", "tfi_reconstruct", "gisi_tfi_reconstruct", "to_uint8",
    "KINDS", "generate_synthetic_scene",
    "SimConfig", "PixelState", "SceneSequence",
    "apply_darkening", "sample_dark_current", "simulate_stream",
    "SpikeStream", "SpikeWindow", "slice_window", "contiguous_windows",
    "spike_count_map",
    "read_ten", "write_ten",
    "__version__",
]
