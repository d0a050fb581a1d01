"""In-memory spike stream representation and windowing primitives.

A spike stream is a binary H x W x N occupancy tensor: one bit per pixel
per readout tick. Frames are stored bit-packed, one padded row of
``ceil(H*W/8)`` bytes per tick, LSB-first within each byte over row-major
pixel index. Streams carry an absolute ``origin_tick`` so interval
release times can live on one global clock across windows.

Streams are immutable after construction; every operation here is a pure
read.
"""

from __future__ import annotations

import numpy as np


def frame_byte_count(height: int, width: int) -> int:
    return (height * width + 7) // 8


def pack_frames(dense: np.ndarray) -> np.ndarray:
    """Pack (N, H, W) occupancy into (N, frame_bytes) LSB-first bytes."""
    n = dense.shape[0]
    flat = (dense.reshape(n, -1) != 0)
    return np.packbits(flat, axis=1, bitorder="little")


def unpack_frames(bits: np.ndarray, height: int, width: int) -> np.ndarray:
    """Unpack (N, frame_bytes) rows back into a (N, H, W) uint8 tensor."""
    flat = np.unpackbits(bits, axis=1, count=height * width, bitorder="little")
    return flat.reshape(bits.shape[0], height, width)


class SpikeStream:
    """Bit-packed binary spike stream of shape height x width x length."""

    __slots__ = ("height", "width", "length", "origin_tick", "bits")

    def __init__(self, height: int, width: int, length: int,
                 bits: np.ndarray, origin_tick: int = 0):
        if height <= 0 or width <= 0 or length <= 0:
            raise ValueError("stream dimensions must be positive")
        if origin_tick < 0:
            raise ValueError("origin_tick must be >= 0")
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        expected = (length, frame_byte_count(height, width))
        if bits.shape != expected:
            raise ValueError(f"bits shape {bits.shape} != expected {expected}")
        pad = expected[1] * 8 - height * width
        if pad and np.any(bits[:, -1] & ~np.uint8((1 << (8 - pad)) - 1)):
            raise ValueError("padding bits must be zero")
        self.height = height
        self.width = width
        self.length = length
        self.origin_tick = origin_tick
        bits.flags.writeable = False
        self.bits = bits

    @classmethod
    def from_dense(cls, dense: np.ndarray, origin_tick: int = 0) -> "SpikeStream":
        """Build a stream from a dense (N, H, W) 0/1 tensor."""
        dense = np.asarray(dense)
        if dense.ndim != 3:
            raise ValueError("dense spike tensor must have shape (N, H, W)")
        n, h, w = dense.shape
        return cls(h, w, n, pack_frames(dense), origin_tick)

    def to_dense(self) -> np.ndarray:
        return unpack_frames(self.bits, self.height, self.width)

    @property
    def end_tick(self) -> int:
        """Absolute tick of the last frame (inclusive)."""
        return self.origin_tick + self.length - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpikeStream):
            return NotImplemented
        return (self.height == other.height and self.width == other.width
                and self.length == other.length
                and self.origin_tick == other.origin_tick
                and np.array_equal(self.bits, other.bits))

    def __repr__(self) -> str:
        return (f"SpikeStream({self.height}x{self.width}x{self.length}, "
                f"origin_tick={self.origin_tick})")


class SpikeWindow:
    """A 2*delta_t + 1 tick view of a stream, centered on an absolute tick."""

    __slots__ = ("stream", "center_tick", "delta_t")

    def __init__(self, stream: SpikeStream, center_tick: int, delta_t: int):
        if delta_t < 0:
            raise ValueError("delta_t must be >= 0")
        if (center_tick - delta_t < stream.origin_tick
                or center_tick + delta_t > stream.end_tick):
            raise IndexError(
                f"window [{center_tick - delta_t}, {center_tick + delta_t}] "
                f"outside stream ticks [{stream.origin_tick}, {stream.end_tick}]")
        self.stream = stream
        self.center_tick = center_tick
        self.delta_t = delta_t

    @property
    def height(self) -> int:
        return self.stream.height

    @property
    def width(self) -> int:
        return self.stream.width

    @property
    def length(self) -> int:
        return 2 * self.delta_t + 1

    @property
    def start_tick(self) -> int:
        return self.center_tick - self.delta_t

    @property
    def end_tick(self) -> int:
        return self.center_tick + self.delta_t

    @property
    def bits(self) -> np.ndarray:
        lo = self.start_tick - self.stream.origin_tick
        return self.stream.bits[lo:lo + self.length]

    def to_dense(self) -> np.ndarray:
        return unpack_frames(self.bits, self.height, self.width)

    def __repr__(self) -> str:
        return (f"SpikeWindow(center_tick={self.center_tick}, "
                f"delta_t={self.delta_t})")


def slice_window(stream: SpikeStream, center_tick: int, delta_t: int) -> SpikeWindow:
    """Zero-copy window of 2*delta_t + 1 frames around an absolute tick."""
    return SpikeWindow(stream, center_tick, delta_t)


def contiguous_windows(stream: SpikeStream, num_windows: int,
                       window_len: int) -> list[SpikeWindow]:
    """Tile the head of a stream into contiguous odd-length windows.

    Window i covers ticks [origin + i*L, origin + (i+1)*L) with its center
    at origin + i*L + (L-1)/2.
    """
    if window_len % 2 != 1:
        raise ValueError("window_len must be odd")
    if num_windows * window_len > stream.length:
        raise ValueError(
            f"{num_windows} windows of {window_len} ticks exceed stream "
            f"length {stream.length}")
    delta = (window_len - 1) // 2
    return [
        SpikeWindow(stream, stream.origin_tick + i * window_len + delta, delta)
        for i in range(num_windows)
    ]


def spike_count_map(window: SpikeWindow) -> np.ndarray:
    """Per-pixel count of set bits in the window (H x W int32)."""
    return window.to_dense().sum(axis=0, dtype=np.int32)
