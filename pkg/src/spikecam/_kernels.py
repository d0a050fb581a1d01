"""Hot inner loops, each in a numba and a pure-numpy flavor.

All kernel pairs are bit-identical by construction: the accumulator math
is integer-only (currents are pre-quantized to int64 accumulation quanta)
and the window scans return the same int32 index maps. Dispatch follows
`spikecam.backend.active_backend()`.
"""

from __future__ import annotations

import numpy as np

from .backend import HAS_NUMBA, active_backend

if HAS_NUMBA:
    from numba import njit
else:  # pragma: no cover - numba is a declared dependency

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


# ---------------------------------------------------------------------------
# integrate-and-fire accumulation
#
# Per tick: acc += current; if acc >= threshold emit one spike and reduce
# acc mod threshold (an overshoot past 2*threshold still emits a single
# spike, the readout is binary). acc is carried across calls so streams
# can be simulated in tick chunks.
#
# Currents are integer quanta of 2**-32 accumulation units; the fused
# photon kernel performs the gain scaling and quantization per element
# with exactly the same float64 operations (multiply, then round-half-
# even of value * 2**32) as the vectorized fallback, so both backends
# stay bit-identical.
# ---------------------------------------------------------------------------

QUANTUM_SCALE = 2.0 ** 32


@njit(cache=True)
def _accumulate_fire_numba(currents_q, acc, threshold_q, spikes):
    n_ticks, height, width = currents_q.shape
    for n in range(n_ticks):
        for y in range(height):
            for x in range(width):
                a = acc[y, x] + currents_q[n, y, x]
                if a >= threshold_q:
                    spikes[n, y, x] = 1
                    a = a % threshold_q
                acc[y, x] = a


def _accumulate_fire_numpy(currents_q, acc, threshold_q, spikes):
    for n in range(currents_q.shape[0]):
        acc += currents_q[n]
        fired = acc >= threshold_q
        spikes[n][fired] = 1
        acc[fired] %= threshold_q


def accumulate_fire(currents_q: np.ndarray, threshold_q: int,
                    acc: np.ndarray) -> np.ndarray:
    """Run the integrate-and-fire recurrence over a chunk of ticks.

    `currents_q` is int64 of shape (ticks, H, W) in accumulation quanta;
    `acc` (int64, H x W) is updated in place and carries state to the next
    chunk. Returns the uint8 spike occupancy for the chunk.
    """
    spikes = np.zeros(currents_q.shape, dtype=np.uint8)
    if active_backend() == "numba":
        _accumulate_fire_numba(currents_q, acc, np.int64(threshold_q), spikes)
    else:
        _accumulate_fire_numpy(currents_q, acc, np.int64(threshold_q), spikes)
    return spikes


@njit(cache=True)
def _integrate_photon_numba(frames, gain, dark_q, threshold_q, acc, spikes):
    n_ticks, height, width = frames.shape
    for n in range(n_ticks):
        for y in range(height):
            for x in range(width):
                photon = np.float64(frames[n, y, x]) * gain
                q = np.int64(np.round(photon * QUANTUM_SCALE)) + dark_q[y, x]
                a = acc[y, x] + q
                if a >= threshold_q:
                    spikes[n, y, x] = 1
                    a = a % threshold_q
                acc[y, x] = a


def integrate_photon(frames: np.ndarray, gain: float, dark_q: np.ndarray,
                     threshold_q: int, acc: np.ndarray) -> np.ndarray:
    """Noise-free simulation chunk fused with quantization.

    frames: (ticks, H, W) float32 intensities in [0, 1]; dark_q: per-pixel
    dark current in quanta. Semantics match quantizing gain * frames and
    feeding `accumulate_fire`.
    """
    spikes = np.zeros(frames.shape, dtype=np.uint8)
    if active_backend() == "numba":
        _integrate_photon_numba(frames, np.float64(gain), dark_q,
                                np.int64(threshold_q), acc, spikes)
    else:
        photon = gain * frames.astype(np.float64)
        currents_q = np.round(photon * QUANTUM_SCALE).astype(np.int64) + dark_q
        _accumulate_fire_numpy(currents_q, acc, np.int64(threshold_q), spikes)
    return spikes


# ---------------------------------------------------------------------------
# window spike scans
#
# For every pixel of an unpacked window (L, H, W):
#   prev_rel  - latest spike index <= center_rel      (-1 if none)
#   next_rel  - earliest spike index > center_rel     (-1 if none)
#   first_rel - earliest spike index in the window    (-1 if none)
#   last_rel  - latest spike index in the window      (-1 if none)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _scan_window_numba(frames, center_rel, prev_rel, next_rel, first_rel, last_rel):
    length, height, width = frames.shape
    for y in range(height):
        for x in range(width):
            prev = -1
            nxt = -1
            first = -1
            last = -1
            for n in range(length):
                if frames[n, y, x] != 0:
                    if first < 0:
                        first = n
                    last = n
                    if n <= center_rel:
                        prev = n
                    elif nxt < 0:
                        nxt = n
            prev_rel[y, x] = prev
            next_rel[y, x] = nxt
            first_rel[y, x] = first
            last_rel[y, x] = last


def _scan_window_numpy(frames, center_rel, prev_rel, next_rel, first_rel, last_rel):
    occ = frames != 0
    length = occ.shape[0]

    head = occ[: center_rel + 1]
    found = head.any(axis=0)
    latest = center_rel - head[::-1].argmax(axis=0)
    prev_rel[...] = np.where(found, latest, -1)

    tail = occ[center_rel + 1 :]
    if tail.shape[0]:
        found = tail.any(axis=0)
        earliest = center_rel + 1 + tail.argmax(axis=0)
        next_rel[...] = np.where(found, earliest, -1)
    else:
        next_rel[...] = -1

    found = occ.any(axis=0)
    first_rel[...] = np.where(found, occ.argmax(axis=0), -1)
    last_rel[...] = np.where(found, length - 1 - occ[::-1].argmax(axis=0), -1)


def scan_window(frames: np.ndarray, center_rel: int):
    """Per-pixel spike index maps for an unpacked (L, H, W) window."""
    _, height, width = frames.shape
    maps = tuple(np.empty((height, width), dtype=np.int32) for _ in range(4))
    if active_backend() == "numba":
        _scan_window_numba(frames, center_rel, *maps)
    else:
        _scan_window_numpy(frames, center_rel, *maps)
    return maps
