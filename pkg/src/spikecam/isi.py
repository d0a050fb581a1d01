"""Local and global inter-spike-interval transforms.

The local transform (LISI) brackets each window's center tick with the
nearest spikes inside that window. The global transform (GISI) completes
intervals across window boundaries using release-time state carried
through the sequence: a forward pass carries the latest past spike per
pixel, a backward pass the earliest future spike. Sides that stay
unbounded are censored and substituted with a sentinel one tick outside
the relevant extent (the window for LISI, the whole concatenated stream
for GISI), then clamped to the transform's cap.

Convention at the center tick: a spike exactly on the center counts as
the past-side spike; the future side starts strictly after the center.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import scan_window
from .stream import SpikeWindow


@dataclass
class IsiMap:
    """Per-pixel interval map with censoring flags.

    intervals: ticks between the resolved bounding spikes, in [1, cap].
    censored_prev / censored_next: no bounding spike was found on that
        side within the transform's extent.
    prev_tick / next_tick: absolute tick of the resolved bounding spike,
        -1 where that side is censored.
    cap: clamp applied to intervals (window length for LISI, total
        stream extent for GISI).
    """

    intervals: np.ndarray
    censored_prev: np.ndarray
    censored_next: np.ndarray
    prev_tick: np.ndarray
    next_tick: np.ndarray
    cap: int


@dataclass
class ReleaseTimeState:
    """Carried release time of the bounding spike, one pixel each.

    Exactly two H x W maps: the absolute tick of the carried spike and a
    validity flag (whether any spike has been seen in the carried
    direction). This pair is the entire recurrent state per direction.
    """

    time: np.ndarray
    valid: np.ndarray

    @classmethod
    def empty(cls, height: int, width: int) -> "ReleaseTimeState":
        return cls(time=np.zeros((height, width), dtype=np.int64),
                   valid=np.zeros((height, width), dtype=bool))


def lisi_transform(window: SpikeWindow) -> IsiMap:
    """Local inter-spike interval around the window center."""
    prev_rel, next_rel, _, _ = scan_window(window.to_dense(), window.delta_t)
    start, end, cap = window.start_tick, window.end_tick, window.length

    found_prev = prev_rel >= 0
    found_next = next_rel >= 0
    prev_abs = np.where(found_prev, start + prev_rel.astype(np.int64), start - 1)
    next_abs = np.where(found_next, start + next_rel.astype(np.int64), end + 1)
    intervals = np.clip(next_abs - prev_abs, 1, cap).astype(np.int32)
    return IsiMap(intervals=intervals,
                  censored_prev=~found_prev,
                  censored_next=~found_next,
                  prev_tick=np.where(found_prev, prev_abs, -1),
                  next_tick=np.where(found_next, next_abs, -1),
                  cap=cap)


def release_state_update(window: SpikeWindow, state: ReleaseTimeState,
                         direction: str) -> ReleaseTimeState:
    """Fold one window into the carried release-time state.

    Forward keeps the latest spike tick seen so far, backward the
    earliest; pixels without an in-window spike keep their previous
    state.
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    _, _, first_rel, last_rel = scan_window(window.to_dense(), window.delta_t)
    rel = last_rel if direction == "forward" else first_rel
    found = rel >= 0
    time = np.where(found, window.start_tick + rel.astype(np.int64), state.time)
    return ReleaseTimeState(time=time, valid=state.valid | found)


def _check_state(state: ReleaseTimeState, window: SpikeWindow, direction: str):
    if direction == "forward":
        bad = state.valid & (state.time > window.start_tick)
    else:
        bad = state.valid & (state.time < window.end_tick)
    if bad.any():
        raise ValueError(f"{direction} release state inconsistent with window "
                         f"[{window.start_tick}, {window.end_tick}]")


def gisi_update(lisi: IsiMap, window: SpikeWindow, fwd: ReleaseTimeState,
                bwd: ReleaseTimeState, global_start: int | None = None,
                global_end: int | None = None) -> IsiMap:
    """Complete a local interval map with carried release times.

    Sides unresolved within the window fall back to the carried spike of
    the matching direction; sides unresolved everywhere stay censored
    with the global-extent sentinel. Wherever the local map was already
    uncensored the result equals it.
    """
    _check_state(fwd, window, "forward")
    _check_state(bwd, window, "backward")
    if global_start is None:
        global_start = window.stream.origin_tick
    if global_end is None:
        global_end = window.stream.end_tick
    cap = global_end - global_start + 1

    in_prev = ~lisi.censored_prev
    in_next = ~lisi.censored_next
    prev_abs = np.where(in_prev, lisi.prev_tick,
                        np.where(fwd.valid, fwd.time, global_start - 1))
    next_abs = np.where(in_next, lisi.next_tick,
                        np.where(bwd.valid, bwd.time, global_end + 1))
    censored_prev = ~in_prev & ~fwd.valid
    censored_next = ~in_next & ~bwd.valid
    intervals = np.clip(next_abs - prev_abs, 1, cap).astype(np.int32)
    return IsiMap(intervals=intervals,
                  censored_prev=censored_prev,
                  censored_next=censored_next,
                  prev_tick=np.where(censored_prev, -1, prev_abs),
                  next_tick=np.where(censored_next, -1, next_abs),
                  cap=cap)


@dataclass
class GisiSweepResult:
    """Per-window interval maps from one bidirectional sweep."""

    lisi: list[IsiMap]
    gisi_forward: list[IsiMap]
    gisi_backward: list[IsiMap]
    gisi_combined: list[IsiMap]
    final_forward_state: ReleaseTimeState
    final_backward_state: ReleaseTimeState


def gisi_sweep(windows: list[SpikeWindow]) -> GisiSweepResult:
    """Bidirectional release-time sweep over contiguous windows.

    One backward pass collects per-window backward snapshots, one forward
    pass then emits, for every window: the local map, the forward-only
    and backward-only completions, and the combined GISI. The carried
    state per direction is a single ReleaseTimeState.

    Extent scoping: the combined map completes within the whole swept
    extent; a single-direction map completes within the part of the
    stream its pass has covered (stream start up to the window's end for
    forward, window start to stream end for backward), so its values
    never depend on the other direction's data.
    """
    if not windows:
        raise ValueError("gisi_sweep needs at least one window")
    first = windows[0]
    for w in windows:
        if (w.height, w.width, w.length) != (first.height, first.width, first.length):
            raise ValueError("windows must share dimensions and length")
    for prev, cur in zip(windows, windows[1:]):
        if cur.start_tick != prev.end_tick + 1:
            raise ValueError(
                f"windows not contiguous: [{prev.start_tick}, {prev.end_tick}] "
                f"then [{cur.start_tick}, {cur.end_tick}]")

    height, width = first.height, first.width
    global_start = windows[0].start_tick
    global_end = windows[-1].end_tick
    no_state = ReleaseTimeState.empty(height, width)

    bwd = ReleaseTimeState.empty(height, width)
    bwd_snapshots: list[ReleaseTimeState] = [None] * len(windows)  # type: ignore[list-item]
    for i in range(len(windows) - 1, -1, -1):
        bwd_snapshots[i] = bwd
        bwd = release_state_update(windows[i], bwd, "backward")

    result = GisiSweepResult([], [], [], [], no_state, bwd)
    fwd = ReleaseTimeState.empty(height, width)
    for i, window in enumerate(windows):
        lisi = lisi_transform(window)
        result.lisi.append(lisi)
        # each single-direction map is scoped to the extent its pass has
        # seen, so it is invariant under any change beyond that extent
        result.gisi_forward.append(
            gisi_update(lisi, window, fwd, no_state, global_start,
                        window.end_tick))
        result.gisi_backward.append(
            gisi_update(lisi, window, no_state, bwd_snapshots[i],
                        window.start_tick, global_end))
        result.gisi_combined.append(
            gisi_update(lisi, window, fwd, bwd_snapshots[i], global_start,
                        global_end))
        fwd = release_state_update(window, fwd, "forward")
    result.final_forward_state = fwd
    return result
