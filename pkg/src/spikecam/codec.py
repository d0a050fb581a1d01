"""`.spk` on-disk codec for spike streams.

Layout (all integers little-endian):

    offset  size  field
    0       4     magic  b"SPKS"
    4       2     version (u16) = 1
    6       4     height (u32)
    10      4     width  (u32)
    14      4     length (u32, ticks)
    18      8     origin_tick (u64)
    26      -     length frames of ceil(height*width/8) bytes

Within each payload byte, bit k (LSB first) is row-major pixel index
8*j + k of that frame; trailing padding bits of the final byte are zero.
Frames are byte-aligned so windows can be sliced without bit shifting.
"""

from __future__ import annotations

import struct
from typing import BinaryIO

import numpy as np

from .stream import SpikeStream, frame_byte_count

MAGIC = b"SPKS"
VERSION = 1
_HEADER = struct.Struct("<4sHIIIQ")

_U32_MAX = 0xFFFFFFFF
_U64_MAX = 0xFFFFFFFFFFFFFFFF


class SpkError(ValueError):
    """Base class for every `.spk` codec failure."""


class SpkFormatError(SpkError):
    """Bad magic, unsupported version, or header fields out of range."""


class SpkLengthError(SpkError):
    """Header or payload shorter (or longer) than the header promises."""


class SpkCorruptionError(SpkError):
    """Payload violates the format invariants (nonzero padding bits)."""


def encode_stream(stream: SpikeStream, sink: BinaryIO) -> int:
    """Write a stream to a binary sink; returns bytes written."""
    if max(stream.height, stream.width, stream.length) > _U32_MAX:
        raise SpkFormatError("stream dimensions exceed u32 header fields")
    if stream.origin_tick > _U64_MAX:
        raise SpkFormatError("origin_tick exceeds u64 header field")
    header = _HEADER.pack(MAGIC, VERSION, stream.height, stream.width,
                          stream.length, stream.origin_tick)
    sink.write(header)
    payload = stream.bits.tobytes()
    sink.write(payload)
    return len(header) + len(payload)


def decode_stream(source: BinaryIO) -> SpikeStream:
    """Read a stream back; the exact inverse of `encode_stream`."""
    raw = source.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise SpkLengthError(f"truncated header: {len(raw)} < {_HEADER.size} bytes")
    magic, version, height, width, length, origin = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise SpkFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise SpkFormatError(f"unsupported version {version}")
    if height == 0 or width == 0 or length == 0:
        raise SpkFormatError("zero dimension in header")

    expected = length * frame_byte_count(height, width)
    payload = source.read()
    if len(payload) != expected:
        raise SpkLengthError(
            f"payload is {len(payload)} bytes, header promises {expected}")

    bits = np.frombuffer(payload, dtype=np.uint8).reshape(
        length, frame_byte_count(height, width)).copy()
    pad = frame_byte_count(height, width) * 8 - height * width
    if pad and np.any(bits[:, -1] & ~np.uint8((1 << (8 - pad)) - 1)):
        raise SpkCorruptionError("nonzero padding bits in payload")
    return SpikeStream(height, width, length, bits, origin)


def write_spk(stream: SpikeStream, path) -> int:
    with open(path, "wb") as fh:
        return encode_stream(stream, fh)


def read_spk(path) -> SpikeStream:
    with open(path, "rb") as fh:
        return decode_stream(fh)
