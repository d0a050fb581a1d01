"""`.ten` tensor files: a minimal cross-language exchange format.

Layout: magic b"TENS", rank (u8), rank u32 little-endian dims, then the
payload as row-major float32 little-endian. Deliberately trivial so any
consumer can parse it in a dozen lines.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"TENS"


class TenFormatError(ValueError):
    pass


def write_ten(array: np.ndarray, path) -> int:
    array = np.ascontiguousarray(array, dtype=np.float32)
    if array.ndim == 0 or array.ndim > 255:
        raise TenFormatError(f"unsupported rank {array.ndim}")
    header = MAGIC + struct.pack("<B", array.ndim)
    header += struct.pack(f"<{array.ndim}I", *array.shape)
    payload = array.astype("<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    return len(header) + len(payload)


def read_ten(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 5 or raw[:4] != MAGIC:
        raise TenFormatError(f"not a .ten file: {path}")
    rank = raw[4]
    head_end = 5 + 4 * rank
    if len(raw) < head_end:
        raise TenFormatError("truncated dimension header")
    dims = struct.unpack(f"<{rank}I", raw[5:head_end])
    count = int(np.prod(dims, dtype=np.int64))
    expected = head_end + 4 * count
    if len(raw) != expected:
        raise TenFormatError(
            f"payload is {len(raw) - head_end} bytes, expected {4 * count}")
    data = np.frombuffer(raw, dtype="<f4", offset=head_end, count=count)
    return data.reshape(dims).astype(np.float32)
