import io
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikecam.codec import (MAGIC, SpkCorruptionError, SpkError,
                            SpkFormatError, SpkLengthError, decode_stream,
                            encode_stream, read_spk, write_spk)
from spikecam.stream import SpikeStream

HEADER_LEN = 26


def roundtrip(stream: SpikeStream) -> SpikeStream:
    buf = io.BytesIO()
    encode_stream(stream, buf)
    buf.seek(0)
    return decode_stream(buf)


def encode_bytes(stream: SpikeStream) -> bytes:
    buf = io.BytesIO()
    encode_stream(stream, buf)
    return buf.getvalue()


def test_single_pixel_stream_payload():
    dense = np.zeros((8, 1, 1), dtype=np.uint8)
    dense[[3, 7], 0, 0] = 1
    raw = encode_bytes(SpikeStream.from_dense(dense))
    assert len(raw) == HEADER_LEN + 8
    assert raw[:4] == MAGIC
    assert raw[HEADER_LEN:] == bytes([0, 0, 0, 1, 0, 0, 0, 1])


def test_header_fields_little_endian():
    dense = np.zeros((2, 3, 5), dtype=np.uint8)
    raw = encode_bytes(SpikeStream.from_dense(dense, origin_tick=7))
    magic, version, h, w, n, origin = struct.unpack("<4sHIIIQ", raw[:HEADER_LEN])
    assert (magic, version) == (MAGIC, 1)
    assert (h, w, n, origin) == (3, 5, 2, 7)


def test_all_zero_frame_is_single_zero_byte():
    raw = encode_bytes(SpikeStream.from_dense(np.zeros((1, 2, 2), np.uint8)))
    assert raw[HEADER_LEN:] == b"\x00"


def test_round_trip_random_streams():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        density = rng.uniform(0, 1)
        dense = (rng.random((41, 16, 16)) < density).astype(np.uint8)
        stream = SpikeStream.from_dense(dense, origin_tick=int(rng.integers(0, 999)))
        assert roundtrip(stream) == stream


def test_round_trip_through_files(tmp_path):
    rng = np.random.default_rng(5)
    dense = (rng.random((10, 7, 9)) < 0.3).astype(np.uint8)
    stream = SpikeStream.from_dense(dense, origin_tick=42)
    path = tmp_path / "s.spk"
    write_spk(stream, path)
    assert read_spk(path) == stream


def test_decode_example_stream():
    raw = encode_bytes(SpikeStream.from_dense(
        np.array([[[0]], [[0]], [[0]], [[1]], [[0]], [[0]], [[0]], [[1]]],
                 dtype=np.uint8)))
    stream = decode_stream(io.BytesIO(raw))
    assert (stream.height, stream.width, stream.length) == (1, 1, 8)
    assert list(np.flatnonzero(stream.to_dense()[:, 0, 0])) == [3, 7]


def test_truncated_payload_raises_length_error():
    raw = encode_bytes(SpikeStream.from_dense(np.ones((4, 4, 4), np.uint8)))
    with pytest.raises(SpkLengthError):
        decode_stream(io.BytesIO(raw[:-1]))


def test_trailing_garbage_raises_length_error():
    raw = encode_bytes(SpikeStream.from_dense(np.ones((2, 2, 2), np.uint8)))
    with pytest.raises(SpkLengthError):
        decode_stream(io.BytesIO(raw + b"\x00"))


def test_truncated_header_raises_length_error():
    with pytest.raises(SpkLengthError):
        decode_stream(io.BytesIO(b"SPKS\x01"))


def test_bad_magic_raises_format_error():
    raw = encode_bytes(SpikeStream.from_dense(np.zeros((1, 1, 1), np.uint8)))
    with pytest.raises(SpkFormatError):
        decode_stream(io.BytesIO(b"NOPE" + raw[4:]))


def test_bad_version_raises_format_error():
    raw = bytearray(encode_bytes(SpikeStream.from_dense(np.zeros((1, 1, 1), np.uint8))))
    raw[4:6] = struct.pack("<H", 9)
    with pytest.raises(SpkFormatError):
        decode_stream(io.BytesIO(bytes(raw)))


def test_zero_dimension_raises_format_error():
    header = struct.pack("<4sHIIIQ", MAGIC, 1, 0, 4, 4, 0)
    with pytest.raises(SpkFormatError):
        decode_stream(io.BytesIO(header))


def test_nonzero_padding_raises_corruption_error():
    # 1x3 frame uses 3 bits of its byte; flip a padding bit
    header = struct.pack("<4sHIIIQ", MAGIC, 1, 1, 3, 1, 0)
    with pytest.raises(SpkCorruptionError):
        decode_stream(io.BytesIO(header + b"\x80"))


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=80))
def test_fuzzed_bytes_never_crash(raw):
    try:
        decode_stream(io.BytesIO(raw))
    except SpkError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1),
       st.integers(0, 2**32 - 1), st.integers(0, 2**64 - 1), st.binary(max_size=64))
def test_fuzzed_headers_never_crash(h, w, n, origin, payload):
    raw = struct.pack("<4sHIIIQ", MAGIC, 1, h, w, n, origin) + payload
    try:
        decode_stream(io.BytesIO(raw))
    except SpkError:
        pass
