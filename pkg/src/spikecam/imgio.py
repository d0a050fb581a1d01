"""8-bit grayscale image IO: binary PGM natively, PNG via Pillow."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def write_gray(image_u8: np.ndarray, path) -> None:
    """Write a uint8 H x W image; format chosen by extension."""
    image_u8 = np.ascontiguousarray(image_u8, dtype=np.uint8)
    if image_u8.ndim != 2:
        raise ValueError("expected a 2-D grayscale image")
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        h, w = image_u8.shape
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(image_u8.tobytes())
    elif path.suffix.lower() == ".png":
        from PIL import Image

        Image.fromarray(image_u8, mode="L").save(path)
    else:
        raise ValueError(f"unsupported image extension: {path.suffix!r}")


def read_gray(path) -> np.ndarray:
    """Read an 8-bit grayscale image back as uint8 H x W."""
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        with open(path, "rb") as fh:
            data = fh.read()
        fields: list[bytes] = []
        pos = 0
        while len(fields) < 4:
            while pos < len(data) and data[pos:pos + 1].isspace():
                pos += 1
            if data[pos:pos + 1] == b"#":  # comment line
                pos = data.index(b"\n", pos) + 1
                continue
            start = pos
            while pos < len(data) and not data[pos:pos + 1].isspace():
                pos += 1
            fields.append(data[start:pos])
        if fields[0] != b"P5":
            raise ValueError(f"not a binary PGM: {path}")
        w, h, maxval = (int(f) for f in fields[1:])
        if maxval != 255:
            raise ValueError("only 8-bit PGM is supported")
        pos += 1  # single whitespace after maxval
        pixels = np.frombuffer(data, dtype=np.uint8, offset=pos, count=h * w)
        return pixels.reshape(h, w).copy()
    if path.suffix.lower() == ".png":
        from PIL import Image

        with Image.open(path) as img:
            return np.asarray(img.convert("L"), dtype=np.uint8)
    raise ValueError(f"unsupported image extension: {path.suffix!r}")
