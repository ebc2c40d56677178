"""PGM (portable graymap) codec.

Reads plain ``P2`` and raw ``P5`` streams with maxval up to 255; always
writes raw ``P5`` with maxval 255. Intensities travel through the rest of
the pipeline as float64 and are only quantized here, at write time:
rounded half-up and clamped to [0, 255].
"""

from __future__ import annotations

import os

import numpy as np

from .errors import PgmParseError
from .validation import as_image

_WHITESPACE = b" \t\n\r\x0b\x0c"


class _Tokenizer:
    """Walks PGM header tokens, skipping whitespace and # comments."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip_separators(self) -> None:
        while self.pos < len(self.data):
            c = self.data[self.pos : self.pos + 1]
            if c in (b"#",):
                eol = self.data.find(b"\n", self.pos)
                self.pos = len(self.data) if eol < 0 else eol + 1
            elif c in _WHITESPACE:
                self.pos += 1
            else:
                return

    def next_token(self, field: str) -> bytes:
        self._skip_separators()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos : self.pos + 1] not in _WHITESPACE:
            self.pos += 1
        if start == self.pos:
            raise PgmParseError("unexpected end of stream", field)
        return self.data[start : self.pos]

    def next_int(self, field: str) -> int:
        tok = self.next_token(field)
        try:
            return int(tok)
        except ValueError:
            raise PgmParseError(f"expected an integer, got {tok!r}", field) from None


def load_pgm(data: bytes) -> np.ndarray:
    """Parse a PGM byte stream into a float64 image.

    Accepts plain ("P2") and raw ("P5") graymaps with maxval <= 255.
    Raises PgmParseError naming the offending field on malformed input.
    """
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise PgmParseError("expected a byte sequence", "data")
    data = bytes(data)
    tok = _Tokenizer(data)
    magic = tok.next_token("magic")
    if magic not in (b"P2", b"P5"):
        raise PgmParseError(f"unsupported magic {magic!r} (want P2 or P5)", "magic")
    width = tok.next_int("width")
    height = tok.next_int("height")
    if width < 1:
        raise PgmParseError(f"must be >= 1, got {width}", "width")
    if height < 1:
        raise PgmParseError(f"must be >= 1, got {height}", "height")
    maxval = tok.next_int("maxval")
    if not 0 < maxval <= 255:
        raise PgmParseError(f"must be in [1, 255], got {maxval}", "maxval")

    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the payload
        payload = data[tok.pos + 1 :]
        if len(payload) != count:
            raise PgmParseError(
                f"expected {count} payload bytes, got {len(payload)}", "pixels"
            )
        values = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    else:
        try:
            tokens = data[tok.pos :].split()
            values = np.array([int(t) for t in tokens], dtype=np.float64)
        except ValueError:
            raise PgmParseError("non-integer sample in plain payload", "pixels") from None
        if values.size != count:
            raise PgmParseError(
                f"expected {count} samples, got {values.size}", "pixels"
            )
    if values.size and values.max() > maxval:
        raise PgmParseError("sample value exceeds maxval", "pixels")
    return values.reshape(height, width)


def save_pgm(image) -> bytes:
    """Serialize an image as raw "P5" bytes, maxval 255.

    Intensities are rounded half-up and clamped to [0, 255]; clamping is
    silent by design since fusion and deblurring legitimately overshoot.
    """
    img = as_image(image)
    quantized = np.clip(np.floor(img + 0.5), 0.0, 255.0).astype(np.uint8)
    h, w = quantized.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + quantized.tobytes()


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as f:
        return load_pgm(f.read())


def write_pgm(path: str | os.PathLike, image) -> None:
    with open(path, "wb") as f:
        f.write(save_pgm(image))
