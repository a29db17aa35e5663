"""8-bit grayscale rasters and the netpbm PGM codec (P2 ASCII, P5 binary)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

SynthKind = Literal["gradient", "checker", "smooth-random"]
SYNTH_KINDS: tuple[str, ...] = ("gradient", "checker", "smooth-random")

_WHITESPACE_SET = {bytes([b]) for b in b" \t\n\r\v\f"}


class PgmError(ValueError):
    """Raised when a byte stream cannot be decoded as an 8-bit PGM."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Row-major 8-bit grayscale image.

    ``pixels`` is a read-only ``uint8`` array of shape ``(height, width)``;
    the flat index of pixel ``(r, c)`` is ``r * width + c``.
    """

    pixels: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D raster, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"intensities must be integers, got dtype {arr.dtype}")
            if arr.min() < 0 or arr.max() > 255:
                raise ValueError("intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.array(arr, dtype=np.uint8, order="C", copy=True)
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_list(cls, width: int, height: int, values) -> "GrayImage":
        values = list(values)
        if len(values) != width * height:
            raise ValueError(f"expected {width * height} intensities, got {len(values)}")
        return cls(np.array(values, dtype=np.int64).reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def tolist(self) -> list[int]:
        return self.pixels.ravel().tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __hash__(self) -> int:
        return hash((self.shape, self.pixels.tobytes()))

    def __repr__(self) -> str:
        return f"GrayImage(width={self.width}, height={self.height})"


class _HeaderReader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def skip_space_and_comments(self) -> None:
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos : self.pos + 1]
            if ch in _WHITESPACE_SET:
                self.pos += 1
            elif ch == b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = len(data) if nl < 0 else nl + 1
            else:
                break

    def token(self) -> bytes:
        self.skip_space_and_comments()
        start = self.pos
        data = self.data
        while self.pos < len(data) and data[self.pos : self.pos + 1] not in _WHITESPACE_SET \
                and data[self.pos : self.pos + 1] != b"#":
            self.pos += 1
        if start == self.pos:
            raise PgmError("malformed header: unexpected end of stream")
        return data[start : self.pos]

    def integer(self, what: str) -> int:
        tok = self.token()
        if not tok.isdigit():
            raise PgmError(f"malformed header: bad {what} {tok!r}")
        return int(tok)


def read_pgm(data: bytes) -> GrayImage:
    """Decode a P2 or P5 PGM byte stream with maxval <= 255.

    Intensities are used as stored; a maxval below 255 does not rescale them.
    """
    data = bytes(data)
    if len(data) < 2:
        raise PgmError("not a PGM stream: missing magic")
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"not a PGM stream: magic {magic!r}")
    hdr = _HeaderReader(data)
    hdr.pos = 2
    if hdr.pos < len(data) and data[hdr.pos : hdr.pos + 1] not in _WHITESPACE_SET \
            and data[hdr.pos : hdr.pos + 1] != b"#":
        raise PgmError(f"not a PGM stream: magic {data[:3]!r}")
    width = hdr.integer("width")
    height = hdr.integer("height")
    maxval = hdr.integer("maxval")
    if width < 1 or height < 1:
        raise PgmError(f"malformed header: zero dimension {width}x{height}")
    if maxval < 1:
        raise PgmError("malformed header: maxval must be >= 1")
    if maxval > 255:
        raise PgmError("16-bit PGM unsupported")
    n = width * height

    if magic == b"P5":
        # exactly one whitespace octet separates maxval from the raster
        if hdr.pos >= len(data) or data[hdr.pos : hdr.pos + 1] not in _WHITESPACE_SET:
            raise PgmError("malformed header: missing whitespace after maxval")
        body = data[hdr.pos + 1 : hdr.pos + 1 + n]
        if len(body) < n:
            raise PgmError(f"truncated pixel data: expected {n} octets, got {len(body)}")
        raster = np.frombuffer(body, dtype=np.uint8)
    else:
        tokens = data[hdr.pos :].split()
        if len(tokens) < n:
            raise PgmError(f"truncated pixel data: expected {n} values, got {len(tokens)}")
        try:
            raster = np.array([int(t) for t in tokens[:n]], dtype=np.int64)
        except ValueError as exc:
            raise PgmError(f"malformed pixel data: {exc}") from None
        if raster.min() < 0:
            raise PgmError("malformed pixel data: negative intensity")

    if raster.max() > maxval:
        raise PgmError(f"malformed pixel data: intensity exceeds maxval {maxval}")
    return GrayImage(raster.reshape(height, width))


def write_pgm(img: GrayImage, ascii: bool = False) -> bytes:
    """Encode as P5 (default) or P2 with maxval 255."""
    magic = b"P2" if ascii else b"P5"
    header = magic + b"\n" + f"{img.width} {img.height}".encode() + b"\n255\n"
    if not ascii:
        return header + img.pixels.tobytes()
    rows = [" ".join(str(v) for v in row) for row in img.pixels.tolist()]
    return header + ("\n".join(rows) + "\n").encode("ascii")


def load_pgm(path) -> GrayImage:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(path, img: GrayImage, ascii: bool = False) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img, ascii=ascii))


def synth_image(width: int, height: int, seed: int = 0, kind: SynthKind = "smooth-random") -> GrayImage:
    """Deterministic synthetic test raster.

    gradient: column ramp ``floor(255 * c / (width - 1))`` (all zero when width is 1).
    checker: 8x8 blocks alternating 64 / 192, 64 at the top-left.
    smooth-random: uniform random intensities from ``numpy.random.default_rng(seed)``
    smoothed by one 3x3 mean over the in-bounds cells, rounded half up.
    """
    if width < 1 or height < 1:
        raise ValueError(f"zero dimension: {width}x{height}")
    if kind == "gradient":
        if width == 1:
            row = np.zeros(1, dtype=np.int64)
        else:
            row = (255 * np.arange(width, dtype=np.int64)) // (width - 1)
        return GrayImage(np.broadcast_to(row, (height, width)))
    if kind == "checker":
        rr, cc = np.indices((height, width))
        return GrayImage(np.where(((rr // 8) + (cc // 8)) % 2 == 0, 64, 192))
    if kind == "smooth-random":
        rng = np.random.default_rng(seed)
        field = rng.integers(0, 256, size=(height, width), dtype=np.int64)
        padded = np.pad(field, 1)
        ones = np.pad(np.ones_like(field), 1)
        total = np.zeros_like(field)
        count = np.zeros_like(field)
        for dr in range(3):
            for dc in range(3):
                total += padded[dr : dr + height, dc : dc + width]
                count += ones[dr : dr + height, dc : dc + width]
        # integer half-up rounding of total / count
        smooth = (2 * total + count) // (2 * count)
        return GrayImage(np.clip(smooth, 0, 255))
    raise ValueError(f"unknown synthetic kind {kind!r}; expected one of {SYNTH_KINDS}")
