"""Grayscale pixel grids and their CSV text form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadPixel, DimensionMismatch, EmptyInput, RaggedRows


@dataclass(frozen=True)
class GrayImage:
    """A rows x cols grid of 8-bit luminance values stored row-major, one byte per pixel."""

    rows: int
    cols: int
    pixels: bytes

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionMismatch(f"image dims must be >= 1, got {self.rows}x{self.cols}")
        if not isinstance(self.pixels, bytes):
            object.__setattr__(self, "pixels", bytes(self.pixels))
        if len(self.pixels) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.pixels)} pixels for a {self.rows}x{self.cols} image"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.rows, self.cols).copy()

    @classmethod
    def from_array(cls, arr) -> GrayImage:
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D array, got {arr.ndim}-D")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise BadPixel(0, 0, "array values outside [0, 255]")
        rows, cols = arr.shape
        return cls(rows, cols, np.ascontiguousarray(arr, dtype=np.uint8).tobytes())

    @classmethod
    def from_rows(cls, rows) -> GrayImage:
        return cls.from_array(np.array(rows, dtype=np.int64))

    def row(self, r: int) -> bytes:
        return self.pixels[r * self.cols:(r + 1) * self.cols]


def parse_csv(text) -> GrayImage:
    """Parse comma-separated decimal pixel rows.

    Blank lines are skipped and whitespace around fields is tolerated.  Line
    and column numbers in errors are 1-based and count every physical line.
    """
    if isinstance(text, (bytes, bytearray, memoryview)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            raise BadPixel(0, 0, "non-ASCII input") from exc

    rows = []
    cols = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split(",")
        if cols is None:
            cols = len(fields)
        elif len(fields) != cols:
            raise RaggedRows(lineno, cols, len(fields))
        row = bytearray(len(fields))
        for colno, field in enumerate(fields, start=1):
            f = field.strip()
            # int() would accept "+5", "1_0" and non-ASCII digits
            if not f.isdigit() or not f.isascii():
                raise BadPixel(lineno, colno, field)
            v = int(f)
            if v > 255:
                raise BadPixel(lineno, colno, field)
            row[colno - 1] = v
        rows.append(bytes(row))

    if not rows:
        raise EmptyInput("no non-empty lines in CSV input")
    return GrayImage(len(rows), cols, b"".join(rows))


def to_csv(img: GrayImage) -> bytes:
    lines = [",".join(map(str, img.row(r))) + "\n" for r in range(img.rows)]
    return "".join(lines).encode("ascii")


def flatten(img: GrayImage) -> bytes:
    return img.pixels


def unflatten(data, rows: int, cols: int) -> GrayImage:
    data = bytes(data)
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise DimensionMismatch(f"{len(data)} bytes cannot fill a {rows}x{cols} image")
    return GrayImage(rows, cols, data)
