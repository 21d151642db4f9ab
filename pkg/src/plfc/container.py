"""The ``.plfc`` container: fixed big-endian header plus codec payload.

Layout (30 bytes, then payload)::

    magic               4s   b"PLFC"
    version             u8   1
    codec               u8   CodecId
    carved_rows         u32
    carved_cols         u32
    orig_rows           u32
    orig_cols           u32
    payload_bit_length  u64

The payload occupies ceil(payload_bit_length / 8) bytes; pad bits are zero.
LZW payloads are variable-width code streams (see :func:`pack_codes`); the
other codecs use their own byte-aligned formats.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .baselines import CodecId
from .bitio import check_padding
from .errors import (
    BadHeader,
    BadMagic,
    CodeTooWide,
    LengthMismatch,
    TruncatedPayload,
    UnsupportedVersion,
)
from .lzw import ALPHABET_SIZE, MAX_ENTRIES

MAGIC = b"PLFC"
VERSION = 1
HEADER = struct.Struct(">4sBBIIIIQ")
HEADER_SIZE = HEADER.size

MIN_WIDTH = 9
MAX_WIDTH = 16


@dataclass(frozen=True)
class ContainerHeader:
    codec: CodecId
    carved_rows: int
    carved_cols: int
    orig_rows: int
    orig_cols: int
    payload_bit_length: int

    @property
    def payload_bytes(self) -> int:
        return (self.payload_bit_length + 7) // 8

    @property
    def file_size(self) -> int:
        return HEADER_SIZE + self.payload_bytes

    def validate(self) -> None:
        if self.carved_rows < 1 or self.carved_cols < 1:
            raise BadHeader(f"carved dims {self.carved_rows}x{self.carved_cols} must be >= 1")
        if self.carved_rows != self.orig_rows:
            raise BadHeader(f"carved rows {self.carved_rows} != original rows {self.orig_rows}")
        if self.carved_cols > self.orig_cols:
            raise BadHeader(f"carved cols {self.carved_cols} > original cols {self.orig_cols}")
        for name in ("carved_rows", "carved_cols", "orig_rows", "orig_cols"):
            if getattr(self, name) >= 1 << 32:
                raise BadHeader(f"{name} does not fit in 32 bits")
        if not 0 <= self.payload_bit_length < 1 << 64:
            raise BadHeader("payload bit length does not fit in 64 bits")

    def pack(self) -> bytes:
        self.validate()
        return HEADER.pack(MAGIC, VERSION, int(self.codec), self.carved_rows,
                           self.carved_cols, self.orig_rows, self.orig_cols,
                           self.payload_bit_length)


def read_header(data) -> ContainerHeader:
    """Decode and validate the fixed header from the first bytes of ``data``."""
    if len(data) < HEADER_SIZE:
        if data[:len(MAGIC)] != MAGIC[:len(data)]:
            raise BadMagic("not a PLFC container")
        raise LengthMismatch(f"{len(data)} bytes is shorter than the {HEADER_SIZE}-byte header")
    magic, version, codec, cr, cc, orr, oc, nbits = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersion(f"container version {version} (supported: {VERSION})")
    try:
        codec = CodecId(codec)
    except ValueError:
        raise BadHeader(f"unknown codec id {codec}") from None
    header = ContainerHeader(codec, cr, cc, orr, oc, nbits)
    header.validate()
    return header


def write_container(header: ContainerHeader, payload) -> bytes:
    payload = bytes(payload)
    if len(payload) != header.payload_bytes:
        raise LengthMismatch(
            f"payload is {len(payload)} bytes, header implies {header.payload_bytes}"
        )
    check_padding(payload, header.payload_bit_length)
    return header.pack() + payload


def read_container(data) -> tuple[ContainerHeader, bytes]:
    data = bytes(data)
    header = read_header(data)
    payload = data[HEADER_SIZE:]
    if len(payload) != header.payload_bytes:
        raise LengthMismatch(
            f"payload is {len(payload)} bytes, header implies {header.payload_bytes}"
        )
    check_padding(payload, header.payload_bit_length)
    return header, payload


# --- LZW code packing ------------------------------------------------------

def code_width(index: int) -> int:
    """Bit width of the ``index``-th code in a stream.

    The width follows the decoder's dictionary size before it reads the code:
    256 entries for the first code, then one more per code already read,
    frozen at the dictionary cap.  It is the bit length of that size (so the
    deferred-entry code always fits), clamped to [9, 16].
    """
    size = min(ALPHABET_SIZE + max(index - 1, 0), MAX_ENTRIES)
    return min(MAX_WIDTH, max(MIN_WIDTH, size.bit_length()))


def _width_segments():
    """(first_index, end_index, width) runs of constant code width."""
    segs = []
    start = 0
    for width in range(MIN_WIDTH, MAX_WIDTH):
        end = (1 << width) - ALPHABET_SIZE + 1  # first index needing width + 1
        segs.append((start, end, width))
        start = end
    segs.append((start, None, MAX_WIDTH))
    return segs


_SEGMENTS = _width_segments()


def _check_codes(codes: np.ndarray) -> None:
    idx = np.arange(len(codes))
    limit = np.minimum(ALPHABET_SIZE + idx - 1, MAX_ENTRIES - 1)
    if len(codes):
        limit[0] = ALPHABET_SIZE - 1
    bad = np.flatnonzero((codes < 0) | (codes > limit))
    if len(bad):
        i = int(bad[0])
        raise CodeTooWide(
            f"code {int(codes[i])} at position {i} exceeds {int(limit[i])} "
            f"({code_width(i)}-bit slot)"
        )


def pack_codes(codes) -> tuple[bytes, int]:
    """Pack LZW codes MSB-first at growing widths; returns (payload, bit_length).

    Every code must be a valid CodeStream entry, i.e. at most the next
    unassigned dictionary index at its position.
    """
    codes = np.asarray(codes, dtype=np.int64).reshape(-1)
    _check_codes(codes)
    parts = []
    for start, end, width in _SEGMENTS:
        seg = codes[start:end]
        if not len(seg):
            break
        shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
        parts.append(((seg[:, None] >> shifts) & 1).astype(np.uint8).ravel())
    if not parts:
        return b"", 0
    bits = np.concatenate(parts)
    return np.packbits(bits).tobytes(), len(bits)


def unpack_codes(data, bit_length: int) -> list[int]:
    """Inverse of :func:`pack_codes`; consumes exactly ``bit_length`` bits."""
    data = bytes(data)
    check_padding(data, bit_length)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:bit_length]
    out = []
    pos = 0
    for start, end, width in _SEGMENTS:
        left = bit_length - pos
        if not left:
            break
        room = left // width if end is None else min(end - start, left // width)
        chunk = bits[pos:pos + room * width].reshape(room, width).astype(np.int64)
        out.append(chunk @ (1 << np.arange(width - 1, -1, -1, dtype=np.int64)))
        pos += room * width
        if end is None or room < end - start:
            if bit_length - pos:
                raise TruncatedPayload(
                    f"{bit_length - pos} bits left, next code needs {width}"
                )
            break
    return np.concatenate(out).tolist() if out else []
