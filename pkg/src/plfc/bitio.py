"""MSB-first bit writer and reader."""

from __future__ import annotations

from .errors import TrailingGarbage, TruncatedPayload


class BitWriter:
    """Accumulates fixed-width unsigned fields, most significant bit first."""

    def __init__(self):
        self._out = bytearray()
        self._acc = 0
        self._nacc = 0
        self.position = 0

    def write(self, value: int, width: int) -> None:
        if width < 1 or value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        acc = (self._acc << width) | value
        n = self._nacc + width
        out = self._out
        while n >= 8:
            n -= 8
            out.append((acc >> n) & 0xFF)
        self._acc = acc & ((1 << n) - 1)
        self._nacc = n
        self.position += width

    def getvalue(self) -> bytes:
        """Buffer contents with the final partial byte zero-padded."""
        if self._nacc:
            return bytes(self._out) + bytes([(self._acc << (8 - self._nacc)) & 0xFF])
        return bytes(self._out)


class BitReader:
    def __init__(self, data, bit_length: int | None = None):
        self._data = bytes(data)
        self.bit_length = len(self._data) * 8 if bit_length is None else bit_length
        if (self.bit_length + 7) // 8 > len(self._data):
            raise TruncatedPayload(
                f"{len(self._data)} bytes cannot hold {self.bit_length} bits"
            )
        self.position = 0

    @property
    def remaining(self) -> int:
        return self.bit_length - self.position

    def read(self, width: int) -> int:
        if width > self.remaining:
            raise TruncatedPayload(
                f"need {width} bits at bit {self.position}, only {self.remaining} left"
            )
        pos = self.position
        first = pos >> 3
        last = (pos + width + 7) >> 3
        chunk = int.from_bytes(self._data[first:last], "big")
        shift = (last << 3) - pos - width
        self.position = pos + width
        return (chunk >> shift) & ((1 << width) - 1)


def check_padding(data, bit_length: int) -> None:
    """Reject byte-length mismatch and nonzero pad bits after ``bit_length``."""
    need = (bit_length + 7) // 8
    if len(data) < need:
        raise TruncatedPayload(f"{len(data)} bytes cannot hold {bit_length} bits")
    if len(data) > need:
        raise TrailingGarbage(f"{len(data) - need} bytes after {bit_length} payload bits")
    spare = need * 8 - bit_length
    if spare and data[-1] & ((1 << spare) - 1):
        raise TrailingGarbage("nonzero padding bits in final byte")
