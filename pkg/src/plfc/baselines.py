"""Baseline lossless coders: store, canonical Huffman and LZ77.

These exist so the LZW stage has something to be compared against; all of
them work on plain byte sequences and have byte-aligned wire formats.
"""

from __future__ import annotations

import enum
import heapq
import struct
from collections import Counter
from typing import NamedTuple

from .errors import BadLengthTable, BadOffset, BadToken, CodecError, TrailingBits, TruncatedBits


class CodecId(enum.IntEnum):
    STORE = 0
    LZW = 1
    HUFFMAN = 2
    LZ77 = 3

    @classmethod
    def from_name(cls, name: str) -> CodecId:
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown codec {name!r}") from None

    @property
    def label(self) -> str:
        return self.name.lower()


# --- store -----------------------------------------------------------------

def store_encode(data) -> bytes:
    return bytes(data)


def store_decode(data) -> bytes:
    return bytes(data)


# --- Huffman ---------------------------------------------------------------

class HuffmanPayload(NamedTuple):
    lengths: bytes  # 256 entries, 0 = symbol absent
    packed: bytes
    bit_length: int

    def to_bytes(self) -> bytes:
        return self.lengths + self.packed


def huffman_code_lengths(freqs) -> list[int]:
    """Code length per byte symbol for the given frequencies (mapping or 256-list).

    The two lowest-weight nodes are merged first.  Equal weights are ordered by
    symbol for leaves and by creation order for internal nodes, internal nodes
    sorting after all leaves.
    """
    if not isinstance(freqs, dict):
        freqs = dict(enumerate(freqs))
    lengths = [0] * 256
    heap = [(f, s, s) for s, f in freqs.items() if f > 0]
    if not heap:
        return lengths
    if len(heap) == 1:
        lengths[heap[0][1]] = 1
        return lengths

    heapq.heapify(heap)
    order = 256
    while len(heap) > 1:
        fa, _, a = heapq.heappop(heap)
        fb, _, b = heapq.heappop(heap)
        heapq.heappush(heap, (fa + fb, order, (a, b)))
        order += 1

    stack = [(heap[0][2], 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, tuple):
            stack.append((node[0], depth + 1))
            stack.append((node[1], depth + 1))
        else:
            lengths[node] = depth
    return lengths


def canonical_codes(lengths) -> dict[int, tuple[int, int]]:
    """Map symbol -> (code, length); codes of equal length ascend with the symbol."""
    codes = {}
    code = 0
    prev_len = 0
    for length, sym in sorted((l, s) for s, l in enumerate(lengths) if l):
        code <<= length - prev_len
        codes[sym] = (code, length)
        code += 1
        prev_len = length
    return codes


def kraft_sum_scaled(lengths) -> tuple[int, int]:
    """Return (numerator, 2**maxlen) of the Kraft sum, in exact integers."""
    used = [l for l in lengths if l]
    if not used:
        return 0, 1
    top = max(used)
    return sum(1 << (top - l) for l in used), 1 << top


def _check_table(lengths) -> None:
    if len(lengths) != 256:
        raise BadLengthTable(f"length table has {len(lengths)} entries, expected 256")
    num, den = kraft_sum_scaled(lengths)
    if num > den:
        raise BadLengthTable(f"Kraft sum {num}/{den} exceeds 1")


def huffman_encode(data) -> HuffmanPayload:
    data = bytes(data)
    lengths = huffman_code_lengths(Counter(data))
    table = bytes(lengths)
    if not data:
        return HuffmanPayload(table, b"", 0)
    strings = [""] * 256
    for sym, (code, length) in canonical_codes(lengths).items():
        strings[sym] = format(code, f"0{length}b")
    bits = "".join([strings[b] for b in data])
    nbits = len(bits)
    pad = -nbits % 8
    packed = int(bits + "0" * pad, 2).to_bytes((nbits + pad) // 8, "big")
    return HuffmanPayload(table, packed, nbits)


_PEEK_BITS = 11


def huffman_decode(lengths, packed, count: int) -> bytes:
    """Decode ``count`` symbols; the padding after the last code must be zero."""
    lengths = bytes(lengths)
    _check_table(lengths)
    packed = bytes(packed)
    if count == 0:
        if packed:
            raise TrailingBits(f"{len(packed)} payload bytes for zero symbols")
        return b""
    if not any(lengths):
        raise BadLengthTable("empty length table for a non-empty payload")

    nbits = len(packed) * 8
    maxlen = max(lengths)
    peek = min(maxlen, _PEEK_BITS)
    bits = format(int.from_bytes(packed, "big"), f"0{nbits}b") if packed else ""
    bits += "0" * maxlen  # lets slices near the end stay full width

    # codes no longer than ``peek`` resolve with one table lookup
    fast = [None] * (1 << peek)
    for sym, (code, length) in canonical_codes(lengths).items():
        if length <= peek:
            base = code << (peek - length)
            for j in range(base, base + (1 << (peek - length))):
                fast[j] = (sym, length)
    per_len = [0] * (maxlen + 1)
    for l in lengths:
        if l:
            per_len[l] += 1
    symbols = [s for _, s in sorted((l, s) for s, l in enumerate(lengths) if l)]

    out = bytearray(count)
    pos = 0
    for i in range(count):
        hit = fast[int(bits[pos:pos + peek], 2)]
        if hit is not None:
            out[i], length = hit
            pos += length
        else:
            # canonical walk, one bit per step
            code = first = index = 0
            for length in range(1, maxlen + 1):
                code |= bits[pos + length - 1] == "1"
                n = per_len[length]
                if code - first < n:
                    out[i] = symbols[index + code - first]
                    break
                index += n
                first = (first + n) << 1
                code <<= 1
            else:
                raise CodecError(f"bit pattern at bit {pos} matches no code")
            pos += length
        if pos > nbits:
            raise TruncatedBits(f"bitstream ended inside symbol {i} of {count}")
    if nbits - pos >= 8 or "1" in bits[pos:nbits]:
        raise TrailingBits(f"{nbits - pos} unused bits after {count} symbols")
    return bytes(out)


# --- LZ77 ------------------------------------------------------------------

DEFAULT_WINDOW = 4096
DEFAULT_LOOKAHEAD = 18
_TOKEN = struct.Struct(">HBB")


class Lz77Token(NamedTuple):
    offset: int
    length: int
    next: int


def _longest_match(data: bytes, pos: int, window: int, max_len: int) -> tuple[int, int]:
    """Longest match for data[pos:] starting inside the window, nearest source on ties."""
    start = max(0, pos - window)
    best_off = best_len = 0
    length = 1
    hi = pos - 1  # last admissible source position
    while length <= max_len and hi >= start:
        j = data.rfind(data[pos:pos + length], start, hi + length)
        if j < 0:
            break
        while length < max_len and data[j + length] == data[pos + length]:
            length += 1
        best_off, best_len = pos - j, length
        length += 1
        hi = j - 1
    return best_off, best_len


def lz77_encode(data, window: int = DEFAULT_WINDOW, lookahead: int = DEFAULT_LOOKAHEAD) -> list[Lz77Token]:
    """Greedy longest-match tokenization; each token covers ``length + 1`` bytes.

    Matches may overlap the bytes they produce.  At end of input the match is
    shortened by one so that the last byte becomes the token's literal.
    """
    if not 1 <= window <= 0xFFFF:
        raise ValueError(f"window must be in [1, 65535], got {window}")
    if not 1 <= lookahead <= 0xFF:
        raise ValueError(f"lookahead must be in [1, 255], got {lookahead}")
    data = bytes(data)
    n = len(data)
    tokens = []
    pos = 0
    while pos < n:
        max_len = min(lookahead, n - pos - 1)
        off, length = _longest_match(data, pos, window, max_len) if max_len and pos else (0, 0)
        tokens.append(Lz77Token(off, length, data[pos + length]))
        pos += length + 1
    return tokens


def lz77_decode(tokens) -> bytes:
    out = bytearray()
    for i, (off, length, nxt) in enumerate(tokens):
        if off > len(out):
            raise BadOffset(f"token {i}: offset {off} reaches before output start")
        if (off == 0) != (length == 0):
            raise BadToken(f"token {i}: offset {off} with length {length}")
        if length:
            src = len(out) - off
            if off >= length:
                out += out[src:src + length]
            else:
                for k in range(length):
                    out.append(out[src + k])
        out.append(nxt)
    return bytes(out)


def lz77_to_bytes(tokens) -> bytes:
    return b"".join(_TOKEN.pack(*t) for t in tokens)


def lz77_from_bytes(payload) -> list[Lz77Token]:
    payload = bytes(payload)
    if len(payload) % _TOKEN.size:
        raise BadToken(f"payload length {len(payload)} is not a multiple of {_TOKEN.size}")
    return [Lz77Token(*t) for t in _TOKEN.iter_unpack(payload)]
