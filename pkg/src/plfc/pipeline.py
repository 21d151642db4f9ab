"""Two-stage compression: carve seams, then code the flattened pixels losslessly."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .baselines import (
    CodecId,
    huffman_decode,
    huffman_encode,
    lz77_decode,
    lz77_encode,
    lz77_from_bytes,
    lz77_to_bytes,
    store_decode,
    store_encode,
)
from .container import ContainerHeader, pack_codes, read_container, unpack_codes, write_container
from .errors import DimensionMismatch, TooManySeams, ZeroSize
from .image import GrayImage, flatten, to_csv, unflatten
from .lzw import dictionary_size, lzw_decode, lzw_encode
from .meter import BufferMeter, sizes
from .seams import carve_array

DEFAULT_SEAM_FRAC = 0.20


@dataclass(frozen=True)
class CompressionSpec:
    """How many seams to carve (absolute or as a fraction of width) and which coder to use.

    With neither ``seams`` nor ``seam_frac`` given, 20% of the width is carved.
    """

    seams: int | None = None
    seam_frac: float | None = None
    codec: CodecId = CodecId.LZW

    def __post_init__(self):
        if self.seams is not None and self.seam_frac is not None:
            raise ValueError("give either seams or seam_frac, not both")
        if self.seams is None and self.seam_frac is None:
            object.__setattr__(self, "seam_frac", DEFAULT_SEAM_FRAC)
        if self.seams is not None and self.seams < 0:
            raise ValueError(f"seam count must be >= 0, got {self.seams}")
        if self.seam_frac is not None and not 0.0 <= self.seam_frac < 1.0:
            raise ValueError(f"seam fraction must be in [0, 1), got {self.seam_frac}")
        object.__setattr__(self, "codec", CodecId(self.codec))

    def resolve(self, cols: int) -> int:
        k = self.seams if self.seams is not None else math.floor(self.seam_frac * cols)
        if k >= cols:
            raise TooManySeams(f"cannot remove {k} seams from an image {cols} columns wide")
        return k

    def to_dict(self) -> dict:
        return {"seams": self.seams, "seam_frac": self.seam_frac, "codec": self.codec.label}

    @classmethod
    def from_dict(cls, d: dict) -> CompressionSpec:
        return cls(d.get("seams"), d.get("seam_frac"), CodecId.from_name(d["codec"]))


def encode_payload(codec: CodecId, data: bytes, meter: BufferMeter | None = None) -> tuple[bytes, int]:
    """Run one lossless coder over ``data``; returns (payload, payload_bit_length)."""
    meter = meter or BufferMeter()
    if codec == CodecId.STORE:
        payload = store_encode(data)
        nbits = 8 * len(payload)
    elif codec == CodecId.LZW:
        codes = lzw_encode(data)
        meter.hold("dictionary", sizes.lzw_dictionary(dictionary_size(len(codes))))
        meter.hold("codes", sizes.codes(len(codes)))
        payload, nbits = pack_codes(codes)
    elif codec == CodecId.HUFFMAN:
        meter.hold("dictionary", sizes.HUFFMAN_TABLE)
        enc = huffman_encode(data)
        payload, nbits = enc.to_bytes(), 8 * len(enc.lengths) + enc.bit_length
    elif codec == CodecId.LZ77:
        tokens = lz77_encode(data)
        meter.hold("codes", sizes.lz77_tokens(len(tokens)))
        payload = lz77_to_bytes(tokens)
        nbits = 8 * len(payload)
    else:  # pragma: no cover - CodecId is closed
        raise ValueError(f"unsupported codec {codec!r}")
    meter.hold("payload", len(payload))
    meter.release("dictionary", "codes")
    return payload, nbits


def decode_payload(codec: CodecId, payload: bytes, nbits: int, count: int,
                   meter: BufferMeter | None = None) -> bytes:
    meter = meter or BufferMeter()
    if codec == CodecId.STORE:
        data = store_decode(payload)
    elif codec == CodecId.LZW:
        codes = unpack_codes(payload, nbits)
        meter.hold("codes", sizes.codes(len(codes)))
        meter.hold("dictionary", sizes.lzw_dictionary(dictionary_size(len(codes))))
        data = lzw_decode(codes)
    elif codec == CodecId.HUFFMAN:
        meter.hold("dictionary", sizes.HUFFMAN_TABLE)
        if len(payload) < 256:
            raise DimensionMismatch(f"Huffman payload of {len(payload)} bytes lacks its length table")
        data = huffman_decode(payload[:256], payload[256:], count)
    elif codec == CodecId.LZ77:
        tokens = lz77_from_bytes(payload)
        meter.hold("codes", sizes.lz77_tokens(len(tokens)))
        data = lz77_decode(tokens)
    else:  # pragma: no cover
        raise ValueError(f"unsupported codec {codec!r}")
    meter.hold("decoded", len(data))
    meter.release("dictionary", "codes")
    return data


def compress(img: GrayImage, spec: CompressionSpec | None = None,
             meter: BufferMeter | None = None) -> bytes:
    """Carve, flatten, encode and wrap ``img``; the result is a ``.plfc`` container."""
    return compress_carved(img, spec, meter)[0]


def compress_carved(img: GrayImage, spec: CompressionSpec | None = None,
                    meter: BufferMeter | None = None) -> tuple[bytes, GrayImage]:
    """Like :func:`compress`, also returning the carved image that was encoded."""
    spec = spec or CompressionSpec()
    meter = meter or BufferMeter()
    k = spec.resolve(img.cols)

    meter.hold("image", img.rows * img.cols)

    def on_seam(shape):
        meter.hold("carving", sizes.carve_working_set(*shape))

    carved = GrayImage.from_array(carve_array(img.to_array(), k, on_seam)) if k else img
    meter.release("carving")
    data = flatten(carved)
    meter.hold("carved", len(data))

    payload, nbits = encode_payload(spec.codec, data, meter)
    header = ContainerHeader(spec.codec, carved.rows, carved.cols, img.rows, img.cols, nbits)
    out = write_container(header, payload)
    meter.hold("container", len(out))
    return out, carved


def decompress_image(blob, meter: BufferMeter | None = None) -> GrayImage:
    meter = meter or BufferMeter()
    meter.hold("container", len(blob))
    header, payload = read_container(blob)
    count = header.carved_rows * header.carved_cols
    data = decode_payload(header.codec, payload, header.payload_bit_length, count, meter)
    if len(data) != count:
        raise DimensionMismatch(
            f"decoded {len(data)} pixels, header says {header.carved_rows}x{header.carved_cols}"
        )
    return unflatten(data, header.carved_rows, header.carved_cols)


def decompress(blob, meter: BufferMeter | None = None) -> bytes:
    """Decode a container back to canonical CSV of the carved image."""
    meter = meter or BufferMeter()
    img = decompress_image(blob, meter)
    out = to_csv(img)
    meter.hold("csv", len(out))
    return out


def compression_ratio(original_bytes: int, container_bytes: int) -> float:
    if original_bytes <= 0 or container_bytes <= 0:
        raise ZeroSize(f"sizes must be positive, got {original_bytes} and {container_bytes}")
    return original_bytes / container_bytes


def raw_ratio(img_rows: int, img_cols: int, container_bytes: int) -> float:
    return compression_ratio(img_rows * img_cols, container_bytes)


def format_ratio(ratio: float) -> str:
    return f"{ratio:.2f}:1"
