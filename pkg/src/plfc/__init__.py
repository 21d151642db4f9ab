"""Seam-carving + LZW compression for grayscale CSV images, with baseline coders and a benchmark harness."""

from .baselines import CodecId
from .image import GrayImage, flatten, parse_csv, to_csv, unflatten
from .lzw import lzw_decode, lzw_encode
from .pipeline import CompressionSpec, compress, compression_ratio, decompress
from .seams import carve, energy_map, min_seam, remove_seam

__version__ = "0.1.0"
