"""Deterministic accounting of pipeline-owned buffers.

Peak memory is reported as the largest sum of simultaneously held logical
buffers (images, energy maps, dictionaries, code lists, payloads), not as
process RSS, so it is identical on every run and every host.
"""

from __future__ import annotations


class BufferMeter:
    def __init__(self):
        self.held: dict[str, int] = {}
        self.current = 0
        self.peak = 0

    def hold(self, name: str, nbytes: int) -> None:
        """Set the size of buffer ``name``, replacing any earlier size."""
        self.current += nbytes - self.held.get(name, 0)
        self.held[name] = nbytes
        if self.current > self.peak:
            self.peak = self.current

    def release(self, *names: str) -> None:
        for name in names:
            self.current -= self.held.pop(name, 0)


class sizes:
    """Nominal byte costs of the pipeline's working structures."""

    ENERGY_CELL = 8  # int64 energy value
    CUMULATIVE_CELL = 8  # int64 DP accumulator
    CODE = 2  # one code or code slot, at most 16 bits
    LZW_ENTRY = 4  # prefix code (2) + byte (1) + padding
    LZ77_TOKEN = 4
    HUFFMAN_TABLE = 256

    @staticmethod
    def carve_working_set(rows: int, cols: int) -> int:
        # working copy + energy map + cumulative table
        n = rows * cols
        return n + n * sizes.ENERGY_CELL + n * sizes.CUMULATIVE_CELL

    @staticmethod
    def lzw_dictionary(entries: int) -> int:
        return entries * sizes.LZW_ENTRY

    @staticmethod
    def codes(n: int) -> int:
        return n * sizes.CODE

    @staticmethod
    def lz77_tokens(n: int) -> int:
        return n * sizes.LZ77_TOKEN
