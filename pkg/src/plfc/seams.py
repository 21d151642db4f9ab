"""Seam carving: dual-gradient energy, minimum vertical seam, width reduction.

All energy arithmetic is exact integer.  Ties in the seam search go to the
smallest column, both when picking the bottom-row start and at every
backtracking step, so carving is a pure function of the input image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeamNotConnected, SeamOutOfRange, TooManySeams, TooNarrow
from .image import GrayImage


@dataclass(frozen=True, eq=False)
class EnergyMap:
    values: np.ndarray  # int64, shape (rows, cols)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other):
        if not isinstance(other, EnergyMap):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    @classmethod
    def from_rows(cls, rows) -> EnergyMap:
        values = np.array(rows, dtype=np.int64)
        if values.ndim != 2 or values.size == 0:
            raise ValueError("energy map must be a non-empty 2-D grid")
        if (values < 0).any():
            raise ValueError("energies must be non-negative")
        return cls(values)


@dataclass(frozen=True)
class Seam:
    cols_by_row: tuple[int, ...]
    total_energy: int


def _energy(arr: np.ndarray) -> np.ndarray:
    a = arr.astype(np.int64)
    p = np.pad(a, 1, mode="edge")
    dx = p[1:-1, 2:] - p[1:-1, :-2]
    dy = p[2:, 1:-1] - p[:-2, 1:-1]
    return dx * dx + dy * dy


def energy_map(img: GrayImage) -> EnergyMap:
    """Squared central differences along both axes, borders clamped to the edge pixel."""
    return EnergyMap(_energy(img.to_array()))


def _cumulative(e: np.ndarray) -> np.ndarray:
    rows, cols = e.shape
    cum = np.empty_like(e)
    cum[0] = e[0]
    if cols == 1:
        np.cumsum(e[:, 0], out=cum[:, 0])
        return cum
    for r in range(1, rows):
        prev = cum[r - 1]
        best = prev.copy()
        np.minimum(best[1:], prev[:-1], out=best[1:])
        np.minimum(best[:-1], prev[1:], out=best[:-1])
        cum[r] = e[r] + best
    return cum


def _backtrack(cum: np.ndarray) -> list[int]:
    rows, cols = cum.shape
    path = [0] * rows
    c = int(np.argmin(cum[-1]))  # argmin returns the first (leftmost) minimum
    path[-1] = c
    for r in range(rows - 2, -1, -1):
        lo = max(c - 1, 0)
        hi = min(c + 2, cols)
        c = lo + int(np.argmin(cum[r, lo:hi]))
        path[r] = c
    return path


def min_seam(em: EnergyMap) -> Seam:
    cum = _cumulative(em.values)
    path = _backtrack(cum)
    return Seam(tuple(path), int(cum[-1, path[-1]]))


def _check_seam(seam: Seam, rows: int, cols: int) -> None:
    path = seam.cols_by_row
    if len(path) != rows:
        raise SeamOutOfRange(f"seam has {len(path)} entries for {rows} rows")
    for r, c in enumerate(path):
        if not 0 <= c < cols:
            raise SeamOutOfRange(f"row {r}: column {c} outside [0, {cols})")
        if r and abs(c - path[r - 1]) > 1:
            raise SeamNotConnected(f"rows {r - 1}->{r}: jump from {path[r - 1]} to {c}")


def _remove(arr: np.ndarray, path) -> np.ndarray:
    rows, cols = arr.shape
    keep = np.ones(arr.shape, dtype=bool)
    keep[np.arange(rows), path] = False
    return arr[keep].reshape(rows, cols - 1)


def remove_seam(img: GrayImage, seam: Seam) -> GrayImage:
    if img.cols < 2:
        raise TooNarrow("cannot remove a seam from a single-column image")
    _check_seam(seam, img.rows, img.cols)
    return GrayImage.from_array(_remove(img.to_array(), list(seam.cols_by_row)))


def carve_array(arr: np.ndarray, k: int, on_seam=None) -> np.ndarray:
    """Remove ``k`` seams from a uint8 array, recomputing energy after each removal.

    ``on_seam`` is called with the working array shape before every removal;
    the pipeline uses it for buffer accounting.
    """
    rows, cols = arr.shape
    if k < 0 or k >= cols:
        raise TooManySeams(f"cannot remove {k} seams from an image {cols} columns wide")
    for _ in range(k):
        if on_seam is not None:
            on_seam(arr.shape)
        path = _backtrack(_cumulative(_energy(arr)))
        arr = _remove(arr, path)
    return arr


def carve(img: GrayImage, k: int) -> GrayImage:
    if k == 0:
        return img
    return GrayImage.from_array(carve_array(img.to_array(), k))
