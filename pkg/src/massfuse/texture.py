"""Co-occurrence texture features of gray tiles.

Pixel pairs at distance one are counted in four directions (0, 45, 90
and 135 degrees), symmetrically in both orderings, after uniform
quantization of the 8-bit range into a configurable number of levels.
Six statistics of each normalized matrix, over the four directions in
fixed order, give the 24-value feature vector of a tile.

Pair counting is not translation invariant in general: shifting a
periodic texture by anything but a whole period changes which residue
class loses the boundary pair, so features move slightly.  Shifts by a
multiple of the period reproduce the tile and the features exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels

#: (row, column) offsets of the four directions at distance 1
DIRECTIONS = {0: (0, 1), 45: (-1, 1), 90: (-1, 0), 135: (-1, -1)}

DIRECTION_ORDER = (0, 45, 90, 135)

FEATURE_NAMES = (
    "homogeneity",
    "contrast",
    "entropy",
    "correlation",
    "directivity",
    "uniformity",
)

DEFAULT_LEVELS = 16

#: CSV column names: f1..f24 in (direction, statistic) order
FEATURE_COLUMNS = tuple(f"f{i}" for i in range(1, 25))


def feature_layout() -> tuple[str, ...]:
    """Meaning of f1..f24: statistic name at direction, in column order."""
    return tuple(
        f"{name}_{deg}" for deg in DIRECTION_ORDER for name in FEATURE_NAMES
    )


@dataclass
class GrayTile:
    """8-bit grayscale tile with an identifier."""

    tile_id: str
    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.shape[0] < 2 or pixels.shape[1] < 2:
            raise ValueError(f"tile {self.tile_id!r} must be at least 2x2")
        if pixels.min() < 0 or pixels.max() > 255:
            raise ValueError(f"tile {self.tile_id!r} has pixels outside 0..255")
        self.pixels = pixels.astype(np.uint8)


def quantize(pixels: np.ndarray, levels: int) -> np.ndarray:
    """Uniformly bin 0..255 values into ``levels`` gray levels."""
    if not 2 <= levels <= 256:
        raise ValueError(f"levels must be in [2, 256], got {levels}")
    return ((pixels.astype(np.uint32) * levels) >> 8).astype(np.uint8)


def cooccurrence(
    tile: GrayTile | np.ndarray, direction: int, levels: int = DEFAULT_LEVELS
) -> np.ndarray:
    """Normalized symmetric co-occurrence matrix at distance 1.

    Returns a (levels, levels) matrix summing to one.
    """
    pixels = tile.pixels if isinstance(tile, GrayTile) else np.asarray(tile)
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {sorted(DIRECTIONS)}")
    drow, dcol = DIRECTIONS[direction]
    quantized = quantize(pixels, levels)
    counts = _kernels.glcm_counts(quantized, drow, dcol, levels)
    total = counts.sum()
    if total == 0:
        raise ValueError(
            f"tile of shape {pixels.shape} has no pixel pairs at offset "
            f"({drow}, {dcol})"
        )
    return counts / total


def haralick6(glcm: np.ndarray) -> tuple[float, float, float, float, float, float]:
    """Six statistics of a normalized co-occurrence matrix.

    homogeneity  sum p / (1 + |i - j|)
    contrast     sum (i - j)^2 p
    entropy      -sum p log2 p, with 0 log 0 = 0
    correlation  sum (i - mu_i)(j - mu_j) p / (sigma_i sigma_j), 0 if degenerate
    directivity  sum of the diagonal p(i, i)
    uniformity   sum p^2
    """
    p = np.asarray(glcm, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError("co-occurrence matrix must be square")
    if abs(p.sum() - 1.0) > 1e-6:
        raise ValueError(f"co-occurrence matrix is not normalized: sum={p.sum()}")
    n = p.shape[0]
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]

    homogeneity = float((p / (1.0 + np.abs(i - j))).sum())
    contrast = float(((i - j) ** 2 * p).sum())
    positive = p[p > 0]
    entropy = float(-(positive * np.log2(positive)).sum())
    p_i = p.sum(axis=1)
    p_j = p.sum(axis=0)
    mu_i = float(np.arange(n) @ p_i)
    mu_j = float(np.arange(n) @ p_j)
    var_i = float(((np.arange(n) - mu_i) ** 2) @ p_i)
    var_j = float(((np.arange(n) - mu_j) ** 2) @ p_j)
    sigma = np.sqrt(var_i) * np.sqrt(var_j)
    if sigma > 0:
        cov = float(((i - mu_i) * (j - mu_j) * p).sum())
        correlation = cov / sigma
    else:
        correlation = 0.0
    directivity = float(np.trace(p))
    uniformity = float((p * p).sum())
    return homogeneity, contrast, entropy, correlation, directivity, uniformity


def extract24(tile: GrayTile | np.ndarray, levels: int = DEFAULT_LEVELS) -> np.ndarray:
    """24-value feature vector: haralick6 over the four directions."""
    values = []
    for direction in DIRECTION_ORDER:
        values.extend(haralick6(cooccurrence(tile, direction, levels)))
    return np.array(values, dtype=np.float64)


# ---------------------------------------------------------------------------
# 8-bit binary PGM (P5) and the feature CSV


def read_pgm(path) -> np.ndarray:
    """Read an 8-bit binary PGM file."""
    with open(path, "rb") as fh:
        data = fh.read()

    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval

    if tokens[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (magic {tokens[0]!r})")
    width, height, maxval = (int(t) for t in tokens[1:])
    if not 0 < maxval <= 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    expected = width * height
    raster = data[pos : pos + expected]
    if len(raster) != expected:
        raise ValueError(f"{path}: expected {expected} pixels, got {len(raster)}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, pixels: np.ndarray) -> None:
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    if pixels.ndim != 2:
        raise ValueError("PGM output needs a 2-D array")
    height, width = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def load_tiles(directory) -> list[GrayTile]:
    """All .pgm files of a directory as tiles, ordered by file name."""
    directory = Path(directory)
    paths = sorted(directory.glob("*.pgm"))
    if not paths:
        raise ValueError(f"no .pgm tiles found in {directory}")
    return [GrayTile(path.stem, read_pgm(path)) for path in paths]


def save_features_csv(path, tile_ids, matrix) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != (len(tile_ids), 24):
        raise ValueError(f"expected ({len(tile_ids)}, 24) features, got {matrix.shape}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tile_id", *FEATURE_COLUMNS])
        for tile_id, row in zip(tile_ids, matrix):
            writer.writerow([tile_id, *(repr(float(v)) for v in row)])


def load_features_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header != ["tile_id", *FEATURE_COLUMNS]:
            raise ValueError(f"{path}: unexpected feature CSV header")
        ids, rows = [], []
        for row in reader:
            if len(row) != 25:
                raise ValueError(f"{path}: malformed row {row!r}")
            ids.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return ids, np.array(rows, dtype=np.float64).reshape(len(ids), 24)
