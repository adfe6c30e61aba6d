"""Synthetic tile corpus: textures, ground truth and simulated experts.

Stands in for a real annotated image base.  Each class gets a texture
recipe (flat noise, sinusoidal stripes, or scattered blobs); a fraction
of tiles carries two classes split at a vertical boundary.  Simulated
experts see the true regions, mislabel each with their error rate, and
attach a certainty tag drawn from their own distribution, producing the
same annotation records a human would.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annotations import (
    CERTAINTY_TAGS,
    AnnotatedTile,
    AnnotationSet,
    Entry,
    TileAnnotation,
    load_annotations,
    save_annotations,
)
from .belief import FrameOfDiscernment
from .texture import GrayTile, read_pgm, write_pgm


@dataclass
class TextureRecipe:
    """How to draw one class: flat, stripes or blobs, plus noise."""

    kind: str = "flat"
    base: int = 128
    noise: float = 8.0
    amplitude: int = 70
    period: int = 8
    angle: float = 0.0
    density: float = 0.004
    radius: int = 4

    def __post_init__(self):
        if self.kind not in ("flat", "stripes", "blobs"):
            raise ValueError(f"unknown texture kind {self.kind!r}")


@dataclass
class ExpertProfile:
    """Simulated annotator: how often they mislabel and how sure they feel."""

    name: str
    error_rate: float = 0.1
    certainty_probs: tuple[float, float, float] = (0.6, 0.3, 0.1)

    def __post_init__(self):
        if not 0.0 <= self.error_rate <= 1.0:
            raise ValueError(f"error rate {self.error_rate} outside [0, 1]")
        probs = np.asarray(self.certainty_probs, dtype=np.float64)
        if probs.shape != (3,) or probs.min() < 0 or abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(
                f"certainty probabilities must be 3 values summing to 1, "
                f"got {self.certainty_probs}"
            )


@dataclass
class SynthConfig:
    classes: dict[str, TextureRecipe]
    tiles_per_class: int = 100
    experts: list[ExpertProfile] = field(default_factory=list)
    mixed_fraction: float = 0.0
    tile_size: int = 64
    seed: int = 0

    def __post_init__(self):
        if not self.classes:
            raise ValueError("need at least one class")
        if self.tiles_per_class < 1:
            raise ValueError("tiles_per_class must be >= 1")
        if not self.experts:
            raise ValueError("need at least one expert profile")
        if not 0.0 <= self.mixed_fraction <= 1.0:
            raise ValueError("mixed_fraction outside [0, 1]")
        if self.tile_size < 8:
            raise ValueError("tile_size must be >= 8")
        if self.mixed_fraction > 0 and len(self.classes) < 2:
            raise ValueError("mixed tiles need at least two classes")

    def echo(self) -> dict:
        return {
            "classes": {k: vars(r).copy() for k, r in self.classes.items()},
            "tiles_per_class": self.tiles_per_class,
            "experts": [
                {
                    "name": e.name,
                    "error_rate": e.error_rate,
                    "certainty_probs": list(e.certainty_probs),
                }
                for e in self.experts
            ],
            "mixed_fraction": self.mixed_fraction,
            "tile_size": self.tile_size,
            "seed": self.seed,
        }


@dataclass
class SynthCorpus:
    frame: FrameOfDiscernment
    tiles: list[GrayTile]
    truth: dict[str, str]
    regions: dict[str, list[tuple[str, float]]]
    annotations: AnnotationSet
    config: SynthConfig | None = None


#: distinct default recipes, cycled when more classes are requested
_RECIPE_CYCLE = (
    TextureRecipe("flat", base=70, noise=6),
    TextureRecipe("stripes", base=130, noise=6, amplitude=70, period=6, angle=0.0),
    TextureRecipe("blobs", base=110, noise=6, amplitude=90, density=0.005, radius=4),
    TextureRecipe("stripes", base=150, noise=8, amplitude=60, period=10, angle=90.0),
    TextureRecipe("flat", base=190, noise=14),
    TextureRecipe("stripes", base=120, noise=6, amplitude=70, period=8, angle=45.0),
    TextureRecipe("blobs", base=160, noise=8, amplitude=-80, density=0.012, radius=2),
)


def default_recipes(n_classes: int) -> dict[str, TextureRecipe]:
    """Named recipes A, B, C, ... drawn from the built-in cycle."""
    if not 1 <= n_classes <= 16:
        raise ValueError("supports 1 to 16 classes")
    out = {}
    for i in range(n_classes):
        base = _RECIPE_CYCLE[i % len(_RECIPE_CYCLE)]
        recipe = TextureRecipe(**vars(base))
        if i >= len(_RECIPE_CYCLE):
            recipe.base = min(230, recipe.base + 25)
        out[chr(65 + i)] = recipe
    return out


def render_texture(recipe: TextureRecipe, shape: tuple[int, int], rng) -> np.ndarray:
    h, w = shape
    canvas = np.full(shape, float(recipe.base))
    if recipe.kind == "stripes":
        rad = np.deg2rad(recipe.angle)
        rows, cols = np.indices(shape)
        phase = np.cos(rad) * cols + np.sin(rad) * rows
        canvas += recipe.amplitude * np.sin(2 * np.pi * phase / recipe.period)
    elif recipe.kind == "blobs":
        count = max(1, int(round(recipe.density * h * w)))
        centers = rng.integers(0, (h, w), size=(count, 2))
        rows, cols = np.indices(shape)
        for cr, cc in centers:
            inside = (rows - cr) ** 2 + (cols - cc) ** 2 <= recipe.radius**2
            canvas[inside] += recipe.amplitude
    if recipe.noise > 0:
        canvas += rng.normal(0.0, recipe.noise, size=shape)
    return np.clip(np.rint(canvas), 0, 255).astype(np.uint8)


def _simulate_expert(
    profile: ExpertProfile,
    regions: list[tuple[str, float]],
    labels: tuple[str, ...],
    rng,
) -> TileAnnotation:
    entries = []
    for true_label, proportion in regions:
        if rng.random() < profile.error_rate and len(labels) > 1:
            wrong = [lab for lab in labels if lab != true_label]
            seen = wrong[int(rng.integers(len(wrong)))]
        else:
            seen = true_label
        tag = CERTAINTY_TAGS[
            int(rng.choice(3, p=np.asarray(profile.certainty_probs)))
        ]
        entries.append(Entry(seen, tag, proportion))
    return TileAnnotation(profile.name, tuple(entries))


def synth_corpus(cfg: SynthConfig) -> SynthCorpus:
    """Deterministic corpus: tiles, true labels and expert annotations."""
    rng = np.random.default_rng(cfg.seed)
    frame = FrameOfDiscernment(cfg.classes)
    labels = frame.labels
    size = cfg.tile_size

    total = len(labels) * cfg.tiles_per_class
    n_mixed = int(round(cfg.mixed_fraction * total))
    mixed_flags = np.zeros(total, dtype=bool)
    if n_mixed:
        mixed_flags[rng.choice(total, size=n_mixed, replace=False)] = True

    tiles: list[GrayTile] = []
    truth: dict[str, str] = {}
    regions_by_tile: dict[str, list[tuple[str, float]]] = {}
    annotated: list[AnnotatedTile] = []

    index = 0
    for label in labels:
        for _ in range(cfg.tiles_per_class):
            tile_id = f"t{index:05d}"
            pixels = render_texture(cfg.classes[label], (size, size), rng)
            if mixed_flags[index]:
                others = [lab for lab in labels if lab != label]
                second = others[int(rng.integers(len(others)))]
                # the dominant class keeps the left 55..80% of the width
                boundary = int(rng.integers(int(0.55 * size), int(0.8 * size) + 1))
                pixels[:, boundary:] = render_texture(
                    cfg.classes[second], (size, size - boundary), rng
                )
                regions = [
                    (label, boundary / size),
                    (second, (size - boundary) / size),
                ]
            else:
                regions = [(label, 1.0)]
            tiles.append(GrayTile(tile_id, pixels))
            truth[tile_id] = label
            regions_by_tile[tile_id] = regions
            annotated.append(
                AnnotatedTile(
                    tile_id,
                    [
                        _simulate_expert(profile, regions, labels, rng)
                        for profile in cfg.experts
                    ],
                )
            )
            index += 1

    return SynthCorpus(
        frame=frame,
        tiles=tiles,
        truth=truth,
        regions=regions_by_tile,
        annotations=AnnotationSet(frame, annotated),
        config=cfg,
    )


# ---------------------------------------------------------------------------
# corpus directory layout: tiles/*.pgm, truth.csv, regions.json, annotations.json


def save_corpus(corpus: SynthCorpus, directory) -> None:
    directory = Path(directory)
    tile_dir = directory / "tiles"
    tile_dir.mkdir(parents=True, exist_ok=True)
    for tile in corpus.tiles:
        write_pgm(tile_dir / f"{tile.tile_id}.pgm", tile.pixels)
    with open(directory / "truth.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tile_id", "label"])
        for tile in corpus.tiles:
            writer.writerow([tile.tile_id, corpus.truth[tile.tile_id]])
    with open(directory / "regions.json", "w", encoding="utf-8") as fh:
        json.dump(
            {
                tile.tile_id: [[lab, prop] for lab, prop in corpus.regions[tile.tile_id]]
                for tile in corpus.tiles
            },
            fh,
            indent=0,
        )
        fh.write("\n")
    save_annotations(corpus.annotations, directory / "annotations.json")


def load_corpus(directory) -> SynthCorpus:
    directory = Path(directory)
    annotations = load_annotations(directory / "annotations.json")
    truth: dict[str, str] = {}
    with open(directory / "truth.csv", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["tile_id", "label"]:
            raise ValueError(f"{directory}/truth.csv: unexpected header {header}")
        for row in reader:
            if len(row) != 2:
                raise ValueError(f"{directory}/truth.csv: malformed row {row!r}")
            truth[row[0]] = row[1]
    regions_path = directory / "regions.json"
    if regions_path.exists():
        with open(regions_path, encoding="utf-8") as fh:
            regions = {
                tid: [(lab, float(p)) for lab, p in pairs]
                for tid, pairs in json.load(fh).items()
            }
    else:
        regions = {tid: [(lab, 1.0)] for tid, lab in truth.items()}
    tiles = [
        GrayTile(tid, read_pgm(directory / "tiles" / f"{tid}.pgm")) for tid in truth
    ]
    return SynthCorpus(
        frame=annotations.frame,
        tiles=tiles,
        truth=truth,
        regions=regions,
        annotations=annotations,
        config=None,
    )
