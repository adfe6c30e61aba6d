"""Per-tile expert annotations, their mass functions, and the fused reference map.

An expert annotates a tile with (class, certainty, proportion) entries.
Each certainty tag carries a weight; the class masses are the
proportion-weighted certainties summed per class, and whatever remains
goes to the whole frame as ignorance.  Fusing all experts of a tile and
deciding on the result yields a reference label map to train against
when no ground truth exists.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .belief import FrameOfDiscernment, MassFunction, decide
from .combine import RULE_ALIASES, combine, conflict

CERTAINTY_TAGS = ("sure", "moderately_sure", "not_sure")

#: default certainty weights: 2/3, 1/2 and 1/3 for sure, moderately sure,
#: not sure
DEFAULT_CERTAINTY_WEIGHTS = {
    "sure": 2.0 / 3.0,
    "moderately_sure": 1.0 / 2.0,
    "not_sure": 1.0 / 3.0,
}

PROPORTION_TOL = 1e-9


class Entry(NamedTuple):
    """One annotated region: class label, certainty tag, area proportion."""

    label: str
    certainty: str
    proportion: float


@dataclass(frozen=True)
class TileAnnotation:
    """One expert's annotation of one tile."""

    expert_id: str
    entries: tuple[Entry, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple(Entry(*e) for e in self.entries)
        )


@dataclass
class AnnotatedTile:
    tile_id: str
    annotations: list[TileAnnotation]


@dataclass
class AnnotationSet:
    """All expert annotations of a corpus, with the frame they refer to."""

    frame: FrameOfDiscernment
    tiles: list[AnnotatedTile]


def check_certainty_weights(weights: Mapping[str, float]) -> None:
    for tag in CERTAINTY_TAGS:
        if tag not in weights:
            raise ValueError(f"certainty weights missing tag {tag!r}")
        if not 0.0 <= weights[tag] <= 1.0:
            raise ValueError(f"certainty weight for {tag!r} outside [0, 1]")
    ordered = [weights[t] for t in CERTAINTY_TAGS]
    # non-increasing from sure to not_sure; the defaults are strictly so
    if not (ordered[0] >= ordered[1] >= ordered[2]):
        raise ValueError(f"certainty weights must not increase, got {ordered}")


def annotation_to_mass(
    annotation: TileAnnotation,
    frame: FrameOfDiscernment,
    weights: Mapping[str, float] | None = None,
    shadow_as_ignorance: str | None = None,
) -> MassFunction:
    """Mass function of one expert's tile annotation.

    Every class receives the sum of proportion * certainty-weight over
    its entries; the remainder goes to the whole frame.  When
    ``shadow_as_ignorance`` names a class, that class is read as absence
    of information: its entries contribute to no singleton and their
    would-be mass stays on the ignorance.
    """
    if weights is None:
        weights = DEFAULT_CERTAINTY_WEIGHTS
    check_certainty_weights(weights)
    if shadow_as_ignorance is not None and shadow_as_ignorance not in frame:
        raise ValueError(f"shadow class {shadow_as_ignorance!r} not in frame")

    total_p = 0.0
    per_label: dict[str, float] = {}
    for entry in annotation.entries:
        if entry.label not in frame:
            raise ValueError(
                f"expert {annotation.expert_id!r} uses unknown class {entry.label!r}"
            )
        if entry.certainty not in weights:
            raise ValueError(f"unknown certainty tag {entry.certainty!r}")
        if not 0.0 <= entry.proportion <= 1.0:
            raise ValueError(f"proportion {entry.proportion!r} outside [0, 1]")
        total_p += entry.proportion
        if entry.label == shadow_as_ignorance:
            continue
        per_label[entry.label] = (
            per_label.get(entry.label, 0.0)
            + entry.proportion * weights[entry.certainty]
        )
    if total_p > 1.0 + PROPORTION_TOL:
        raise ValueError(
            f"expert {annotation.expert_id!r} proportions sum to {total_p}"
        )

    masses = {
        frame.singleton(lab): v for lab, v in per_label.items() if v > 0.0
    }
    ignorance = 1.0 - sum(masses.values())
    if ignorance < -PROPORTION_TOL:
        raise ValueError(
            f"class masses exceed 1 by {-ignorance}; "
            "proportions and certainty weights are inconsistent"
        )
    if ignorance > 0.0:
        masses[frame.theta] = masses.get(frame.theta, 0.0) + ignorance
    return MassFunction(frame, masses)


def fuse_tile(
    annotations: Sequence[TileAnnotation],
    rule: str,
    frame: FrameOfDiscernment,
    weights: Mapping[str, float] | None = None,
    shadow_as_ignorance: str | None = None,
) -> MassFunction:
    """Fuse all experts of one tile under the given combination rule.

    A single annotation passes through unchanged.
    """
    if not annotations:
        raise ValueError("tile carries no annotations")
    masses = [
        annotation_to_mass(a, frame, weights, shadow_as_ignorance)
        for a in annotations
    ]
    if len(masses) == 1:
        return masses[0]
    return combine(masses, rule)


@dataclass
class TileReference:
    tile_id: str
    mass: MassFunction
    decided_label: str
    conflict: float


@dataclass
class ReferenceMap:
    """Fused per-tile masses and decisions, with corpus-level statistics."""

    tiles: list[TileReference]
    rule: str
    criterion: str
    mean_conflict: float = 0.0
    disagreement_rate: float | None = None
    compare_rule: str | None = None

    def labels(self) -> dict[str, str]:
        return {t.tile_id: t.decided_label for t in self.tiles}

    def masses(self) -> dict[str, MassFunction]:
        return {t.tile_id: t.mass for t in self.tiles}


def build_reference_map(
    annotations: AnnotationSet,
    rule: str,
    criterion: str = "betp",
    candidates: Sequence[int] | None = None,
    compare_rule: str | None = None,
    weights: Mapping[str, float] | None = None,
    shadow_as_ignorance: str | None = None,
) -> ReferenceMap:
    """Fuse and decide every tile; report per-tile conflict and global stats.

    The per-tile conflict is the empty-set mass of the conjunctive
    combination of that tile's expert masses (zero for single-expert
    tiles).  With ``compare_rule`` set, the fraction of tiles whose
    decision differs between the two rules is reported as well.
    """
    if rule not in RULE_ALIASES:
        raise ValueError(f"unknown combination rule {rule!r}")
    frame = annotations.frame
    results = []
    disagreements = 0
    for tile in annotations.tiles:
        expert_masses = [
            annotation_to_mass(a, frame, weights, shadow_as_ignorance)
            for a in tile.annotations
        ]
        if not expert_masses:
            raise ValueError(f"tile {tile.tile_id!r} carries no annotations")
        if len(expert_masses) == 1:
            fused = expert_masses[0]
            tile_conflict = 0.0
        else:
            fused = combine(expert_masses, rule)
            tile_conflict = conflict(expert_masses)
        code = decide(fused, criterion, candidates)
        results.append(
            TileReference(tile.tile_id, fused, frame.subset_key(code), tile_conflict)
        )
        if compare_rule is not None:
            other = (
                expert_masses[0]
                if len(expert_masses) == 1
                else combine(expert_masses, compare_rule)
            )
            if decide(other, criterion, candidates) != code:
                disagreements += 1
    n = len(results)
    return ReferenceMap(
        tiles=results,
        rule=rule,
        criterion=criterion,
        mean_conflict=sum(t.conflict for t in results) / n if n else 0.0,
        disagreement_rate=(disagreements / n) if compare_rule is not None else None,
        compare_rule=compare_rule,
    )


def merge_classes(
    m: MassFunction,
    mapping: Mapping[str, Sequence[str]],
    target_frame: FrameOfDiscernment | None = None,
) -> MassFunction:
    """Rewrite classes of a mass function onto a coarser frame.

    ``mapping`` sends source labels to non-empty collections of target
    labels (a class that is really a doubt between two others maps to
    that pair); unmapped labels map to themselves.  Each focal set is
    rewritten as the union of its members' images and masses landing on
    the same image are summed, so the total mass is conserved.
    """
    frame = m.frame
    for lab in mapping:
        if lab not in frame:
            raise ValueError(f"mapping references unknown label {lab!r}")
    images: dict[str, tuple[str, ...]] = {}
    for lab in frame.labels:
        image = tuple(mapping.get(lab, (lab,)))
        if not image:
            raise ValueError(f"label {lab!r} maps to an empty set")
        images[lab] = image

    if target_frame is None:
        seen: dict[str, None] = {}
        for lab in frame.labels:
            for out in images[lab]:
                seen.setdefault(out, None)
        target_frame = FrameOfDiscernment(seen)
    for lab, image in images.items():
        for out in image:
            if out not in target_frame:
                raise ValueError(
                    f"image label {out!r} of {lab!r} not in target frame"
                )

    rewritten: dict[int, float] = {}
    for code, value in m.items():
        out_code = 0
        for lab in frame.members(code):
            out_code |= target_frame.code(images[lab])
        rewritten[out_code] = rewritten.get(out_code, 0.0) + value
    return MassFunction(target_frame, rewritten)


# ---------------------------------------------------------------------------
# file formats


def annotation_set_to_dict(annotations: AnnotationSet) -> dict:
    return {
        "frame": list(annotations.frame.labels),
        "tiles": [
            {
                "id": tile.tile_id,
                "experts": [
                    {
                        "expert": a.expert_id,
                        "entries": [
                            {
                                "class": e.label,
                                "certainty": e.certainty,
                                "p": e.proportion,
                            }
                            for e in a.entries
                        ],
                    }
                    for a in tile.annotations
                ],
            }
            for tile in annotations.tiles
        ],
    }


def annotation_set_from_dict(obj: Mapping) -> AnnotationSet:
    try:
        frame = FrameOfDiscernment(obj["frame"])
        tiles = []
        for tile in obj["tiles"]:
            anns = [
                TileAnnotation(
                    expert_id=expert["expert"],
                    entries=tuple(
                        Entry(e["class"], e["certainty"], float(e["p"]))
                        for e in expert["entries"]
                    ),
                )
                for expert in tile["experts"]
            ]
            tiles.append(AnnotatedTile(tile_id=tile["id"], annotations=anns))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed annotation file: {exc}") from None
    return AnnotationSet(frame=frame, tiles=tiles)


def save_annotations(annotations: AnnotationSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(annotation_set_to_dict(annotations), fh, indent=1)
        fh.write("\n")


def load_annotations(path) -> AnnotationSet:
    with open(path, encoding="utf-8") as fh:
        return annotation_set_from_dict(json.load(fh))


def save_reference_csv(reference: ReferenceMap, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tile_id", "decided_label", "conflict"])
        for tile in reference.tiles:
            writer.writerow([tile.tile_id, tile.decided_label, repr(tile.conflict)])


def save_reference_masses(
    reference: ReferenceMap, frame: FrameOfDiscernment, path
) -> None:
    """Sidecar with the fused mass of every tile, in subset-key form."""
    payload = {
        "frame": list(frame.labels),
        "masses": {
            tile.tile_id: {
                frame.subset_key(code): value for code, value in tile.mass.items()
            }
            for tile in reference.tiles
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_reference_masses(path) -> tuple[FrameOfDiscernment, dict[str, MassFunction]]:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    try:
        frame = FrameOfDiscernment(obj["frame"])
        masses = {
            tile_id: MassFunction(
                frame, {frame.parse_key(k): float(v) for k, v in raw.items()}
            )
            for tile_id, raw in obj["masses"].items()
        }
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed reference masses file: {exc}") from None
    return frame, masses
