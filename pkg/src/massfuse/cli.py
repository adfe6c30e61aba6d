"""Command-line pipeline: synth, features, reality, fuse, train, classify, eval."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .annotations import (
    build_reference_map,
    load_annotations,
    load_reference_masses,
    save_reference_csv,
    save_reference_masses,
)
from .belief import FrameOfDiscernment, mass_from_dict, mass_to_dict
from .combine import auto_conflict, combine, conflict
from .evaluate import evaluate, save_report_csv
from .mlp import (
    TrainConfig,
    classify,
    init_network,
    load_model,
    make_belief_samples,
    save_model,
    train,
)
from .synth import ExpertProfile, SynthConfig, default_recipes, load_corpus, save_corpus, synth_corpus
from .texture import extract24, load_features_csv, load_tiles, save_features_csv


def _masses_sidecar_path(out: Path) -> Path:
    return out.with_suffix(".masses.json") if out.suffix else out.with_name(out.name + ".masses.json")


def _parse_weights(text: str) -> dict[str, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated weights, got {text!r}"
        )
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad certainty weights {text!r}") from None
    return dict(zip(("sure", "moderately_sure", "not_sure"), values))


def _parse_hidden(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad hidden layer list {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError(f"bad hidden layer list {text!r}")
    return sizes


def cmd_synth(args) -> int:
    cfg = SynthConfig(
        classes=default_recipes(args.classes),
        tiles_per_class=args.tiles_per_class,
        experts=[
            ExpertProfile(f"E{i}", error_rate=args.error_rate)
            for i in range(args.experts)
        ],
        mixed_fraction=args.mixed,
        tile_size=args.tile_size,
        seed=args.seed,
    )
    corpus = synth_corpus(cfg)
    save_corpus(corpus, args.out)
    print(
        f"wrote {len(corpus.tiles)} tiles over {args.classes} classes "
        f"with {args.experts} experts to {args.out}"
    )
    return 0


def cmd_features(args) -> int:
    tiles = load_tiles(args.infile)
    matrix = np.array([extract24(tile, args.levels) for tile in tiles])
    save_features_csv(args.out, [t.tile_id for t in tiles], matrix)
    print(f"wrote {len(tiles)} feature rows to {args.out}")
    return 0


def cmd_reality(args) -> int:
    annotations = load_annotations(args.infile)
    reference = build_reference_map(
        annotations,
        rule=args.rule,
        criterion=args.decision,
        compare_rule=args.compare_rule,
        weights=args.weights,
        shadow_as_ignorance=args.shadow_as_ignorance,
    )
    out = Path(args.out)
    save_reference_csv(reference, out)
    sidecar = _masses_sidecar_path(out)
    save_reference_masses(reference, annotations.frame, sidecar)
    line = (
        f"decided {len(reference.tiles)} tiles with {args.rule}; "
        f"mean conflict {reference.mean_conflict:.4f}"
    )
    if reference.disagreement_rate is not None:
        line += (
            f"; decision disagreement vs {args.compare_rule}: "
            f"{reference.disagreement_rate:.4f}"
        )
    print(line)
    print(f"wrote {out} and {sidecar}")
    return 0


def cmd_fuse(args) -> int:
    with open(args.infile, encoding="utf-8") as fh:
        payload = json.load(fh)
    if not isinstance(payload, list) or len(payload) < 2:
        raise ValueError(
            f"{args.infile}: expected a JSON array of at least two mass functions"
        )
    masses = [mass_from_dict(obj) for obj in payload]
    fused = combine(masses, args.rule)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(mass_to_dict(fused), fh, indent=2)
        fh.write("\n")
    print(f"fused {len(masses)} mass functions with {args.rule} into {args.out}")
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["metric", "value"])
            writer.writerow(["conflict", repr(conflict(masses))])
            for i, m in enumerate(masses, start=1):
                writer.writerow([f"auto_conflict_{i}", repr(auto_conflict(m, 3))])
        print(f"wrote conflict report to {args.report}")
    return 0


def cmd_train(args) -> int:
    ids, features = load_features_csv(args.features)
    frame, masses_by_id = load_reference_masses(args.targets)
    keep = [i for i, tid in enumerate(ids) if tid in masses_by_id]
    if not keep:
        raise ValueError("no tile ids shared between features and targets")
    features = features[keep]
    masses = [masses_by_id[ids[i]] for i in keep]

    mean = features.mean(axis=0)
    scale = features.std(axis=0)
    scale[scale == 0.0] = 1.0
    samples, skipped = make_belief_samples((features - mean) / scale, masses)
    if skipped:
        print(f"skipped {skipped} tiles without singleton mass")
    if not samples:
        raise ValueError("no usable training samples")

    sizes = (features.shape[1], *args.hidden, frame.size)
    net = init_network(sizes, seed=args.seed, init_range=args.init_range, slope=args.c)
    cfg = TrainConfig(
        eta=args.eta, epochs=args.epochs, seed=args.seed, shuffle=not args.no_shuffle
    )
    _, trace = train(net, samples, cfg)
    save_model(args.out, net, labels=list(frame.labels), norm=(mean, scale))
    print(
        f"trained {'-'.join(map(str, sizes))} network on {len(samples)} samples "
        f"for {args.epochs} epochs; final mean error {trace[-1]:.6f}"
    )
    print(f"wrote model to {args.out}")
    return 0


def cmd_classify(args) -> int:
    net, labels, norm = load_model(args.model)
    if args.labels:
        labels = args.labels.split(",")
    if not labels:
        raise ValueError("model has no class labels; pass --labels")
    frame = FrameOfDiscernment(labels)
    if frame.size != net.sizes[-1]:
        raise ValueError(
            f"{frame.size} labels for a network with {net.sizes[-1]} outputs"
        )
    ids, features = load_features_csv(args.features)
    if norm is not None:
        features = (features - norm[0]) / norm[1]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tile_id", "label"])
        for tid, row in zip(ids, features):
            writer.writerow([tid, classify(net, row, frame, args.criterion)])
    print(f"classified {len(ids)} tiles into {args.out}")
    return 0


def cmd_eval(args) -> int:
    corpus = load_corpus(args.corpus)
    report = evaluate(
        corpus,
        rule=args.rule,
        trials=args.trials,
        split=args.split,
        seed=args.seed,
        hidden=args.hidden,
        eta=args.eta,
        epochs=args.epochs,
        levels=args.levels,
        criterion=args.decision,
    )
    save_report_csv(report, args.out)
    line = (
        f"mean rate {report.mean:.4f} "
        f"[{report.ci_low:.4f};{report.ci_high:.4f}] over {report.trials} trials"
    )
    if report.truth_mean is not None:
        line += f"; vs ground truth {report.truth_mean:.4f}"
    print(line)
    print(f"wrote report to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="massfuse",
        description=(
            "Fuse conflicting multi-expert tile annotations into a belief "
            "reference and train a belief-target MLP on texture features."
        ),
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("synth", help="generate a synthetic annotated corpus")
    p.add_argument("--out", required=True, help="output corpus directory")
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--tiles-per-class", type=int, default=100)
    p.add_argument("--experts", type=int, default=3)
    p.add_argument("--error-rate", type=float, default=0.1)
    p.add_argument("--mixed", type=float, default=0.0, help="fraction of two-class tiles")
    p.add_argument("--tile-size", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("features", help="co-occurrence features of a tile directory")
    p.add_argument("--in", dest="infile", required=True, help="directory of .pgm tiles")
    p.add_argument("--out", required=True, help="output feature CSV")
    p.add_argument("--levels", type=int, default=16)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("reality", help="fuse expert annotations and decide per tile")
    p.add_argument("--rule", choices=["conjunctive", "dp", "pcr"], default="pcr")
    p.add_argument("--decision", choices=["betp", "bel", "pl"], default="betp")
    p.add_argument("--in", dest="infile", required=True, help="annotation JSON")
    p.add_argument("--out", required=True, help="output reference CSV")
    p.add_argument("--compare-rule", choices=["conjunctive", "dp", "pcr"])
    p.add_argument("--shadow-as-ignorance", metavar="LABEL")
    p.add_argument(
        "--weights",
        type=_parse_weights,
        default=None,
        metavar="SURE,MODERATE,NOT",
        help="certainty weights, default 2/3,1/2,1/3",
    )
    p.set_defaults(func=cmd_reality)

    p = sub.add_parser("fuse", help="combine mass functions from a JSON array")
    p.add_argument("--rule", choices=["conjunctive", "dp", "pcr"], default="conjunctive")
    p.add_argument("--in", dest="infile", required=True, help="JSON array of masses")
    p.add_argument("--out", required=True, help="fused mass JSON")
    p.add_argument("--report", help="also write conflict / auto-conflict CSV")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("train", help="train the belief MLP on features and fused masses")
    p.add_argument("--features", required=True, help="feature CSV")
    p.add_argument("--targets", required=True, help="reference masses JSON sidecar")
    p.add_argument("--out", required=True, help="output model JSON")
    p.add_argument("--hidden", type=_parse_hidden, default=(30,), help="e.g. 30 or 30,20")
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", type=float, default=1.0, help="sigmoid slope constant")
    p.add_argument("--init-range", type=float, default=0.5)
    p.add_argument("--no-shuffle", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="label tiles with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True, help="output CSV of tile_id,label")
    p.add_argument("--criterion", choices=["betp", "bel", "pl"], default="betp")
    p.add_argument("--labels", help="comma-separated class labels (overrides model)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", help="repeated-split evaluation on a corpus directory")
    p.add_argument("--corpus", required=True, help="directory written by synth")
    p.add_argument("--out", required=True, help="output report CSV")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--split", type=float, default=2 / 3)
    p.add_argument("--rule", choices=["conjunctive", "dp", "pcr"], default="pcr")
    p.add_argument("--decision", choices=["betp", "bel", "pl"], default="betp")
    p.add_argument("--hidden", type=_parse_hidden, default=(30,))
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--levels", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
