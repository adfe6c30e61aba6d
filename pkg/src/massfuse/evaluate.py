"""Repeated random-split evaluation of the full fusion-and-learning pipeline.

Every trial re-splits the corpus (two thirds for training by default),
trains a fresh network on belief targets from the fused expert masses,
classifies the held-out tiles and scores them against the fused-and-
decided reference labels.  Since the synthetic corpus, unlike a real
one, comes with ground truth, the same predictions are also scored
against the true labels.  The mean rate over trials is reported with a
normal-approximation 95% interval, mean +- 1.96 * sd / sqrt(trials).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .annotations import build_reference_map
from .mlp import TrainConfig, classify, init_network, make_belief_samples, train
from .synth import SynthCorpus
from .texture import extract24


@dataclass
class EvalReport:
    rates: list[float]
    mean: float
    ci_low: float
    ci_high: float
    trials: int
    truth_rates: list[float] | None = None
    truth_mean: float | None = None
    truth_ci_low: float | None = None
    truth_ci_high: float | None = None
    skipped_samples: int = 0
    config: dict = field(default_factory=dict)


def good_classification_rate(predicted, reference) -> float:
    """Fraction of positions where the two label sequences agree."""
    predicted = list(predicted)
    reference = list(reference)
    if not predicted:
        raise ValueError("empty label sequences")
    if len(predicted) != len(reference):
        raise ValueError(
            f"length mismatch: {len(predicted)} predictions, "
            f"{len(reference)} references"
        )
    hits = sum(p == r for p, r in zip(predicted, reference))
    return hits / len(predicted)


def confidence_interval(rates) -> tuple[float, float, float]:
    """Mean and normal-approximation 95% bounds of the per-trial rates."""
    rates = np.asarray(rates, dtype=np.float64)
    mean = float(rates.mean())
    if rates.size < 2:
        return mean, mean, mean
    half = 1.96 * float(rates.std(ddof=1)) / np.sqrt(rates.size)
    return mean, mean - half, mean + half


def split_indices(n: int, split: float, rng) -> tuple[np.ndarray, np.ndarray]:
    if n < 2:
        raise ValueError(f"too few tiles ({n}) to split")
    if not 0.0 < split < 1.0:
        raise ValueError(f"split fraction must be in (0, 1), got {split}")
    n_train = min(max(int(round(split * n)), 1), n - 1)
    perm = rng.permutation(n)
    return perm[:n_train], perm[n_train:]


def _standardize(train_rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = train_rows.mean(axis=0)
    scale = train_rows.std(axis=0)
    scale[scale == 0.0] = 1.0
    return mean, scale


def evaluate(
    corpus: SynthCorpus,
    rule: str = "pcr",
    trials: int = 30,
    split: float = 2.0 / 3.0,
    seed: int = 0,
    hidden: tuple[int, ...] = (30,),
    eta: float = 0.1,
    epochs: int = 100,
    init_range: float = 0.5,
    slope: float = 1.0,
    levels: int = 16,
    criterion: str = "betp",
    shadow_as_ignorance: str | None = None,
) -> EvalReport:
    """Run the repeated-split protocol on a corpus; deterministic per seed."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    frame = corpus.frame
    reference = build_reference_map(
        corpus.annotations, rule, criterion, shadow_as_ignorance=shadow_as_ignorance
    )
    ref_by_id = reference.labels()
    mass_by_id = reference.masses()

    tile_ids = [tile.tile_id for tile in corpus.tiles]
    features = np.array([extract24(tile, levels) for tile in corpus.tiles])
    ref_labels = [ref_by_id[tid] for tid in tile_ids]
    masses = [mass_by_id[tid] for tid in tile_ids]
    truth_labels = (
        [corpus.truth[tid] for tid in tile_ids] if corpus.truth else None
    )

    rates: list[float] = []
    truth_rates: list[float] = []
    total_skipped = 0
    sizes = (features.shape[1], *hidden, frame.size)
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        train_idx, test_idx = split_indices(len(tile_ids), split, rng)
        net_seed = int(rng.integers(1 << 31))

        mean, scale = _standardize(features[train_idx])
        scaled = (features - mean) / scale
        samples, skipped = make_belief_samples(
            scaled[train_idx], [masses[i] for i in train_idx]
        )
        total_skipped += skipped
        if not samples:
            raise ValueError("no usable training samples in this split")

        net = init_network(sizes, seed=net_seed, init_range=init_range, slope=slope)
        train(net, samples, TrainConfig(eta=eta, epochs=epochs, seed=net_seed))

        predicted = [classify(net, scaled[i], frame, criterion) for i in test_idx]
        rates.append(
            good_classification_rate(predicted, [ref_labels[i] for i in test_idx])
        )
        if truth_labels is not None:
            truth_rates.append(
                good_classification_rate(
                    predicted, [truth_labels[i] for i in test_idx]
                )
            )

    mean, lo, hi = confidence_interval(rates)
    report = EvalReport(
        rates=rates,
        mean=mean,
        ci_low=lo,
        ci_high=hi,
        trials=trials,
        skipped_samples=total_skipped,
        config={
            "rule": rule,
            "criterion": criterion,
            "split": split,
            "seed": seed,
            "hidden": list(hidden),
            "eta": eta,
            "epochs": epochs,
            "init_range": init_range,
            "slope": slope,
            "levels": levels,
            "ci_method": "normal_approx",
            "mean_conflict": reference.mean_conflict,
        },
    )
    if truth_labels is not None:
        t_mean, t_lo, t_hi = confidence_interval(truth_rates)
        report.truth_rates = truth_rates
        report.truth_mean = t_mean
        report.truth_ci_low = t_lo
        report.truth_ci_high = t_hi
    return report


def save_report_csv(report: EvalReport, path) -> None:
    """Per-trial rows then one self-describing summary line."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "rate", "truth_rate"])
        for i, rate in enumerate(report.rates, start=1):
            truth = (
                repr(report.truth_rates[i - 1])
                if report.truth_rates is not None
                else ""
            )
            writer.writerow([i, repr(rate), truth])
        summary = [
            "summary",
            f"mean={report.mean!r}",
            f"ci_low={report.ci_low!r}",
            f"ci_high={report.ci_high!r}",
            f"trials={report.trials}",
        ]
        if report.truth_mean is not None:
            summary.extend(
                [
                    f"truth_mean={report.truth_mean!r}",
                    f"truth_ci_low={report.truth_ci_low!r}",
                    f"truth_ci_high={report.truth_ci_high!r}",
                ]
            )
        writer.writerow(summary)
