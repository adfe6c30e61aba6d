"""Fully connected sigmoid network trained online against belief targets.

The network minimizes the quadratic error 0.5 * sum((d_i - s_i)^2) by
online gradient steps w <- w + eta * delta_out * activation_in, with the
output delta c * s * (1 - s) * (d - s) and hidden deltas backpropagated
through the pre-update weights.  The slope constant c multiplies the
sigmoid argument in the forward pass so the deltas are its exact
derivative chain.

Targets come from fused expert masses instead of one-hot labels: the
singleton masses are divided by the largest one, so the best-supported
class gets target 1 and the others their support ratio.  Network outputs
are read back as a mass function by zeroing the minimum output and
renormalizing by the sum, which keeps the argmax decision intact while
allowing belief-style decisions.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .belief import FrameOfDiscernment, MassFunction, decide


@dataclass
class Network:
    """Layered weights and biases; weights[l] has shape (below, above)."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    slope: float = 1.0

    def __post_init__(self):
        if not self.weights or len(self.weights) != len(self.biases):
            raise ValueError("weights and biases must pair up, one per layer")
        if self.slope <= 0:
            raise ValueError(f"slope must be positive, got {self.slope}")
        self.weights = [
            np.ascontiguousarray(w, dtype=np.float64) for w in self.weights
        ]
        self.biases = [np.ascontiguousarray(b, dtype=np.float64) for b in self.biases]
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[1] != b.shape[0]:
                raise ValueError(f"layer {k}: weight/bias shapes disagree")
            if k and self.weights[k - 1].shape[1] != w.shape[0]:
                raise ValueError(f"layer {k}: input size breaks the chain")
        if not all(np.isfinite(w).all() for w in self.weights) or not all(
            np.isfinite(b).all() for b in self.biases
        ):
            raise ValueError("network parameters must be finite")

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0], *(w.shape[1] for w in self.weights))


@dataclass
class TrainConfig:
    eta: float = 0.1
    epochs: int = 100
    seed: int = 0
    init_range: float = 0.5
    shuffle: bool = True

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError(f"learning rate must be >= 0, got {self.eta}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.init_range < 0:
            raise ValueError(f"init_range must be >= 0, got {self.init_range}")


@dataclass
class BeliefSample:
    """Feature vector paired with the fused mass it was annotated with."""

    features: np.ndarray
    target_bba: MassFunction
    target: np.ndarray = field(init=False)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.target = belief_targets(self.target_bba, self.target_bba.frame)


def init_network(
    sizes, seed: int = 0, init_range: float = 0.5, slope: float = 1.0
) -> Network:
    """Network with parameters drawn uniformly from [-init_range, init_range]."""
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) < 2:
        raise ValueError(f"need input and output layers at least, got {sizes}")
    if min(sizes) < 1:
        raise ValueError(f"layer sizes must be positive, got {sizes}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for below, above in zip(sizes, sizes[1:]):
        weights.append(rng.uniform(-init_range, init_range, size=(below, above)))
        biases.append(rng.uniform(-init_range, init_range, size=above))
    return Network(weights, biases, slope)


def forward(net: Network, x) -> np.ndarray:
    """Output activations for one input vector."""
    a = np.asarray(x, dtype=np.float64)
    if a.shape != (net.sizes[0],):
        raise ValueError(f"input shape {a.shape} does not match {net.sizes[0]} features")
    for w, b in zip(net.weights, net.biases):
        a = 1.0 / (1.0 + np.exp(-net.slope * (a @ w + b)))
    return a


def backprop_step(net: Network, x, d, eta: float) -> float:
    """One online update; returns the sample error before the update."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    d = np.ascontiguousarray(d, dtype=np.float64)
    if x.shape != (net.sizes[0],):
        raise ValueError(f"input shape {x.shape} does not match {net.sizes[0]} features")
    if d.shape != (net.sizes[-1],):
        raise ValueError(f"target shape {d.shape} does not match {net.sizes[-1]} outputs")
    order = np.zeros(1, dtype=np.intp)
    errors = _kernels.train_epoch(
        net.weights, net.biases, x[None, :], d[None, :], order, eta, net.slope
    )
    err = float(errors[0])
    if not np.isfinite(err):
        raise FloatingPointError("non-finite error during backpropagation")
    return err


def train(
    net: Network, samples: list[BeliefSample], cfg: TrainConfig
) -> tuple[Network, list[float]]:
    """Online training over epochs; returns the net and per-epoch mean error.

    Sample order is reshuffled every epoch from the seeded generator, so
    a fixed config reproduces the exact same weight trajectory.
    """
    if not samples:
        raise ValueError("empty training set")
    xs = np.ascontiguousarray([s.features for s in samples], dtype=np.float64)
    ds = np.ascontiguousarray([s.target for s in samples], dtype=np.float64)
    if xs.shape[1] != net.sizes[0] or ds.shape[1] != net.sizes[-1]:
        raise ValueError(
            f"samples of shape {xs.shape[1]}->{ds.shape[1]} do not fit network "
            f"{net.sizes[0]}->{net.sizes[-1]}"
        )
    rng = np.random.default_rng(cfg.seed)
    n = len(samples)
    trace = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n) if cfg.shuffle else np.arange(n)
        errors = _kernels.train_epoch(
            net.weights, net.biases, xs, ds, order.astype(np.intp), cfg.eta, net.slope
        )
        mean_err = float(errors.mean())
        if not np.isfinite(mean_err):
            raise FloatingPointError("training diverged to non-finite values")
        trace.append(mean_err)
    return net, trace


def belief_targets(m: MassFunction, frame: FrameOfDiscernment) -> np.ndarray:
    """Target vector from the singleton masses, scaled so the maximum is 1.

    Compound masses are ignored; a mass with no positive singleton is
    unusable as a training sample.
    """
    singles = np.array([m.mass(code) for code in frame.singletons()])
    top = singles.max()
    if top <= 0.0:
        raise ValueError("no singleton carries mass; sample unusable as a target")
    return singles / top


def outputs_to_mass(s, frame: FrameOfDiscernment) -> MassFunction:
    """Read output activations as a mass over the singletons.

    Every occurrence of the minimum output is zeroed and the rest divided
    by their sum.  All-equal outputs are degenerate: the uniform mass is
    returned and a warning issued.
    """
    s = np.asarray(s, dtype=np.float64)
    k = frame.size
    if k < 2:
        raise ValueError("need at least two output classes")
    if s.shape != (k,):
        raise ValueError(f"expected {k} outputs, got shape {s.shape}")
    low = s.min()
    if s.max() == low:
        warnings.warn("all network outputs equal; falling back to the uniform mass")
        values = np.full(k, 1.0 / k)
    else:
        values = np.where(s == low, 0.0, s)
        values = values / values.sum()
    return MassFunction(
        frame,
        {code: float(v) for code, v in zip(frame.singletons(), values) if v > 0.0},
    )


def classify(net: Network, x, frame: FrameOfDiscernment, criterion: str = "betp") -> str:
    """Forward pass, mass reading, then a singleton decision."""
    outputs = forward(net, x)
    m = outputs_to_mass(outputs, frame)
    code = decide(m, criterion, frame.singletons())
    return frame.members(code)[0]


def make_belief_samples(
    features: np.ndarray,
    masses: list[MassFunction],
) -> tuple[list[BeliefSample], int]:
    """Pair feature rows with fused masses, skipping unusable targets.

    Returns the samples and the number skipped for lack of singleton mass.
    """
    features = np.asarray(features, dtype=np.float64)
    if len(features) != len(masses):
        raise ValueError("features and masses must align")
    samples, skipped = [], 0
    for row, m in zip(features, masses):
        try:
            samples.append(BeliefSample(row, m))
        except ValueError:
            skipped += 1
    return samples, skipped


# ---------------------------------------------------------------------------
# model file


def save_model(
    path,
    net: Network,
    labels: list[str] | None = None,
    norm: tuple[np.ndarray, np.ndarray] | None = None,
) -> None:
    """Write the model as JSON: sizes, c, row-major weights, biases.

    ``labels`` (output class names) and ``norm`` (feature mean and scale
    applied before the input layer) are optional extras used by the CLI.
    """
    payload = {
        "sizes": list(net.sizes),
        "c": net.slope,
        "weights": [w.ravel(order="C").tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
    }
    if labels is not None:
        payload["labels"] = list(labels)
    if norm is not None:
        payload["norm"] = {
            "mean": np.asarray(norm[0], dtype=np.float64).tolist(),
            "scale": np.asarray(norm[1], dtype=np.float64).tolist(),
        }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_model(path):
    """Read a model file; returns (net, labels or None, norm or None)."""
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    try:
        sizes = [int(s) for s in obj["sizes"]]
        slope = float(obj["c"])
        weights = [
            np.array(flat, dtype=np.float64).reshape(below, above)
            for flat, below, above in zip(obj["weights"], sizes, sizes[1:])
        ]
        biases = [np.array(b, dtype=np.float64) for b in obj["biases"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model file: {exc}") from None
    net = Network(weights, biases, slope)
    labels = obj.get("labels")
    norm = None
    if "norm" in obj:
        norm = (
            np.array(obj["norm"]["mean"], dtype=np.float64),
            np.array(obj["norm"]["scale"], dtype=np.float64),
        )
    return net, labels, norm
