"""Pure-numpy fallback implementations of the hot kernels."""

import numpy as np


def glcm_counts(quantized, drow, dcol, levels):
    """Symmetrized pair counts at offset (drow, dcol), unnormalized."""
    h, w = quantized.shape
    r0, r1 = max(0, -drow), h - max(0, drow)
    c0, c1 = max(0, -dcol), w - max(0, dcol)
    counts = np.zeros((levels, levels), dtype=np.float64)
    if r1 <= r0 or c1 <= c0:
        return counts
    a = quantized[r0:r1, c0:c1].astype(np.intp).ravel()
    b = quantized[r0 + drow : r1 + drow, c0 + dcol : c1 + dcol].astype(np.intp).ravel()
    flat = np.bincount(a * levels + b, minlength=levels * levels)
    counts += flat.reshape(levels, levels)
    return counts + counts.T


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def train_epoch(weights, biases, inputs, targets, order, eta, slope):
    """Online backprop pass; updates weights/biases in place.

    errors[t] is the quadratic error 0.5 * sum((d - s)^2) of sample
    order[t] measured before that sample's update.
    """
    n_layers = len(weights)
    errors = np.empty(len(order), dtype=np.float64)
    for t, idx in enumerate(order):
        acts = [inputs[idx]]
        for w, b in zip(weights, biases):
            acts.append(_sigmoid(slope * (acts[-1] @ w + b)))
        out = acts[-1]
        diff = targets[idx] - out
        errors[t] = 0.5 * float(diff @ diff)
        delta = slope * out * (1.0 - out) * diff
        for layer in range(n_layers - 1, -1, -1):
            below = acts[layer]
            if layer > 0:
                # deltas propagate through the pre-update weights
                delta_below = slope * below * (1.0 - below) * (weights[layer] @ delta)
            weights[layer] += eta * np.outer(below, delta)
            biases[layer] += eta * delta
            if layer > 0:
                delta = delta_below
    return errors
