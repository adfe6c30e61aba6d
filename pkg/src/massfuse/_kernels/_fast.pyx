# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels (see _pure.py for the
reference semantics; the two backends must agree to rounding)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

cnp.import_array()


def glcm_counts(quantized, Py_ssize_t drow, Py_ssize_t dcol, Py_ssize_t levels):
    """Symmetrized pair counts at offset (drow, dcol), unnormalized."""
    cdef const unsigned char[:, ::1] q = np.ascontiguousarray(quantized, dtype=np.uint8)
    counts_arr = np.zeros((levels, levels), dtype=np.float64)
    cdef double[:, ::1] counts = counts_arr
    cdef Py_ssize_t h = q.shape[0], w = q.shape[1]
    cdef Py_ssize_t r0 = -drow if drow < 0 else 0
    cdef Py_ssize_t r1 = h - (drow if drow > 0 else 0)
    cdef Py_ssize_t c0 = -dcol if dcol < 0 else 0
    cdef Py_ssize_t c1 = w - (dcol if dcol > 0 else 0)
    cdef Py_ssize_t r, c, a, b
    if r1 <= r0 or c1 <= c0:
        return counts_arr
    with nogil:
        for r in range(r0, r1):
            for c in range(c0, c1):
                a = q[r, c]
                b = q[r + drow, c + dcol]
                counts[a, b] += 1.0
                counts[b, a] += 1.0
    return counts_arr


cdef void _forward_layer(const double[:, ::1] w, const double[::1] b,
                         const double[::1] a_in, double[::1] a_out,
                         double slope) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double z
    for j in range(w.shape[1]):
        z = b[j]
        for i in range(w.shape[0]):
            z += a_in[i] * w[i, j]
        a_out[j] = 1.0 / (1.0 + exp(-slope * z))


cdef void _hidden_delta(const double[:, ::1] w, const double[::1] delta_above,
                        const double[::1] a, double[::1] delta_out,
                        double slope) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double back
    for i in range(w.shape[0]):
        back = 0.0
        for j in range(w.shape[1]):
            back += delta_above[j] * w[i, j]
        delta_out[i] = slope * a[i] * (1.0 - a[i]) * back


cdef void _apply_update(double[:, ::1] w, double[::1] b, const double[::1] a_in,
                        const double[::1] delta, double eta) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double scaled
    for i in range(w.shape[0]):
        scaled = eta * a_in[i]
        for j in range(w.shape[1]):
            w[i, j] += scaled * delta[j]
    for j in range(w.shape[1]):
        b[j] += eta * delta[j]


def train_epoch(list weights, list biases, double[:, ::1] inputs,
                double[:, ::1] targets, Py_ssize_t[::1] order,
                double eta, double slope):
    """Online backprop pass; updates weights/biases in place.

    errors[t] is the quadratic error 0.5 * sum((d - s)^2) of sample
    order[t] measured before that sample's update.
    """
    cdef Py_ssize_t n_layers = len(weights)
    cdef Py_ssize_t t, idx, layer, j
    cdef double diff, err

    # per-layer activation and delta buffers (layer 0 holds the input copy)
    acts = [np.empty(inputs.shape[1], dtype=np.float64)]
    deltas = [None]
    for layer in range(n_layers):
        size = (<object>weights[layer]).shape[1]
        acts.append(np.empty(size, dtype=np.float64))
        deltas.append(np.empty(size, dtype=np.float64))

    errors_arr = np.empty(order.shape[0], dtype=np.float64)
    cdef double[::1] errors = errors_arr
    cdef double[::1] a_in, a_out, delta, x
    cdef double[:, ::1] w

    for t in range(order.shape[0]):
        idx = order[t]
        a_in = acts[0]
        with nogil:
            for j in range(inputs.shape[1]):
                a_in[j] = inputs[idx, j]
        for layer in range(n_layers):
            _forward_layer(weights[layer], biases[layer], acts[layer],
                           acts[layer + 1], slope)
        a_out = acts[n_layers]
        delta = deltas[n_layers]
        err = 0.0
        with nogil:
            for j in range(a_out.shape[0]):
                diff = targets[idx, j] - a_out[j]
                err += 0.5 * diff * diff
                delta[j] = slope * a_out[j] * (1.0 - a_out[j]) * diff
        errors[t] = err
        for layer in range(n_layers - 1, -1, -1):
            if layer > 0:
                # deltas propagate through the pre-update weights
                _hidden_delta(weights[layer], deltas[layer + 1], acts[layer],
                              deltas[layer], slope)
            _apply_update(weights[layer], biases[layer], acts[layer],
                          deltas[layer + 1], eta)
    return errors_arr
