"""Numerical kernels for the hot loops, with backend selection at import.

Two interchangeable backends implement the same two functions:

``glcm_counts(quantized, drow, dcol, levels)``
    Symmetrized co-occurrence counts of a quantized gray tile.

``train_epoch(weights, biases, inputs, targets, order, eta, slope)``
    One pass of online sigmoid backpropagation over the samples in
    ``order``, updating the parameter arrays in place and returning the
    pre-update quadratic error of each visited sample.

The compiled Cython backend is used when the extension built; otherwise
the pure-numpy fallback takes over. Set ``MASSFUSE_PURE_PYTHON=1`` to
force the fallback (useful for benchmarking the two against each other).
"""

import os

from . import _pure

if os.environ.get("MASSFUSE_PURE_PYTHON"):
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pure
        BACKEND = "python"

glcm_counts = _impl.glcm_counts
train_epoch = _impl.train_epoch


def available_backends():
    """Names of the importable backends ("python" is always present)."""
    names = ["python"]
    try:
        from . import _fast  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get_backend(name):
    if name == "python":
        return _pure
    if name == "cython":
        from . import _fast

        return _fast
    raise ValueError(f"unknown kernel backend {name!r}")
