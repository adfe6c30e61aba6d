import numpy as np
import pytest

from massfuse.belief import FrameOfDiscernment, MassFunction


@pytest.fixture
def frame_ab():
    return FrameOfDiscernment(["A", "B"])


@pytest.fixture
def two_expert_masses(frame_ab):
    """The running two-source example: one source sure of A at 0.6, the
    other splitting A/B evenly with certainties 0.6 and 0.4."""
    a = frame_ab.singleton("A")
    b = frame_ab.singleton("B")
    theta = frame_ab.theta
    m1 = MassFunction(frame_ab, {a: 0.6, theta: 0.4})
    m2 = MassFunction(frame_ab, {a: 0.3, b: 0.2, theta: 0.5})
    return m1, m2


def random_mass(rng, frame, max_focals=4, allow_empty=False):
    """Random valid bba over ``frame`` with at most ``max_focals`` focal sets."""
    lo = 0 if allow_empty else 1
    codes = np.arange(lo, frame.theta + 1)
    k = int(rng.integers(1, min(max_focals, len(codes)) + 1))
    chosen = rng.choice(codes, size=k, replace=False)
    weights = rng.random(k) + 1e-3
    weights /= weights.sum()
    return MassFunction(frame, {int(c): float(w) for c, w in zip(chosen, weights)})
