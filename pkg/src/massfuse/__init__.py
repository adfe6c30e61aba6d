"""Belief-function fusion of multi-expert annotations and belief-target MLPs.

The package turns per-tile expert opinions (class proportions weighted by
certainty) into mass functions, fuses them with conjunctive, Dubois-Prade
or proportional-conflict-redistribution rules into a decided reference
map, extracts co-occurrence texture features, and trains a sigmoid MLP
against targets derived from the fused masses.
"""

from ._kernels import BACKEND
from .belief import (
    FrameOfDiscernment,
    MassFunction,
    credibility,
    decide,
    mass_from_dict,
    mass_to_dict,
    pignistic,
    plausibility,
    validate_mass,
    vacuous,
)
from .combine import (
    auto_conflict,
    combine,
    conflict,
    conjunctive_combine,
    dubois_prade_combine,
    pcr_combine,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FrameOfDiscernment",
    "MassFunction",
    "auto_conflict",
    "combine",
    "conflict",
    "conjunctive_combine",
    "credibility",
    "decide",
    "dubois_prade_combine",
    "mass_from_dict",
    "mass_to_dict",
    "pcr_combine",
    "pignistic",
    "plausibility",
    "validate_mass",
    "vacuous",
]
