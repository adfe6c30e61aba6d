"""Combination rules for mass functions from two or more sources.

All three rules enumerate tuples of focal elements, one per source,
directly in their M-ary form; the proportional-conflict rule in
particular is not associative, so folding binary combinations would
change its result.  The conjunctive rule keeps the conflicting mass on
the empty set (open world); the Dubois-Prade rule transfers each
conflicting product onto the union of the sets that produced it; the
proportional rule splits it among them in proportion to their masses.
"""

from __future__ import annotations

from itertools import product
from collections.abc import Sequence

from .belief import DUST, MassFunction, _require_valid

RULE_ALIASES = {
    "conjunctive": "conjunctive",
    "dp": "dubois_prade",
    "dubois_prade": "dubois_prade",
    "pcr": "pcr",
}


def _check_inputs(
    ms: Sequence[MassFunction], min_count: int = 2, allow_empty_set: bool = True
) -> None:
    if len(ms) < min_count:
        raise ValueError(f"need at least {min_count} mass functions, got {len(ms)}")
    frame = ms[0].frame
    for m in ms[1:]:
        if m.frame != frame:
            raise ValueError("mass functions live on different frames")
    if not allow_empty_set:
        for i, m in enumerate(ms):
            if m.mass(0) > 0.0:
                raise ValueError(
                    f"input {i} puts mass {m.mass(0)} on the empty set; "
                    "this rule is undefined there"
                )
    for m in ms:
        _require_valid(m, "combination")


def _finalize(frame, acc: dict[int, float]) -> MassFunction:
    # prune floating-point dust, then renormalize so the output sums to 1
    kept = {code: v for code, v in acc.items() if v >= DUST}
    total = sum(kept.values())
    return MassFunction(frame, {code: v / total for code, v in kept.items()})


def conjunctive_combine(ms: Sequence[MassFunction]) -> MassFunction:
    """Unnormalized conjunctive rule.

    The product of the masses of every focal tuple accumulates on the
    intersection of the tuple; conflicting tuples (empty intersection)
    accumulate on the empty set, so the output is a valid open-world
    mass function summing to one.
    """
    _check_inputs(ms)
    frame = ms[0].frame
    acc: dict[int, float] = {}
    for combo in product(*(tuple(m.items()) for m in ms)):
        inter = frame.theta
        prod = 1.0
        for code, value in combo:
            inter &= code
            prod *= value
        acc[inter] = acc.get(inter, 0.0) + prod
    return _finalize(frame, acc)


def dubois_prade_combine(ms: Sequence[MassFunction]) -> MassFunction:
    """Mixed conjunctive / disjunctive rule.

    Non-conflicting tuples contribute to their intersection as in the
    conjunctive rule; a conflicting tuple transfers its product to the
    union of its focal sets instead, so no mass lands on the empty set.
    Inputs must not put mass on the empty set.
    """
    _check_inputs(ms, allow_empty_set=False)
    frame = ms[0].frame
    acc: dict[int, float] = {}
    for combo in product(*(tuple(m.items()) for m in ms)):
        inter = frame.theta
        union = 0
        prod = 1.0
        for code, value in combo:
            inter &= code
            union |= code
            prod *= value
        target = inter if inter else union
        acc[target] = acc.get(target, 0.0) + prod
    return _finalize(frame, acc)


def pcr_combine(ms: Sequence[MassFunction]) -> MassFunction:
    """Generalized proportional conflict redistribution for M sources.

    Starts from the conjunctive result without its empty-set mass; each
    conflicting tuple's product is then given back to the focal sets
    involved, in proportion to the mass each source put on its own set.
    The per-source share works out to m_i(Y_i) * product / sum(masses in
    the tuple), which is exactly the stated redistribution with the
    denominator m_i(X) + sum of the other sources' masses.  Tuples whose
    mass sum is zero are skipped, as the rule requires a non-null
    denominator; with strictly positive stored masses this cannot occur.
    """
    _check_inputs(ms, allow_empty_set=False)
    frame = ms[0].frame
    acc: dict[int, float] = {}
    for combo in product(*(tuple(m.items()) for m in ms)):
        inter = frame.theta
        prod = 1.0
        for code, value in combo:
            inter &= code
            prod *= value
        if inter:
            acc[inter] = acc.get(inter, 0.0) + prod
            continue
        denom = sum(value for _, value in combo)
        if denom <= 0.0:
            continue
        for code, value in combo:
            acc[code] = acc.get(code, 0.0) + value * prod / denom
    return _finalize(frame, acc)


_RULE_FUNCS = {
    "conjunctive": conjunctive_combine,
    "dubois_prade": dubois_prade_combine,
    "pcr": pcr_combine,
}


def combine(ms: Sequence[MassFunction], rule: str) -> MassFunction:
    """Apply a combination rule by name (``conjunctive``, ``dp``, ``pcr``)."""
    try:
        func = _RULE_FUNCS[RULE_ALIASES[rule]]
    except KeyError:
        raise ValueError(
            f"unknown combination rule {rule!r}; expected one of {sorted(RULE_ALIASES)}"
        ) from None
    return func(ms)


def conflict(ms: Sequence[MassFunction]) -> float:
    """Mass that the conjunctive combination assigns to the empty set."""
    return conjunctive_combine(ms).mass(0)


def auto_conflict(m: MassFunction, order: int = 2) -> float:
    """Conflict of ``order`` copies of one source combined with itself.

    Measures the intrinsic inconsistency of a single mass function; it is
    non-decreasing in the order.
    """
    if order < 2:
        raise ValueError(f"auto-conflict needs order >= 2, got {order}")
    return conflict([m] * order)
