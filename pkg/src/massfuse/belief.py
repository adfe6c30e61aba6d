"""Frames of discernment, mass functions and the belief transforms.

Subsets of a frame are encoded as integer bit codes over its ordered
labels: bit ``i`` is set when the ``i``-th label belongs to the subset,
``0`` is the empty set and ``(1 << N) - 1`` is the whole frame.  A mass
function stores strictly positive masses for its focal sets only; mass
on the empty set is allowed (open-world convention), so combination
rules can leave conflict unnormalized.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping

MAX_FRAME_SIZE = 16

#: tolerance on the unit-sum constraint of a mass function
SUM_TOL = 1e-9

#: masses below this are pruned (and the rest renormalized) after combination
DUST = 1e-12

EMPTY_SET_KEY = "{}"

DECISION_CRITERIA = ("betp", "bel", "pl")


class FrameOfDiscernment:
    """Ordered, immutable set of class labels defining the subset encoding.

    At most 16 labels, so every subset fits a 16-bit code and exhaustive
    enumeration of the power set stays cheap.
    """

    __slots__ = ("_labels", "_index")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if not labels:
            raise ValueError("frame needs at least one label")
        if len(labels) > MAX_FRAME_SIZE:
            raise ValueError(
                f"frame holds {len(labels)} labels, maximum is {MAX_FRAME_SIZE}"
            )
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise ValueError(f"labels must be non-empty strings, got {lab!r}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in frame: {labels}")
        self._labels = labels
        self._index = {lab: i for i, lab in enumerate(labels)}

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def size(self) -> int:
        return len(self._labels)

    @property
    def theta(self) -> int:
        """Code of the whole frame."""
        return (1 << len(self._labels)) - 1

    def __len__(self) -> int:
        return len(self._labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, FrameOfDiscernment) and self._labels == other._labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        return f"FrameOfDiscernment({list(self._labels)!r})"

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def check_code(self, code: int) -> int:
        """Validate that ``code`` encodes a subset of this frame."""
        if not isinstance(code, int) or not 0 <= code <= self.theta:
            raise ValueError(f"subset code {code!r} outside frame of size {self.size}")
        return code

    def singleton(self, label: str) -> int:
        try:
            return 1 << self._index[label]
        except KeyError:
            raise ValueError(f"label {label!r} not in frame {self._labels}") from None

    def singletons(self) -> tuple[int, ...]:
        """Codes of the one-element subsets, in frame order."""
        return tuple(1 << i for i in range(self.size))

    def code(self, labels: Iterable[str]) -> int:
        """Subset code of a collection of labels."""
        bits = 0
        for lab in labels:
            bits |= self.singleton(lab)
        return bits

    def members(self, code: int) -> tuple[str, ...]:
        """Labels of a subset code, in frame order."""
        self.check_code(code)
        return tuple(lab for i, lab in enumerate(self._labels) if code >> i & 1)

    def subset_key(self, code: int) -> str:
        """Serialization key: ``"|"``-joined labels, ``"{}"`` for the empty set."""
        members = self.members(code)
        return "|".join(members) if members else EMPTY_SET_KEY

    def parse_key(self, key: str) -> int:
        if key == EMPTY_SET_KEY:
            return 0
        return self.code(key.split("|"))


class MassFunction:
    """Sparse mapping from subset codes to masses over one frame.

    Construction keeps the given masses as-is apart from dropping exact
    zeros; call :func:`validate_mass` to check the unit-sum and
    positivity invariants.  Instances are treated as immutable: all
    operations return new values.
    """

    __slots__ = ("_frame", "_masses")

    def __init__(self, frame: FrameOfDiscernment, masses: Mapping[int, float]):
        for code in masses:
            frame.check_code(code)
        self._frame = frame
        self._masses = {
            code: float(masses[code]) for code in sorted(masses) if masses[code] != 0.0
        }

    @property
    def frame(self) -> FrameOfDiscernment:
        return self._frame

    def mass(self, code: int) -> float:
        """Mass of a subset code (0 for non-focal sets)."""
        self._frame.check_code(code)
        return self._masses.get(code, 0.0)

    def __getitem__(self, code: int) -> float:
        return self.mass(code)

    def items(self):
        """(code, mass) pairs in increasing code order."""
        return iter(self._masses.items())

    def focal_sets(self) -> tuple[int, ...]:
        return tuple(self._masses)

    def as_dict(self) -> dict[int, float]:
        return dict(self._masses)

    def total(self) -> float:
        return sum(self._masses.values())

    def __len__(self) -> int:
        return len(self._masses)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MassFunction)
            and self._frame == other._frame
            and self._masses == other._masses
        )

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{self._frame.subset_key(c)}: {v:.6g}" for c, v in self._masses.items()
        )
        return f"MassFunction({{{inner}}})"


def vacuous(frame: FrameOfDiscernment) -> MassFunction:
    """Total ignorance: all mass on the whole frame."""
    return MassFunction(frame, {frame.theta: 1.0})


def validate_mass(m: MassFunction) -> list[str]:
    """Check the mass-function invariants; returns one message per violation.

    An empty list means the function is a valid basic belief assignment:
    every stored mass is strictly positive and the masses sum to one
    within ``SUM_TOL``.  Mass on the empty set is not a violation.
    """
    violations = []
    for code, value in m.items():
        if value <= 0.0:
            violations.append(
                f"non-positive mass {value!r} on {m.frame.subset_key(code)}"
            )
    total = m.total()
    if abs(total - 1.0) > SUM_TOL:
        violations.append(f"sum={total!r}")
    return violations


def _require_valid(m: MassFunction, what: str) -> None:
    violations = validate_mass(m)
    if violations:
        raise ValueError(f"invalid mass function for {what}: {'; '.join(violations)}")


def credibility(m: MassFunction, code: int) -> float:
    """Sum of masses of the non-empty subsets of ``code``."""
    m.frame.check_code(code)
    return sum(v for y, v in m.items() if y != 0 and y & ~code == 0)


def plausibility(m: MassFunction, code: int) -> float:
    """Sum of masses of the subsets intersecting ``code``."""
    m.frame.check_code(code)
    return sum(v for y, v in m.items() if y & code)


def pignistic(m: MassFunction, code: int) -> float:
    """Pignistic probability of ``code``.

    Each focal mass is split uniformly over its elements and the empty-set
    mass is renormalized away:

        betP(X) = sum over non-empty Y of |X ∩ Y| / |Y| * m(Y) / (1 - m(0))
    """
    m.frame.check_code(code)
    if code == 0:
        raise ValueError("pignistic probability is undefined on the empty set")
    conflict = m.mass(0)
    if 1.0 - conflict <= 0.0:
        raise ValueError("total conflict: all mass on the empty set")
    acc = 0.0
    for y, v in m.items():
        if y == 0:
            continue
        acc += (code & y).bit_count() / y.bit_count() * v
    return acc / (1.0 - conflict)


_CRITERION_FUNCS = {"betp": pignistic, "bel": credibility, "pl": plausibility}


def decide(
    m: MassFunction,
    criterion: str = "betp",
    candidates: Iterable[int] | None = None,
) -> int:
    """Candidate subset maximizing the criterion; ties go to the lowest code.

    ``candidates`` defaults to the singletons of the frame.  Accepted
    criteria: ``betp``, ``bel``, ``pl``.
    """
    if criterion not in _CRITERION_FUNCS:
        raise ValueError(f"unknown decision criterion {criterion!r}")
    func = _CRITERION_FUNCS[criterion]
    if candidates is None:
        candidates = m.frame.singletons()
    pool = sorted(set(candidates))
    if not pool:
        raise ValueError("empty candidate set")
    if pool[0] == 0:
        raise ValueError("the empty set cannot be a decision candidate")
    best = pool[0]
    best_value = func(m, best)
    for code in pool[1:]:
        value = func(m, code)
        if value > best_value:
            best, best_value = code, value
    return best


def mass_to_dict(m: MassFunction) -> dict:
    """JSON-ready form: ``{"frame": [...], "masses": {"A|B": 0.4, ...}}``."""
    return {
        "frame": list(m.frame.labels),
        "masses": {m.frame.subset_key(code): value for code, value in m.items()},
    }


def mass_from_dict(obj: Mapping) -> MassFunction:
    try:
        frame = FrameOfDiscernment(obj["frame"])
        raw = obj["masses"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed mass-function object: {exc}") from None
    masses: dict[int, float] = {}
    for key, value in raw.items():
        code = frame.parse_key(key)
        if code in masses:
            raise ValueError(f"duplicate subset key {key!r}")
        masses[code] = float(value)
    return MassFunction(frame, masses)


def save_mass(m: MassFunction, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(mass_to_dict(m), fh, indent=2)
        fh.write("\n")


def load_mass(path) -> MassFunction:
    with open(path, encoding="utf-8") as fh:
        return mass_from_dict(json.load(fh))
