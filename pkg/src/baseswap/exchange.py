"""Basis pairs, symmetric exchanges, sequence validation and the BFS oracle.

A symmetric exchange (e, f) on a pair (first, second) moves e from the first
basis to the second and f the other way; it is valid when both resulting sets
are bases.  Sequences carry length (step count) and width (maximum number of
occurrences of any single element).  The BFS oracle searches the exchange
graph of a small matroid exhaustively and certifies optimal distances and
unreachability.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .matroid import Matroid, _as_frozen


class ExchangeStep(NamedTuple):
    e: int  # leaves the first basis, enters the second
    f: int  # leaves the second basis, enters the first

    def reversed(self) -> "ExchangeStep":
        return ExchangeStep(self.f, self.e)


class ExchangeSequence:
    """Immutable ordered list of exchange steps with width/length accounting."""

    def __init__(self, steps=()):
        self.steps = tuple(ExchangeStep(*s) for s in steps)

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def width(self) -> int:
        if not self.steps:
            return 0
        return max(self.occurrences().values())

    def occurrences(self) -> Counter:
        counts: Counter = Counter()
        for e, f in self.steps:
            counts[e] += 1
            counts[f] += 1
        return counts

    def uses(self, element: int) -> bool:
        return any(element in (e, f) for e, f in self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    def __add__(self, other) -> "ExchangeSequence":
        return ExchangeSequence(self.steps + tuple(other))

    def __eq__(self, other):
        return isinstance(other, ExchangeSequence) and self.steps == other.steps

    def __repr__(self):
        return f"ExchangeSequence({list(self.steps)})"

    def to_text(self) -> str:
        return "\n".join(f"{k}: {s.e} <-> {s.f}" for k, s in enumerate(self.steps))

    def to_json_obj(self, label=None) -> list:
        conv = label if label is not None else (lambda x: x)
        return [{"e": conv(s.e), "f": conv(s.f)} for s in self.steps]


@dataclass(frozen=True)
class BasisPair:
    """Ordered pair of bases of one matroid."""

    first: frozenset
    second: frozenset
    matroid: Optional[Matroid] = None

    @classmethod
    def of(cls, matroid: Matroid, first, second) -> "BasisPair":
        pair = cls(_as_frozen(first), _as_frozen(second), matroid)
        pair.validate()
        return pair

    def validate(self) -> None:
        if self.matroid is None:
            raise ValueError("pair has no matroid attached")
        for name, part in (("first", self.first), ("second", self.second)):
            if not self.matroid.is_basis(part):
                raise ValueError(f"{name} member is not a basis")

    def swapped(self) -> "BasisPair":
        return BasisPair(self.second, self.first, self.matroid)

    @property
    def union(self) -> frozenset:
        return self.first | self.second

    @property
    def common(self) -> frozenset:
        return self.first & self.second


class SequenceValidationError(Exception):
    """A step of a sequence is invalid; carries the failing index."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class ForbiddenElementError(SequenceValidationError):
    """A step touched an element of the forbidden set."""

    def __init__(self, index: int, element):
        super().__init__(index, f"forbidden element {element} used")
        self.element = element


def is_valid_exchange(pair: BasisPair, step: ExchangeStep) -> bool:
    """True when the step applies to the pair and both results are bases."""
    e, f = step
    if e not in pair.first - pair.second:
        return False
    if f not in pair.second - pair.first:
        return False
    m = pair.matroid
    return m.is_basis(pair.first - {e} | {f}) and m.is_basis(pair.second - {f} | {e})


def apply_step(pair: BasisPair, step: ExchangeStep) -> BasisPair:
    e, f = step
    return BasisPair(pair.first - {e} | {f}, pair.second - {f} | {e}, pair.matroid)


def apply_and_validate(pair: BasisPair, seq, forbidden=()) -> BasisPair:
    """Apply steps in order, checking validity and F-avoidance at each one."""
    avoid = _as_frozen(forbidden)
    current = pair
    for k, step in enumerate(seq):
        step = ExchangeStep(*step)
        if step.e in avoid or step.f in avoid:
            raise ForbiddenElementError(k, step.e if step.e in avoid else step.f)
        if not is_valid_exchange(current, step):
            raise SequenceValidationError(k, f"invalid exchange {step}")
        current = apply_step(current, step)
    return current


def compatible(x: BasisPair, y: BasisPair) -> bool:
    """Necessary condition for equivalence: multiset unions agree elementwise."""
    return x.common == y.common and x.union == y.union


UNREACHABLE = "unreachable"


class CapacityError(Exception):
    """Ground set too large for exhaustive search."""


class BfsResult(NamedTuple):
    distance: int
    sequence: ExchangeSequence


def bfs_oracle(
    m: Matroid,
    x: BasisPair,
    y: BasisPair,
    forbidden=(),
    monotone: bool = False,
    cap: int = 16,
):
    """Exhaustive breadth-first search over the exchange graph.

    Returns BfsResult(optimal distance, one optimal sequence) or the string
    UNREACHABLE.  States are canonicalized to the first basis: exchanges never
    move common elements and never change the union, so the second basis is
    determined by the first.  With ``monotone`` only steps shrinking the
    symmetric difference to the target first basis are taken; such a search
    returns exactly |X1 - Y1| steps when it succeeds.
    """
    if len(m.ground) > cap:
        raise CapacityError(f"|E| = {len(m.ground)} exceeds the BFS cap {cap}")
    if not compatible(x, y):
        return UNREACHABLE
    avoid = _as_frozen(forbidden)
    common = x.common
    live = tuple(sorted(x.union - common))
    target = frozenset(y.first - common)
    start = frozenset(x.first - common)

    parents = {start: None}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        if a == target:
            break
        others = [z for z in live if z not in a]
        for e in sorted(a):
            if e in avoid:
                continue
            if monotone and e in target:
                continue
            for f in others:
                if f in avoid:
                    continue
                if monotone and f not in target:
                    continue
                na = a - {e} | {f}
                if na in parents:
                    continue
                first = common | na
                second = common | (frozenset(live) - na)
                if m.is_basis(first) and m.is_basis(second):
                    parents[na] = (a, ExchangeStep(e, f))
                    queue.append(na)
    if target not in parents:
        return UNREACHABLE
    steps = []
    node = target
    while parents[node] is not None:
        node, step = parents[node]
        steps.append(step)
    steps.reverse()
    return BfsResult(len(steps), ExchangeSequence(steps))


def bfs_distances(m: Matroid, x: BasisPair, forbidden=(), monotone_to=None, cap: int = 16):
    """Distances from ``x`` to every reachable pair, keyed by first basis.

    Used by exhaustive sweeps over small matroids.  ``monotone_to`` restricts
    steps monotonically toward the given first-basis target.
    """
    if len(m.ground) > cap:
        raise CapacityError(f"|E| = {len(m.ground)} exceeds the BFS cap {cap}")
    avoid = _as_frozen(forbidden)
    common = x.common
    live = tuple(sorted(x.union - common))
    start = frozenset(x.first - common)
    target = None if monotone_to is None else frozenset(monotone_to) - common

    dist = {start: 0}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        others = [z for z in live if z not in a]
        for e in sorted(a):
            if e in avoid or (target is not None and e in target):
                continue
            for f in others:
                if f in avoid or (target is not None and f not in target):
                    continue
                na = a - {e} | {f}
                if na in dist:
                    continue
                first = common | na
                second = common | (frozenset(live) - na)
                if m.is_basis(first) and m.is_basis(second):
                    dist[na] = dist[a] + 1
                    queue.append(na)
    return {common | a: d for a, d in dist.items()}
