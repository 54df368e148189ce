"""
Partial bijections between two point sets built from group translations.

Given A and B, repeatedly take the enumeration-least group element h moving
some remaining point of A into the remaining part of B, match
A_rem ∩ h^-1 B_rem onto h A_rem ∩ B_rem, and remove both pieces. On a
transitive action this stops exactly when A or B is used up.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .action import FiniteAction, GroupElement, symmetry_classes
from .errors import ClauseViolation


@dataclass(frozen=True)
class Block:
    points: frozenset[int]
    h: GroupElement


@dataclass(frozen=True)
class PartialBijection:
    """x -> h.x on each block; the blocks partition ``source``."""

    source: frozenset[int]
    target: frozenset[int]
    blocks: tuple[Block, ...]

    @cached_property
    def mapping(self) -> dict[int, int]:
        return {x: b.h(x) for b in self.blocks for x in sorted(b.points)}

    @cached_property
    def inverse(self) -> dict[int, int]:
        return {y: x for x, y in self.mapping.items()}

    @cached_property
    def block_of(self) -> dict[int, int]:
        return {x: i for i, b in enumerate(self.blocks) for x in b.points}

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __len__(self):
        return len(self.source)


@dataclass(frozen=True)
class ExhaustStep:
    a_remainder: frozenset[int]
    b_remainder: frozenset[int]
    h: GroupElement | None
    q1: frozenset[int]
    q2: frozenset[int]


@dataclass(frozen=True)
class ExhaustTrace:
    steps: tuple[ExhaustStep, ...]
    a_terminal: frozenset[int]
    b_terminal: frozenset[int]

    @property
    def witnesses(self) -> list[GroupElement]:
        return [s.h for s in self.steps if s.h is not None]

    def as_records(self) -> list[dict]:
        return [
            {
                "witness": None if s.h is None else s.h.witness,
                "rank": None if s.h is None else s.h.rank,
                "a_remaining": len(s.a_remainder),
                "b_remaining": len(s.b_remainder),
                "matched": sorted(s.q1),
            }
            for s in self.steps
        ]


def _meets(action, A, B):
    orbit = action.orbit_index
    return bool({orbit[x] for x in A} & {orbit[y] for y in B})


def _least_h(action, A, B, start=0):
    """Enumeration-least element of rank >= start with h.A ∩ B nonempty."""
    if not A or not B or not _meets(action, A, B):
        return None
    for h in _iter_from(action, start):
        perm = h.perm
        if any(perm[x] in B for x in A):
            return h
    return None


def _iter_from(action, start):
    group = action.group
    i = start
    while True:
        h = group.get(i)
        if h is None:
            return
        yield h
        i += 1


def q_step(action: FiniteAction, A: Iterable[int], B: Iterable[int]):
    """
    One matching step: (h, Q1, Q2) with Q1 = A ∩ h^-1.B and Q2 = h.A ∩ B = h.Q1.

    h is None, and Q1 = Q2 = ∅, when no translate of A meets B.
    """
    A, B = frozenset(A), frozenset(B)
    h = _least_h(action, A, B)
    if h is None:
        return None, frozenset(), frozenset()
    q1 = frozenset(x for x in A if h.perm[x] in B)
    return h, q1, h.image(q1)


def exhaust(action: FiniteAction, A: Iterable[int], B: Iterable[int]):
    """
    Iterate q_step on the remainders until no translate of A_rem meets B_rem.

    Returns (PartialBijection, ExhaustTrace). After a step with witness h no
    element <= h can match the smaller remainders again, so the search for
    the next witness resumes just past h instead of restarting.
    """
    action.require_ergodic()
    A, B = frozenset(A), frozenset(B)
    a_rem, b_rem = A, B
    steps = []
    blocks = []
    start = 0
    while True:
        h = _least_h(action, a_rem, b_rem, start)
        if h is None:
            steps.append(ExhaustStep(a_rem, b_rem, None, frozenset(), frozenset()))
            break
        q1 = frozenset(x for x in a_rem if h.perm[x] in b_rem)
        q2 = h.image(q1)
        steps.append(ExhaustStep(a_rem, b_rem, h, q1, q2))
        blocks.append(Block(q1, h))
        a_rem, b_rem = a_rem - q1, b_rem - q2
        start = h.rank + 1
    bij = PartialBijection(A - a_rem, B - b_rem, tuple(blocks))
    return bij, ExhaustTrace(tuple(steps), a_rem, b_rem)


@dataclass(frozen=True)
class ClauseReport:
    symmetric_pairs: int
    steps: int
    checked: tuple[str, ...] = ("i", "ii", "iii", "iv", "v", "bijection", "monotone")


def check_clauses(action: FiniteAction, A: Iterable[int], B: Iterable[int], result) -> ClauseReport:
    """
    Verify the exhaustion output for (A, B) against all five clauses.

    ``result`` is the (PartialBijection, ExhaustTrace) pair from exhaust.
    Raises ClauseViolation on the first failure.
    """
    A, B = frozenset(A), frozenset(B)
    bij, trace = result
    P1, P2 = bij.source, bij.target
    psi = bij.mapping

    if not (P1 <= A and P2 <= B):
        raise ClauseViolation("i", "P1 not inside A or P2 not inside B")
    if (A - P1) and (B - P2):
        raise ClauseViolation("ii", f"{len(A - P1)} points of A and {len(B - P2)} of B left over")

    covered = set()
    for b in bij.blocks:
        if covered & b.points:
            raise ClauseViolation("bijection", "blocks overlap")
        covered |= b.points
    if covered != P1 or set(psi) != P1:
        raise ClauseViolation("bijection", "blocks do not cover P1")
    if len(set(psi.values())) != len(psi) or set(psi.values()) != P2:
        raise ClauseViolation("bijection", "psi is not a bijection onto P2")

    orbit = action.orbit_index
    for x, y in psi.items():
        if orbit[x] != orbit[y]:
            raise ClauseViolation("iv", f"psi({x}) = {y} leaves the orbit of {x}")

    ws = trace.witnesses
    for a, b in zip(ws, ws[1:]):
        if not a.rank < b.rank:
            raise ClauseViolation("monotone", f"witness {b.witness!r} does not follow {a.witness!r}")

    sym = symmetry_classes(action, [A, B])
    p1_sym = symmetry_classes(action, [P1]).labels
    p2_sym = symmetry_classes(action, [P2]).labels
    block_of = bij.block_of
    pairs = 0
    for cl in sym.classes.values():
        if len(cl) < 2:
            continue
        pts = sorted(cl)
        pairs += len(pts) * (len(pts) - 1) // 2
        x = pts[0]
        for y in pts[1:]:
            if p1_sym[x] != p1_sym[y]:
                raise ClauseViolation("iii", "not P1-symmetric", (x, y))
            if p2_sym[x] != p2_sym[y]:
                raise ClauseViolation("iii", "not P2-symmetric", (x, y))
        in_p1 = [p for p in pts if p in P1]
        for y in in_p1[1:]:
            if block_of[y] != block_of[in_p1[0]]:
                raise ClauseViolation("v", "moved by different translations", (in_p1[0], y))
    return ClauseReport(pairs, len(ws))
