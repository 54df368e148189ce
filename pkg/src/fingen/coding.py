"""
Injective variable-length codes over {1, 2, 3} with lengths tied to entropy.

Each class A gets a target length t = floor(-ln mu(A)), so 3^-t <= e * mu(A)
and the targets satisfy sum 3^-t <= e. Words are then handed out greedily.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .action import Partition
from .errors import DomainError

CODE_ALPHABET = "123"


def _neg_log(m: Fraction) -> float:
    # via numerator/denominator so tiny measures do not underflow
    return math.log(m.denominator) - math.log(m.numerator)


def krieger_lengths(measures: Sequence) -> list[int]:
    """Target lengths floor(-ln m) for measures sorted in decreasing order."""
    ms = [Fraction(m) for m in measures]
    if not ms:
        raise DomainError("no measures given")
    if any(m <= 0 for m in ms):
        raise DomainError("measures must be positive")
    if any(a < b for a, b in zip(ms, ms[1:])):
        raise DomainError("measures must be sorted in decreasing order")
    if sum(ms) != 1:
        raise DomainError(f"measures sum to {sum(ms)}, not 1")
    # -ln m is irrational for every rational m != 1, so a plain floor is exact
    # up to float rounding
    return [0 if m == 1 else math.floor(_neg_log(m)) for m in ms]


def kraft_sum(lengths: Sequence[int]) -> float:
    return float(sum(Fraction(1, 3**t) for t in lengths))


def word_at(index: int, length: int) -> str:
    """The ``index``-th word of the given length in lexicographic order."""
    if not 0 <= index < 3**length:
        raise DomainError(f"no word number {index} of length {length}")
    letters = []
    for _ in range(length):
        index, r = divmod(index, 3)
        letters.append(CODE_ALPHABET[r])
    return "".join(reversed(letters))


@dataclass(frozen=True)
class Code:
    """Injective assignment of words over {1,2,3} to partition classes."""

    words: dict[int, str]
    order: tuple[int, ...]
    targets: dict[int, int]

    def __getitem__(self, label: int) -> str:
        return self.words[label]

    def lengths(self) -> list[int]:
        return [len(self.words[lab]) for lab in self.order]

    def spillover(self) -> list[int]:
        """Classes whose word is longer than their target length."""
        return [lab for lab in self.order if len(self.words[lab]) > self.targets[lab]]


def class_order(partition: Partition) -> tuple[int, ...]:
    """Class ids by decreasing measure, ties broken by ascending id."""
    ms = partition.measures
    return tuple(sorted(ms, key=lambda lab: (-ms[lab], lab)))


def assign_code(partition: Partition) -> Code:
    """
    Give each class, in class_order, the least unused word of the least
    length >= its target. At most 3^l words exist at length l; a class that
    finds its length full moves up to the next length with room.
    """
    order = class_order(partition)
    ts = krieger_lengths([partition.measures[lab] for lab in order])
    used: dict[int, int] = {}
    words = {}
    for lab, t in zip(order, ts):
        length = t
        while used.get(length, 0) >= 3**length:
            length += 1
        words[lab] = word_at(used.get(length, 0), length)
        used[length] = used.get(length, 0) + 1
    return Code(words, order, dict(zip(order, ts)))


def average_length(code: Code, partition: Partition) -> Fraction:
    return sum(
        (len(code.words[lab]) * m for lab, m in partition.measures.items()),
        Fraction(0),
    )
