"""
Finite measure-preserving group actions.

A finite set {0, ..., N-1} with the uniform measure, acted on by the group
generated by a list of permutations. Everything here is exact: measures are
Fractions and "measure zero" means empty.

Group elements are ordered by their shortlex-least witness word over the
alphabet g1 < g1^-1 < g2 < g2^-1 < ... . A word l1 l2 ... lk denotes the
product l1 * l2 * ... * lk, so lk acts first.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, NonErgodic

Perm = tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """Return p * q, the permutation x -> p[q[x]]."""
    return tuple(p[i] for i in q)


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def is_permutation(p: Sequence[int], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


def _default_names(k):
    letters = "abcdefghijklmnopqrstuvwxyz"
    if k <= len(letters):
        return tuple(letters[:k])
    return tuple(f"g{i + 1}" for i in range(k))


def _inverse_name(name):
    if len(name) == 1 and name.isalpha():
        return name.swapcase()
    return f"{name}^-1"


@dataclass(frozen=True)
class FiniteAction:
    """A finite set of ``point_count`` points with one permutation per generator."""

    point_count: int
    generators: tuple[Perm, ...]
    generator_names: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.point_count
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"point_count must be a positive integer, got {n!r}")
        gens = tuple(tuple(int(v) for v in g) for g in self.generators)
        for i, g in enumerate(gens):
            if not is_permutation(g, n):
                raise DomainError(f"generator {i} is not a permutation of 0..{n - 1}")
        names = tuple(self.generator_names) or _default_names(len(gens))
        if len(names) != len(gens):
            raise DomainError("generator_names must match generators in length")
        if len(set(names)) != len(names):
            raise DomainError("generator names must be distinct")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "generator_names", names)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.point_count))

    @cached_property
    def letters(self) -> tuple[Perm, ...]:
        """The word alphabet in order g1, g1^-1, g2, g2^-1, ..."""
        out = []
        for g in self.generators:
            out.append(g)
            out.append(invert(g))
        return tuple(out)

    @cached_property
    def letter_names(self) -> tuple[str, ...]:
        out = []
        for name in self.generator_names:
            out.append(name)
            out.append(_inverse_name(name))
        return tuple(out)

    def word_string(self, word: Sequence[int]) -> str:
        names = self.letter_names
        if all(len(names[i]) == 1 for i in word):
            return "".join(names[i] for i in word)
        return ".".join(names[i] for i in word)

    def evaluate(self, word: Sequence[int]) -> Perm:
        p = self.identity
        for letter in word:
            p = compose(p, self.letters[letter])
        return p

    @cached_property
    def orbits(self) -> tuple[frozenset[int], ...]:
        """Orbits of the action, ordered by least element."""
        seen = [False] * self.point_count
        out = []
        for start in range(self.point_count):
            if seen[start]:
                continue
            seen[start] = True
            orbit = [start]
            stack = [start]
            while stack:
                x = stack.pop()
                for g in self.generators:
                    y = g[x]
                    if not seen[y]:
                        seen[y] = True
                        orbit.append(y)
                        stack.append(y)
            out.append(frozenset(orbit))
        return tuple(out)

    @property
    def ergodic(self) -> bool:
        # uniform measure: ergodic iff transitive
        return len(self.orbits) == 1

    @cached_property
    def orbit_index(self) -> tuple[int, ...]:
        idx = [0] * self.point_count
        for i, orbit in enumerate(self.orbits):
            for x in orbit:
                idx[x] = i
        return tuple(idx)

    @cached_property
    def group(self) -> GroupEnumeration:
        return GroupEnumeration(self)

    @cached_property
    def _pair_orbit_roots(self):
        return _pair_orbits(self)

    def require_ergodic(self):
        if not self.ergodic:
            raise NonErgodic(
                f"action on {self.point_count} points has {len(self.orbits)} orbits"
            )


def orbits(action: FiniteAction) -> list[frozenset[int]]:
    return list(action.orbits)


def is_ergodic(action: FiniteAction) -> bool:
    return action.ergodic


@dataclass(frozen=True)
class GroupElement:
    """A permutation in the image group, tagged with its shortlex-least witness."""

    perm: Perm
    word: tuple[int, ...] = field(compare=False)
    rank: int = field(compare=False)
    witness: str = field(compare=False, default="")

    def __call__(self, x: int) -> int:
        return self.perm[x]

    def __lt__(self, other: GroupElement) -> bool:
        return self.rank < other.rank

    @cached_property
    def inverse_perm(self) -> Perm:
        return invert(self.perm)

    def image(self, points: Iterable[int]) -> frozenset[int]:
        return frozenset(self.perm[x] for x in points)

    def preimage(self, points: Iterable[int]) -> frozenset[int]:
        inv = self.inverse_perm
        return frozenset(inv[x] for x in points)

    @property
    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.perm))


class GroupEnumeration:
    """
    Lazy, memoized enumeration of the image group in shortlex-witness order.

    Breadth-first search over words, keeping only the first word that reaches
    each permutation. Every prefix of a shortlex-least word is itself
    shortlex-least, so expanding minimal words in FIFO order, with letters in
    alphabet order, discovers each element with its minimal witness and in
    increasing order.
    """

    def __init__(self, action: FiniteAction):
        self.action = action
        ident = action.identity
        self._elements = [GroupElement(ident, (), 0, "")]
        self._index = {ident: 0}
        self._queue = deque([0])

    def __len__(self):
        """Number of elements discovered so far (not the group order)."""
        return len(self._elements)

    @property
    def complete(self) -> bool:
        return not self._queue

    def _grow(self) -> bool:
        action = self.action
        while self._queue:
            parent = self._elements[self._queue.popleft()]
            added = False
            for letter, lp in enumerate(action.letters):
                perm = compose(parent.perm, lp)
                if perm in self._index:
                    continue
                word = parent.word + (letter,)
                el = GroupElement(perm, word, len(self._elements), action.word_string(word))
                self._index[perm] = el.rank
                self._elements.append(el)
                self._queue.append(el.rank)
                added = True
            if added:
                return True
        return False

    def get(self, i: int) -> GroupElement | None:
        while i >= len(self._elements):
            if not self._grow():
                return None
        return self._elements[i]

    def __iter__(self) -> Iterator[GroupElement]:
        i = 0
        while True:
            el = self.get(i)
            if el is None:
                return
            yield el
            i += 1

    def rank_of(self, perm: Perm) -> int:
        """Rank of ``perm``, enumerating as far as needed. KeyError if not in the group."""
        perm = tuple(perm)
        while perm not in self._index:
            if not self._grow():
                raise KeyError("permutation is not in the group generated by the action")
        return self._index[perm]

    def element(self, perm: Perm) -> GroupElement:
        return self._elements[self.rank_of(perm)]


def enumerate_group(action: FiniteAction, limit: int | None = None) -> list[GroupElement]:
    """
    Distinct elements of the image group, ordered by shortlex-least witness.

    With ``limit`` only the first ``limit`` elements are produced. Without it
    the whole group is enumerated, which is only sensible for small images.
    """
    out = []
    for el in action.group:
        if limit is not None and len(out) >= limit:
            break
        out.append(el)
    return out


@dataclass(frozen=True)
class Partition:
    """A labeling of points into classes. ``labels[x]`` is the class id of point x."""

    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise DomainError("a partition needs at least one point")

    @classmethod
    def from_classes(cls, classes: Iterable[Iterable[int]], point_count: int) -> Partition:
        labels = [-1] * point_count
        for i, cl in enumerate(classes):
            for x in cl:
                if labels[x] != -1:
                    raise DomainError(f"point {x} lies in two classes")
                labels[x] = i
        if -1 in labels:
            raise DomainError("classes do not cover every point")
        return cls(tuple(labels))

    @classmethod
    def from_values(cls, values: Sequence) -> Partition:
        """Partition by equal values; class ids follow sorted value order."""
        ids = {v: i for i, v in enumerate(sorted(set(values)))}
        return cls(tuple(ids[v] for v in values))

    @property
    def point_count(self) -> int:
        return len(self.labels)

    def class_of(self, x: int) -> int:
        return self.labels[x]

    @cached_property
    def classes(self) -> dict[int, frozenset[int]]:
        members: dict[int, list[int]] = {}
        for x, lab in enumerate(self.labels):
            members.setdefault(lab, []).append(x)
        return {lab: frozenset(members[lab]) for lab in sorted(members)}

    @cached_property
    def measures(self) -> dict[int, Fraction]:
        n = self.point_count
        return {lab: Fraction(len(cl), n) for lab, cl in self.classes.items()}

    def __len__(self):
        return len(self.classes)

    def blocks(self) -> frozenset[frozenset[int]]:
        return frozenset(self.classes.values())

    def same_as(self, other: Partition) -> bool:
        """Equality as set partitions, ignoring class ids."""
        return self.blocks() == other.blocks()

    def canonical(self) -> Partition:
        """Relabel classes 0, 1, 2, ... in order of first occurrence."""
        ids: dict[int, int] = {}
        return Partition(tuple(ids.setdefault(lab, len(ids)) for lab in self.labels))

    def is_discrete(self) -> bool:
        return len(self.classes) == self.point_count


def shannon_entropy(partition: Partition) -> float:
    """Shannon entropy in nats."""
    h = 0.0
    for m in partition.measures.values():
        if m:
            h -= float(m) * math.log(m)
    return h


def translate_partition(g: GroupElement | Perm, partition: Partition) -> Partition:
    """The partition {g.A : A in partition}, keeping class ids."""
    perm = g.perm if isinstance(g, GroupElement) else tuple(g)
    inv = invert(perm)
    return Partition(tuple(partition.labels[inv[p]] for p in range(len(perm))))


def join(parts: Sequence[Partition]) -> Partition:
    """Common refinement: two points share a class iff they do in every input."""
    if not parts:
        raise DomainError("join needs at least one partition")
    n = parts[0].point_count
    if any(p.point_count != n for p in parts):
        raise DomainError("partitions are over different point sets")
    ids: dict[tuple, int] = {}
    return Partition(
        tuple(ids.setdefault(tuple(p.labels[x] for p in parts), len(ids)) for x in range(n))
    )


def invariant_refinement(action: FiniteAction, partition: Partition) -> Partition:
    """
    The join of g.partition over every group element g.

    Computed as the coarsest refinement of ``partition`` that every generator
    maps onto itself: split classes by the classes of their generator images
    until stable. Points x, y end in the same class iff labels agree at g.x, g.y
    for all g, which is exactly the join of all translates.
    """
    labels = partition.canonical().labels
    count = len(set(labels))
    letters = action.letters
    while True:
        ids: dict[tuple, int] = {}
        new = tuple(
            ids.setdefault((labels[x],) + tuple(labels[s[x]] for s in letters), len(ids))
            for x in range(action.point_count)
        )
        if len(ids) == count:
            return Partition(new)
        labels, count = new, len(ids)


def translates_join(action: FiniteAction, partition: Partition) -> Partition:
    """The join of translates computed literally over an enumeration of the group."""
    return join([translate_partition(g, partition) for g in action.group])


@dataclass(frozen=True)
class GeneratingCheck:
    generating: bool
    witness: tuple[int, int] | None = None
    method: str = ""

    def __bool__(self):
        return self.generating


def is_generating(action: FiniteAction, partition: Partition) -> GeneratingCheck:
    """Generating test via the join of all translates (must be all singletons)."""
    action.require_ergodic()
    joined = invariant_refinement(action, partition)
    for cl in joined.classes.values():
        if len(cl) > 1:
            x, y = sorted(cl)[:2]
            return GeneratingCheck(False, (x, y), "join")
    return GeneratingCheck(True, None, "join")


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                ra, rb = rb, ra
            self.parent[ra] = rb


def _pair_orbits(action):
    """Orbit representative for each unordered pair x < y under the diagonal action."""
    n = action.point_count
    uf = _UnionFind(n * n)
    for g in action.generators:
        for x in range(n):
            gx = g[x]
            for y in range(x + 1, n):
                gy = g[y]
                a, b = (gx, gy) if gx < gy else (gy, gx)
                uf.union(x * n + y, a * n + b)
    return [uf.find(i) for i in range(n * n)]


def unseparated_pairs(action: FiniteAction, partition: Partition) -> list[tuple[int, int]]:
    """
    Pairs x < y with partition(g.x) == partition(g.y) for every group element g.

    The set {(g.x, g.y)} is the orbit of (x, y) under the diagonal action, so a
    pair is separated iff its pair orbit contains a pair with distinct labels.
    """
    n = action.point_count
    roots = action._pair_orbit_roots
    labels = partition.labels
    separated = set()
    for x in range(n):
        for y in range(x + 1, n):
            if labels[x] != labels[y]:
                separated.add(roots[x * n + y])
    return [
        (x, y)
        for x in range(n)
        for y in range(x + 1, n)
        if roots[x * n + y] not in separated
    ]


def is_generating_pairwise(action: FiniteAction, partition: Partition) -> GeneratingCheck:
    """Generating test by searching the diagonal orbit of each pair for a label disagreement."""
    action.require_ergodic()
    bad = unseparated_pairs(action, partition)
    if bad:
        return GeneratingCheck(False, bad[0], "pairs")
    return GeneratingCheck(True, None, "pairs")


def separating_word(action: FiniteAction, partition: Partition, x: int, y: int):
    """
    A word w with partition(w.x) != partition(w.y), found by BFS on the
    diagonal orbit of (x, y). Returns None if the pair is never separated.
    """
    labels = partition.labels
    start = (x, y)
    prev = {start: None}
    queue = deque([start])
    while queue:
        u, v = queue.popleft()
        if labels[u] != labels[v]:
            word = []
            node = (u, v)
            while prev[node] is not None:
                node, letter = prev[node]
                word.append(letter)
            # backtracking meets the last-applied letter first: product order
            return tuple(word)
        for letter, s in enumerate(action.letters):
            nxt = (s[u], s[v])
            if nxt not in prev:
                prev[nxt] = ((u, v), letter)
                queue.append(nxt)
    return None


def symmetric(action: FiniteAction, A: Iterable[int], x: int, y: int) -> bool:
    """True iff g.x in A <=> g.y in A for every group element g."""
    A = frozenset(A)
    seen = {(x, y)}
    stack = [(x, y)]
    while stack:
        u, v = stack.pop()
        if (u in A) != (v in A):
            return False
        for s in action.letters:
            nxt = (s[u], s[v])
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def symmetry_classes(action: FiniteAction, sets: Sequence[Iterable[int]]) -> Partition:
    """
    Classes of points that are S-symmetric to each other for every S in ``sets``.

    Being S-symmetric for several sets at once is the largest invariant
    equivalence inside the membership partition, which invariant_refinement
    computes directly.
    """
    sets = [frozenset(s) for s in sets]
    membership = Partition.from_values(
        [tuple(x in s for s in sets) for x in range(action.point_count)]
    )
    return invariant_refinement(action, membership)
