"""Builders for test systems."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .action import FiniteAction, Partition, Perm, compose, invert, is_permutation
from .errors import CocycleInconsistent, DomainError, FingenError, Unreachable

MAX_RESAMPLES = 10_000


def cyclic_action(n: int) -> FiniteAction:
    """Z acting on Z/n by x -> x + 1."""
    if n < 1:
        raise DomainError("need at least one point")
    return FiniteAction(n, (tuple((x + 1) % n for x in range(n)),), ("s",))


def random_transitive_action(n: int, k: int, seed: int) -> FiniteAction:
    """k uniform random permutations of n points, resampled until transitive."""
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and k >= 1")
    rng = random.Random(seed)
    for _ in range(MAX_RESAMPLES):
        gens = tuple(tuple(rng.sample(range(n), n)) for _ in range(k))
        action = FiniteAction(n, gens)
        if action.ergodic:
            return action
    raise FingenError(f"no transitive action found after {MAX_RESAMPLES} draws (n={n}, k={k})")


def pointwise_partition(action: FiniteAction) -> Partition:
    return Partition(tuple(range(action.point_count)))


def random_partition(
    action: FiniteAction,
    class_count: int,
    seed: int,
    weights: Sequence[float] | None = None,
) -> Partition:
    """
    Seeded surjective labeling into ``class_count`` classes.

    One point per class is placed first so no class is empty; remaining
    points get labels drawn with the optional ``weights``.
    """
    n = action.point_count
    if not 1 <= class_count <= n:
        raise DomainError(f"cannot split {n} points into {class_count} nonempty classes")
    rng = random.Random(seed)
    points = list(range(n))
    rng.shuffle(points)
    labels = [0] * n
    for c, x in enumerate(points[:class_count]):
        labels[x] = c
    rest = points[class_count:]
    draws = rng.choices(range(class_count), weights=weights, k=len(rest))
    for x, c in zip(rest, draws):
        labels[x] = c
    return Partition(tuple(labels))


def nielsen_schreier_rank(r: int, n: int) -> int:
    """Rank of an index-n subgroup of a free group of rank r."""
    if r < 1 or n < 1:
        raise DomainError("rank and index must be positive")
    return n * (r - 1) + 1


@dataclass(frozen=True)
class InducedActionSpec:
    """
    Data for the action induced from a subgroup H.

    ``coset_action[g]`` permutes the n cosets; ``schreier_perms[a][g]`` is the
    permutation of the fiber Y by which the cocycle value gamma(aH, g) acts.
    """

    coset_count: int
    coset_action: tuple[Perm, ...]
    fiber_size: int
    schreier_perms: tuple[tuple[Perm, ...], ...]

    def validate(self):
        n, m = self.coset_count, self.fiber_size
        if n < 1 or m < 1:
            raise CocycleInconsistent("coset count and fiber size must be positive")
        if len(self.schreier_perms) != n:
            raise CocycleInconsistent("need one row of Schreier permutations per coset")
        for g, p in enumerate(self.coset_action):
            if not is_permutation(p, n):
                raise CocycleInconsistent(f"coset action of generator {g} is not a permutation")
        for a, row in enumerate(self.schreier_perms):
            if len(row) != len(self.coset_action):
                raise CocycleInconsistent(f"coset {a}: wrong number of Schreier permutations")
            for g, p in enumerate(row):
                if not is_permutation(p, m):
                    raise CocycleInconsistent(f"Schreier permutation ({a}, {g}) is not a bijection of Y")

    def as_dict(self) -> dict:
        return {
            "coset_count": self.coset_count,
            "coset_action": [list(p) for p in self.coset_action],
            "fiber_size": self.fiber_size,
            "schreier_perms": [[list(p) for p in row] for row in self.schreier_perms],
        }

    @classmethod
    def from_dict(cls, d: dict) -> InducedActionSpec:
        return cls(
            int(d["coset_count"]),
            tuple(tuple(p) for p in d["coset_action"]),
            int(d["fiber_size"]),
            tuple(tuple(tuple(p) for p in row) for row in d["schreier_perms"]),
        )


def induced_action(spec: InducedActionSpec) -> FiniteAction:
    """
    g.(a, y) = (g.a, gamma(a, g).y) on the point (a, y) = a * |Y| + y.

    Each generator is checked to be undone by its inverse on every point.
    """
    spec.validate()
    m = spec.fiber_size
    gens = []
    for g, cp in enumerate(spec.coset_action):
        gens.append(tuple(
            cp[a] * m + spec.schreier_perms[a][g][y]
            for a in range(spec.coset_count)
            for y in range(m)
        ))
    total = spec.coset_count * m
    for g, p in enumerate(gens):
        if not is_permutation(p, total):
            raise CocycleInconsistent(f"generator {g} does not induce a bijection")
        inv = invert(p)
        if any(inv[p[x]] != x for x in range(total)):
            raise CocycleInconsistent(f"generator {g} is not undone by its inverse")
    return FiniteAction(total, tuple(gens))


def coset_tree(coset_action: Sequence[Perm], n: int):
    """
    BFS spanning tree of the coset graph from coset 0.

    Returns (parent, tree_edges): parent[a] = (b, g, sign) with a = g^sign . b,
    and the set of (coset, generator) edges b -> g.b used by the tree.
    """
    inverses = [invert(p) for p in coset_action]
    parent: dict[int, tuple[int, int, int] | None] = {0: None}
    tree_edges = set()
    queue = deque([0])
    while queue:
        b = queue.popleft()
        for g, p in enumerate(coset_action):
            for sign, q in ((1, p), (-1, inverses[g])):
                a = q[b]
                if a not in parent:
                    parent[a] = (b, g, sign)
                    tree_edges.add((b, g) if sign == 1 else (a, g))
                    queue.append(a)
    if len(parent) != n:
        raise DomainError("coset action is not transitive")
    return parent, tree_edges


def schreier_generators(coset_action: Sequence[Perm], n: int) -> list[tuple[int, int]]:
    """Edges (a, g) outside the spanning tree; each gives one free generator of H."""
    _, tree = coset_tree(coset_action, n)
    return [(a, g) for a in range(n) for g in range(len(coset_action)) if (a, g) not in tree]


def fiber_generators(spec: InducedActionSpec) -> list[Perm]:
    """
    The stabilizer of coset 0 acting on Y, via Schreier generators.

    With a transversal sigma read off the coset tree, tau(a) is the fiber
    permutation carried by sigma(a). The Schreier generator for the edge
    (a, g) is sigma(g.a)^-1 g sigma(a), which acts on Y as
    tau(g.a)^-1 * gamma(a, g) * tau(a).
    """
    spec.validate()
    n, m = spec.coset_count, spec.fiber_size
    parent, _ = coset_tree(spec.coset_action, n)
    ident = tuple(range(m))
    tau: dict[int, Perm] = {0: ident}

    def fiber_of(a):
        if a in tau:
            return tau[a]
        b, g, sign = parent[a]
        tb = fiber_of(b)
        if sign == 1:
            step = spec.schreier_perms[b][g]
        else:
            # a = g^-1 . b, so g.a = b and the fiber moves by gamma(a, g)^-1
            step = invert(spec.schreier_perms[a][g])
        tau[a] = compose(step, tb)
        return tau[a]

    for a in range(n):
        fiber_of(a)
    out = []
    for a in range(n):
        for g, cp in enumerate(spec.coset_action):
            p = compose(invert(tau[cp[a]]), compose(spec.schreier_perms[a][g], tau[a]))
            if p != ident:
                out.append(p)
    return out


def random_induced_spec(n: int, fiber_size: int, k: int, seed: int, mode: str | None = None) -> InducedActionSpec:
    """
    Random induced-action data with a transitive coset action.

    ``mode`` picks the Schreier permutations: "random" (usually ergodic),
    "identity" (ergodic only when |Y| = 1), or "blocks" (preserving a split of
    Y into two halves, so never ergodic for |Y| >= 2). Drawn from the seed
    when omitted.
    """
    rng = random.Random(seed)
    if mode is None:
        mode = rng.choice(["random", "random", "identity", "blocks"])
    coset = random_transitive_action(n, k, rng.randrange(2**32))
    half = fiber_size // 2

    def fiber_perm():
        if mode == "identity":
            return tuple(range(fiber_size))
        if mode == "blocks" and half:
            lo = rng.sample(range(half), half)
            hi = rng.sample(range(half, fiber_size), fiber_size - half)
            return tuple(lo + hi)
        return tuple(rng.sample(range(fiber_size), fiber_size))

    schreier = tuple(tuple(fiber_perm() for _ in range(k)) for _ in range(n))
    return InducedActionSpec(n, coset.generators, fiber_size, schreier)


def entropy_target_distribution(target_h: float, max_support: int) -> list[Fraction]:
    """
    A distribution (p, q, ..., q) on m <= max_support atoms with entropy target_h.

    m is the least support whose maximum entropy ln m reaches the target.
    The entropy falls monotonically as p runs from 1/m to 1, so p is found by
    bisection. The result is rounded to a common denominator <= 10^6.
    """
    if max_support < 1 or target_h < 0:
        raise DomainError("need max_support >= 1 and a nonnegative target")
    if target_h > math.log(max_support) + 1e-12:
        raise Unreachable(f"entropy {target_h} exceeds ln({max_support})")
    if target_h <= 1e-15:
        return [Fraction(1)]
    m = 2
    while math.log(m) < target_h - 1e-12:
        m += 1
    if abs(math.log(m) - target_h) <= 1e-12:
        return [Fraction(1, m)] * m

    def h(p):
        q = (1 - p) / (m - 1)
        return -p * math.log(p) - (m - 1) * q * math.log(q) if q > 0 else -p * math.log(p)

    lo, hi = 1.0 / m, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if h(mid) > target_h:
            lo = mid
        else:
            hi = mid
    p = (lo + hi) / 2
    if abs(h(p) - target_h) > 1e-9:
        raise FingenError("bisection failed to reach the target entropy")
    den = 10**6
    each = round((1 - p) * den / (m - 1))
    head = den - (m - 1) * each
    dist = [Fraction(head, den)] + [Fraction(each, den)] * (m - 1)
    achieved = -sum(float(x) * math.log(x) for x in dist if x)
    if abs(achieved - target_h) > 1e-4:
        raise FingenError(f"rounded distribution has entropy {achieved}, target {target_h}")
    return dist
