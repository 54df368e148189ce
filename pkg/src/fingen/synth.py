"""
Finite generator synthesis.

Points are labeled by a Krieger code word L(x). Words longer than a cutoff C
do not fit, so their overflow letters are carried to other points of the
orbit: B_n holds the points with |L| >= C + n, and the n-th tower level
moves B_n injectively into still-unused points T_n. The new label R(x) has
length at most C + 3 and its fibers form a finite partition beta that still
generates.

Word positions in comments are 1-based, as in L(z)(C + n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .action import (
    FiniteAction,
    Partition,
    is_generating,
    is_generating_pairwise,
    shannon_entropy,
    unseparated_pairs,
)
from .coding import Code, assign_code
from .errors import DomainError, InvariantViolation, MalformedLabels, NotGenerating, TowerLeak
from .rearrange import ExhaustTrace, PartialBijection, exhaust

DEFAULT_TAIL = Fraction(1, 4)
SEPARATOR = "4"


def label_points(action: FiniteAction, partition: Partition, code: Code) -> tuple[str, ...]:
    """L(x) = code word of the class of x."""
    if partition.point_count != action.point_count:
        raise DomainError("partition and action have different point counts")
    return tuple(code.words[lab] for lab in partition.labels)


def tail_mass(L: Sequence[str], C: int) -> Fraction:
    """Exact value of sum_{n > C} n * mu(|L| = n)."""
    return Fraction(sum(len(w) for w in L if len(w) > C), len(L))


def choose_C(L: Sequence[str], threshold: Fraction = DEFAULT_TAIL) -> int:
    """Least C >= 1 whose length tail has mass below ``threshold``."""
    threshold = Fraction(threshold)
    if not 0 < threshold < 1:
        raise DomainError("tail threshold must lie strictly between 0 and 1")
    C = 1
    while tail_mass(L, C) >= threshold:
        C += 1
    return C


@dataclass(frozen=True)
class TowerLevel:
    n: int
    B: frozenset[int]
    free: frozenset[int]  # X minus (B_1 ∪ T_1 ∪ ... ∪ T_{n-1})
    theta: PartialBijection
    trace: ExhaustTrace
    E: frozenset[int]

    @property
    def T(self) -> frozenset[int]:
        return self.theta.target


@dataclass(frozen=True)
class TowerSystem:
    C: int
    L: tuple[str, ...]
    levels: tuple[TowerLevel, ...]
    threshold: Fraction = DEFAULT_TAIL

    @property
    def n_max(self) -> int:
        return len(self.levels)

    @property
    def point_count(self) -> int:
        return len(self.L)

    @property
    def B1(self) -> frozenset[int]:
        return self.levels[0].B if self.levels else frozenset()

    def B(self, n: int) -> frozenset[int]:
        """B_n for any n >= 1 (empty past n_max)."""
        return self.levels[n - 1].B if n <= len(self.levels) else frozenset()

    def occupied_mass(self, n: int) -> Fraction:
        """mu(B_1 ∪ T_1 ∪ ... ∪ T_{n-1})."""
        N = self.point_count
        return Fraction(N - len(self.levels[n - 1].free), N)


def build_towers(
    action: FiniteAction,
    L: Sequence[str],
    C: int,
    threshold: Fraction = DEFAULT_TAIL,
) -> TowerSystem:
    """
    Build levels n = 1, 2, ... while B_n = {x : |L(x)| >= C + n} is nonempty,
    with theta_n the exhaustion of B_n into the points not yet used.
    """
    action.require_ergodic()
    L = tuple(L)
    N = action.point_count
    if len(L) != N:
        raise DomainError("labeling and action have different point counts")
    threshold = Fraction(threshold)
    if tail_mass(L, C) >= threshold:
        raise DomainError(f"C = {C} leaves a length tail of {tail_mass(L, C)} >= {threshold}")

    everything = frozenset(range(N))
    levels = []
    used = frozenset()
    n = 1
    while True:
        B = frozenset(x for x in everything if len(L[x]) >= C + n)
        if not B:
            break
        if n == 1:
            used = B
            if not Fraction(len(B), N) < threshold:
                raise InvariantViolation(f"mu(B_1) = {len(B)}/{N} is not below {threshold}")
        if not Fraction(len(used), N) < 2 * threshold:
            raise InvariantViolation(f"occupied mass {len(used)}/{N} before level {n} is too large")
        free = everything - used
        theta, trace = exhaust(action, B, free)
        E = B - theta.source
        if E:
            raise TowerLeak(f"level {n}: {len(E)} overflow points found no free target")
        levels.append(TowerLevel(n, B, free, theta, trace, E))
        used = used | theta.target
        n += 1
    return TowerSystem(C, L, tuple(levels), threshold)


@dataclass(frozen=True)
class RelabelStats:
    alpha_size: int
    beta_size: int
    C: int
    alpha_entropy: float
    beta_entropy: float
    max_length: int


@dataclass(frozen=True)
class RelabelResult:
    R: tuple[str, ...]
    beta: Partition
    stats: RelabelStats


def relabel(action: FiniteAction, L: Sequence[str], towers: TowerSystem) -> RelabelResult:
    """
    The bounded relabeling:

      x in B_1:                          first C letters of L(x)
      x in T_n, theta_n^-1(x) in B_n+1:  L(x) 4 c
      x in T_n, otherwise:               L(x) 4 c 4
      any other x:                       L(x) 4

    where c = L(theta_n^-1(x))(C + n).
    """
    L = tuple(L)
    C = towers.C
    R: list[str | None] = [None] * action.point_count
    for x in towers.B1:
        R[x] = L[x][:C]
    for level in towers.levels:
        n = level.n
        deeper = towers.B(n + 1)
        for z, x in level.theta.mapping.items():
            c = L[z][C + n - 1]
            R[x] = L[x] + SEPARATOR + c if z in deeper else L[x] + SEPARATOR + c + SEPARATOR
    for x, r in enumerate(R):
        if r is None:
            R[x] = L[x] + SEPARATOR
    R = tuple(R)
    beta = Partition.from_values(R)
    alpha = Partition.from_values(L)
    stats = RelabelStats(
        alpha_size=len(alpha),
        beta_size=len(beta),
        C=C,
        alpha_entropy=shannon_entropy(alpha),
        beta_entropy=shannon_entropy(beta),
        max_length=max(len(r) for r in R),
    )
    return RelabelResult(R, beta, stats)


def decode(action: FiniteAction, R: Sequence[str], C: int | None = None) -> tuple[str, ...]:
    """
    Recover L from R by replaying the towers.

    B_1 is where R has no 4, and its common R-length is C. Elsewhere L(x) is
    the part of R(x) before the first 4. Level n is then rebuilt with the same
    exhaustion the encoder used; the letter after the first 4 in R(theta_n(x))
    is letter C + n of L(x), and a single 4 there means x continues into B_n+1.
    ``C`` is only consulted when B_1 is empty, where it does not matter.
    """
    R = tuple(R)
    N = action.point_count
    if len(R) != N:
        raise MalformedLabels("labeling and action have different point counts")
    B = frozenset(x for x in range(N) if SEPARATOR not in R[x])
    if B:
        lengths = {len(R[x]) for x in B}
        if len(lengths) != 1:
            raise MalformedLabels(f"points without a separator have lengths {sorted(lengths)}")
        C = lengths.pop()
    L = [R[x] if x in B else R[x].split(SEPARATOR, 1)[0] for x in range(N)]
    tails = {x: R[x].split(SEPARATOR, 1)[1] for x in range(N) if x not in B}

    if B:
        action.require_ergodic()
    used = B
    targets = set()
    n = 1
    while B:
        free = frozenset(range(N)) - used
        theta, _ = exhaust(action, B, free)
        if theta.source != B:
            raise MalformedLabels(f"level {n}: replayed towers cannot place every point")
        nxt = set()
        for x, y in theta.mapping.items():
            tail = tails[y]
            if len(tail) == 1 and tail != SEPARATOR:
                nxt.add(x)
            elif not (len(tail) == 2 and tail[1] == SEPARATOR and tail[0] != SEPARATOR):
                raise MalformedLabels(f"point {y} does not carry a tower letter: {R[y]!r}")
            L[x] += tail[0]
            targets.add(y)
        used = used | theta.target
        B = frozenset(nxt)
        n += 1
    for x, tail in tails.items():
        if x not in targets and tail != "":
            raise MalformedLabels(f"point {x} carries unexpected data after its separator: {R[x]!r}")
    return tuple(L)


@dataclass
class Synthesis:
    """Everything produced by one synthesize run, kept for auditing."""

    action: FiniteAction
    partition: Partition
    code: Code
    L: tuple[str, ...]
    C: int
    towers: TowerSystem
    result: RelabelResult
    beta_generating: dict[str, bool] = field(default_factory=dict)

    @property
    def R(self) -> tuple[str, ...]:
        return self.result.R

    @property
    def beta(self) -> Partition:
        return self.result.beta


def synthesize(
    action: FiniteAction,
    partition: Partition,
    tail_threshold: Fraction = DEFAULT_TAIL,
) -> Synthesis:
    """
    Turn a generating partition into a finite generating partition built
    from labels of length at most C + 3.
    """
    action.require_ergodic()
    if not is_generating(action, partition):
        raise NotGenerating("input partition does not separate points")
    code = assign_code(partition)
    L = label_points(action, partition, code)
    C = choose_C(L, tail_threshold)
    towers = build_towers(action, L, C, tail_threshold)
    result = relabel(action, L, towers)
    checks = {
        "join": is_generating(action, result.beta).generating,
        "pairs": is_generating_pairwise(action, result.beta).generating,
    }
    if not all(checks.values()):
        raise InvariantViolation(f"relabeled partition fails to generate: {checks}")
    return Synthesis(action, partition, code, L, C, towers, result, checks)


def check_synthesis(syn: Synthesis) -> dict[str, bool]:
    """
    Recompute every invariant of a synthesis run from scratch.

    Returns a name -> bool map; nothing is raised, so callers can report.
    """
    action, towers, L, R = syn.action, syn.towers, syn.L, syn.R
    N, C = action.point_count, syn.C
    t = towers.threshold
    everything = frozenset(range(N))
    out = {}

    out["C minimal"] = tail_mass(L, C) < t and (C == 1 or tail_mass(L, C - 1) >= t)
    out["tail below threshold"] = tail_mass(L, C) < t
    out["B_1 below threshold"] = Fraction(len(towers.B1), N) < t

    b_ok = nest_ok = disjoint_ok = theta_ok = e_ok = occ_ok = True
    prev_B = None
    used = set(towers.B1)
    for level in towers.levels:
        n = level.n
        b_ok &= level.B == frozenset(x for x in everything if len(L[x]) >= C + n)
        if prev_B is not None:
            nest_ok &= level.B <= prev_B
        prev_B = level.B
        disjoint_ok &= not (level.T & used)
        theta_ok &= level.theta.source <= level.B and level.free == everything - used
        e_ok &= not level.E
        occ_ok &= Fraction(len(used), N) < 2 * t
        used |= level.T
    b_ok &= not frozenset(x for x in everything if len(L[x]) >= C + towers.n_max + 1)
    out["B_n exact"] = b_ok
    out["B_n nested"] = nest_ok
    out["T_n disjoint"] = disjoint_ok
    out["theta_n into T_n"] = theta_ok
    out["E_n empty"] = e_ok
    out["occupied mass below 2*threshold"] = occ_ok

    out["|R| <= C+3"] = all(len(r) <= C + 3 for r in R)
    out["prefix is L outside B_1"] = all(
        R[x].split(SEPARATOR, 1)[0] == L[x] for x in everything - towers.B1
    )
    out["beta = fibers of R"] = syn.beta.same_as(Partition.from_values(R))
    out["beta generating (join)"] = is_generating(action, syn.beta).generating
    out["beta generating (pairs)"] = is_generating_pairwise(action, syn.beta).generating
    alpha_bad = set(unseparated_pairs(action, syn.partition))
    beta_bad = set(unseparated_pairs(action, syn.beta))
    out["separation transfer"] = beta_bad <= alpha_bad
    out["decode round trip"] = decode(action, R, C) == L
    return out
