import math
from fractions import Fraction

import pytest

from fingen.action import FiniteAction, is_generating, shannon_entropy
from fingen.errors import CocycleInconsistent, DomainError, Unreachable
from fingen.fixtures import (
    InducedActionSpec,
    cyclic_action,
    entropy_target_distribution,
    fiber_generators,
    induced_action,
    nielsen_schreier_rank,
    pointwise_partition,
    random_induced_spec,
    random_partition,
    random_transitive_action,
    schreier_generators,
)


def transitive_on(n, perms):
    if n == 1:
        return True
    return FiniteAction(n, tuple(perms) or ((tuple(range(n))),)).ergodic


def test_cyclic():
    assert cyclic_action(1).generators == ((0,),)
    six = cyclic_action(6)
    assert six.generators == ((1, 2, 3, 4, 5, 0),)
    assert six.ergodic and six.orbits[0] == frozenset(range(6))


def test_random_transitive_is_seeded():
    a = random_transitive_action(50, 2, 7)
    assert a.ergodic
    assert a == random_transitive_action(50, 2, 7)
    assert random_transitive_action(1, 3, 0).ergodic


def test_partitions():
    action = cyclic_action(4)
    pw = pointwise_partition(action)
    assert len(pw) == 4 and is_generating(action, pw)
    one = random_partition(action, 1, 0)
    assert len(one) == 1 and not is_generating(action, one)
    assert random_partition(action, 3, 5) == random_partition(action, 3, 5)
    assert len(random_partition(action, 3, 5)) == 3
    with pytest.raises(DomainError):
        random_partition(action, 5, 0)


@pytest.mark.parametrize("r, n, expected", [(2, 2, 3), (5, 1, 5), (3, 4, 9)])
def test_nielsen_schreier(r, n, expected):
    assert nielsen_schreier_rank(r, n) == expected


@pytest.mark.parametrize("seed", range(10))
def test_nielsen_schreier_counts_non_tree_edges(seed):
    # a coset table of index n for a rank-r free group has n*r edges, n-1 of them in a spanning tree
    r, n = 1 + seed % 3, 1 + seed
    coset = random_transitive_action(n, r, seed)
    assert len(schreier_generators(coset.generators, n)) == nielsen_schreier_rank(r, n)


def test_induced_with_one_coset_is_fiber_action():
    fiber = random_transitive_action(5, 2, 1)
    spec = InducedActionSpec(1, ((0,), (0,)), 5, (fiber.generators,))
    assert induced_action(spec).generators == fiber.generators


def test_induced_with_trivial_fiber_is_coset_action():
    coset = random_transitive_action(6, 2, 2)
    spec = InducedActionSpec(6, coset.generators, 1, tuple(((0,), (0,)) for _ in range(6)))
    assert induced_action(spec).generators == coset.generators


def test_induced_two_cosets_two_cycle():
    swap = (1, 0)
    spec = InducedActionSpec(2, (swap,), 2, ((swap,), ((0, 1),)))
    action = induced_action(spec)
    assert action.point_count == 4
    # going round both cosets applies the swap once: fiber is transitive
    assert action.ergodic
    assert transitive_on(2, fiber_generators(spec))
    flat = InducedActionSpec(2, (swap,), 2, (((0, 1),), ((0, 1),)))
    assert not induced_action(flat).ergodic
    assert not transitive_on(2, fiber_generators(flat))


def test_induced_rejects_inconsistent_data():
    with pytest.raises(CocycleInconsistent):
        induced_action(InducedActionSpec(2, ((1, 0),), 2, (((0, 0),), ((0, 1),))))
    with pytest.raises(CocycleInconsistent):
        induced_action(InducedActionSpec(2, ((1, 0),), 2, (((0, 1),),)))


@pytest.mark.parametrize("seed", range(60))
def test_ergodicity_transfer(seed):
    spec = random_induced_spec(1 + seed % 5, 1 + seed % 4, 1 + seed % 3, seed)
    action = induced_action(spec)
    assert action.ergodic == transitive_on(spec.fiber_size, fiber_generators(spec))
    # orbits of the fiber over coset 0, read off the induced action directly
    m = spec.fiber_size
    over_zero = {action.orbit_index[y] for y in range(m)}
    assert (len(over_zero) == 1) == action.ergodic


def test_spec_round_trips_through_dict():
    spec = random_induced_spec(3, 2, 2, 4)
    assert InducedActionSpec.from_dict(spec.as_dict()) == spec


def test_entropy_targets():
    assert entropy_target_distribution(math.log(2), 2) == [Fraction(1, 2)] * 2
    assert entropy_target_distribution(0, 5) == [1]
    dist = entropy_target_distribution(1.0, 8)
    assert sum(dist) == 1
    assert all(x.denominator <= 10**6 for x in dist)
    assert shannon_entropy_of(dist) == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(Unreachable):
        entropy_target_distribution(3.0, 8)


@pytest.mark.parametrize("target", [0.1, 0.5, 1.7, 2.0, 3.3])
def test_entropy_targets_hit(target):
    dist = entropy_target_distribution(target, 64)
    assert sum(dist) == 1
    assert shannon_entropy_of(dist) == pytest.approx(target, abs=1e-4)


def shannon_entropy_of(dist):
    return -sum(float(p) * math.log(p) for p in dist if p)


def test_induced_entropy_target():
    # n*h + n(r-1) log n with rank r = 2, index n = 2, h = 0.25
    n, r, h = 2, 2, 0.25
    target = n * h + n * (r - 1) * math.log(n)
    dist = entropy_target_distribution(target, 16)
    assert shannon_entropy_of(dist) == pytest.approx(target, abs=1e-4)
