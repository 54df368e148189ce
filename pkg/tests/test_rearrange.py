import itertools
import random

import pytest

from fingen.action import FiniteAction, symmetric
from fingen.errors import NonErgodic
from fingen.fixtures import cyclic_action, random_transitive_action
from fingen.rearrange import check_clauses, exhaust, q_step


def literal_exhaust(action, A, B):
    """Recursion straight from the definition: q_step on the remainders, from scratch."""
    A, B = frozenset(A), frozenset(B)
    p1, p2, psi = set(), set(), {}
    while True:
        h, q1, q2 = q_step(action, A - p1, B - p2)
        if h is None:
            return p1, p2, psi
        for x in q1:
            psi[x] = h(x)
        p1 |= q1
        p2 |= q2


def test_q_step_overlap_uses_identity():
    action = random_transitive_action(7, 2, 0)
    h, q1, q2 = q_step(action, {1, 2, 3}, {3, 4})
    assert h.is_identity
    assert q1 == q2 == {3}


def test_q_step_cyclic_six():
    h, q1, q2 = q_step(cyclic_action(6), {0}, {3})
    assert h.witness == "sss"
    assert q1 == {0} and q2 == {3}


def test_q_step_empty():
    assert q_step(cyclic_action(6), set(), {1}) == (None, frozenset(), frozenset())


def test_q_step_no_meeting_orbit():
    action = FiniteAction(4, ((1, 0, 3, 2),))
    assert q_step(action, {0}, {2})[0] is None


def test_exhaust_empty_source():
    bij, trace = exhaust(cyclic_action(5), set(), {1, 2})
    assert not bij.blocks and not bij.source
    assert trace.b_terminal == {1, 2}


def test_exhaust_whole_space_is_identity():
    action = random_transitive_action(6, 2, 4)
    everything = set(range(6))
    bij, trace = exhaust(action, everything, everything)
    assert len(trace.witnesses) == 1 and trace.witnesses[0].is_identity
    assert bij.mapping == {x: x for x in range(6)}
    check_clauses(action, everything, everything, (bij, trace))


def test_exhaust_cyclic_six_two_into_one():
    action = cyclic_action(6)
    bij, trace = exhaust(action, {0, 1}, {3})
    # s^2 sends 1 onto 3 before s^3 would send 0 there
    assert bij.mapping == {1: 3}
    assert [h.witness for h in trace.witnesses] == ["ss"]
    assert trace.b_terminal == frozenset() and trace.a_terminal == {0}


def test_exhaust_requires_ergodic():
    with pytest.raises(NonErgodic):
        exhaust(FiniteAction(2, ((0, 1),)), {0}, {1})


def test_symmetric_pair_shares_block():
    action = cyclic_action(4)
    A = {0, 2}
    B = {1, 3}
    result = exhaust(action, A, B)
    bij = result[0]
    assert symmetric(action, A, 0, 2) and symmetric(action, B, 0, 2)
    assert bij.block_of[0] == bij.block_of[2]
    report = check_clauses(action, A, B, result)
    assert report.symmetric_pairs >= 2


def periodic_cases():
    """Cyclic actions with periodic A and B, so symmetric pairs are plentiful."""
    rng = random.Random(5)
    for _ in range(80):
        period = rng.choice([2, 3, 4, 5, 6])
        reps = rng.randint(2, 6)
        n = period * reps
        a_res = set(rng.sample(range(period), rng.randint(1, period)))
        b_res = set(rng.sample(range(period), rng.randint(1, period)))
        A = {x for x in range(n) if x % period in a_res}
        B = {x for x in range(n) if x % period in b_res}
        yield cyclic_action(n), A, B


def random_cases():
    rng = random.Random(6)
    for i in range(60):
        n = rng.randint(1, 40)
        action = random_transitive_action(n, rng.randint(1, 3), i)
        A = set(rng.sample(range(n), rng.randint(0, n)))
        B = set(rng.sample(range(n), rng.randint(0, n)))
        yield action, A, B


@pytest.mark.parametrize("action, A, B", list(periodic_cases()) + list(random_cases()))
def test_exhaust_matches_definition_and_clauses(action, A, B):
    bij, trace = exhaust(action, A, B)
    p1, p2, psi = literal_exhaust(action, A, B)
    assert bij.source == p1 and bij.target == p2 and bij.mapping == psi
    check_clauses(action, A, B, (bij, trace))
    assert len(bij.source) == len(bij.target)
    ws = trace.witnesses
    assert all(a.rank < b.rank for a, b in zip(ws, ws[1:]))
    assert len(ws) <= min(len(A), len(B))
    for step in trace.steps:
        if step.h is not None:
            assert len(step.q1) == len(step.q2) > 0
            assert step.q2 == step.h.image(step.q1)


@pytest.mark.parametrize("n, period", [(8, 2), (9, 3), (12, 4)])
def test_clause_three_pairwise(n, period):
    action = cyclic_action(n)
    A = {x for x in range(n) if x % period == 0}
    B = {x for x in range(n) if x % period != 0}
    bij, _ = exhaust(action, A, B)
    for x, y in itertools.combinations(range(n), 2):
        if symmetric(action, A, x, y) and symmetric(action, B, x, y):
            assert symmetric(action, bij.source, x, y)
            assert symmetric(action, bij.target, x, y)
            if x in bij.source and y in bij.source:
                # a rotation moves every point by the same amount
                assert (bij.mapping[x] - x) % n == (bij.mapping[y] - y) % n


def test_exhaust_is_deterministic():
    action = random_transitive_action(30, 2, 9)
    A, B = set(range(0, 30, 3)), set(range(1, 30, 2))
    first, _ = exhaust(action, A, B)
    second, _ = exhaust(FiniteAction(30, action.generators), A, B)
    assert [(b.points, b.h.perm) for b in first.blocks] == [(b.points, b.h.perm) for b in second.blocks]
