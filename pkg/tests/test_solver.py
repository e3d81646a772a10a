import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from decoygame import (
    GameGraph,
    MdpSkeleton,
    Player,
    TooLarge,
    UnknownState,
    almost_sure_reach,
    asr_oracle,
    attractor,
    greedy_reacher_supports,
    opponent_safety_supports,
    random_game,
    randomized_reacher_supports,
    sure_oracle,
)
from decoygame.fixtures import running_example

INF = math.inf


def test_running_example_levels():
    g = running_example()
    res = attractor(g, g.finals)
    names = [set(g.names(z)) for z in res.levels]
    assert names[0] == {"s0", "s1"}
    assert names[1] == {"s0", "s1", "s2", "s3", "s4"}
    assert names[-1] == {f"s{i}" for i in range(10)}
    assert len(res.levels) == 6


def test_empty_target():
    g = running_example()
    res = attractor(g, [])
    assert res.win_reacher == frozenset()
    assert all(r == INF for r in res.rank)


def test_unknown_target_state():
    with pytest.raises(UnknownState):
        attractor(running_example(), [99])


def test_p1_as_reacher():
    g = running_example()
    res = attractor(g, g.ids(["s10"]), Player.P1)
    assert set(g.names(res.win_reacher)) == {"s10", "s11"}


def test_opponent_dead_end_is_attracted():
    g = GameGraph.build(
        states=[("a", "P1"), ("b", "P2")],
        actions=[("x", "P1")],
        transitions=[("a", "x", "b")],
        initial="a",
        finals=[],
    )
    # b is a P1-opponent dead end: the universal condition holds vacuously
    res = attractor(g, [], Player.P2)
    assert res.win_reacher == frozenset()
    res = attractor(g, [], Player.P1)
    assert g.names(res.win_reacher) == ["a", "b"] or set(g.names(res.win_reacher)) == {"a", "b"}
    assert res.rank[g.state_id("b")] == 1


def test_greedy_supports_running_example():
    g = running_example()
    res = attractor(g, g.finals)
    sup = greedy_reacher_supports(res, g)
    named = {g.state_names[s]: {g.action_names[a] for a in acts} for s, acts in sup.items()}
    assert named == {"s2": {"b2"}, "s5": {"b2"}, "s6": {"b1", "b2"}, "s8": {"b1"}}


def test_opponent_safety_running_example():
    g = running_example()
    res = attractor(g, g.finals)
    sup = opponent_safety_supports(res, g)
    named = {g.state_names[s]: {g.action_names[a] for a in acts} for s, acts in sup.items()}
    assert named == {"s10": {"a2"}}
    assert sup.player is Player.P1


def test_randomized_supports_stay_in_region():
    g = running_example()
    res = attractor(g, g.finals)
    sup = randomized_reacher_supports(res, g)
    named = {g.state_names[s]: {g.action_names[a] for a in acts} for s, acts in sup.items()}
    assert named["s8"] == {"b1", "b2"}
    assert named["s5"] == {"b1", "b2"}


def test_almost_sure_vs_sure():
    # nature state that loops on itself or moves to the target
    m = MdpSkeleton(decision={0: {0: 1, 1: 2}}, nature={1: frozenset({1, 3}), 2: frozenset({2})}, target=frozenset({3}))
    assert almost_sure_reach(m) == {0, 1, 3}
    assert asr_oracle(m) == {0, 1, 3}


def test_almost_sure_needs_staying():
    # nature at 1 may fall into the absorbing bad state 2
    m = MdpSkeleton(decision={0: {0: 1}}, nature={1: frozenset({2, 3}), 2: frozenset({2})}, target=frozenset({3}))
    assert almost_sure_reach(m) == {3}


def test_mdp_rejects_bad_skeletons():
    with pytest.raises(ValueError):
        MdpSkeleton(decision={0: {}}, nature={0: frozenset({0})}, target=frozenset())
    with pytest.raises(ValueError):
        MdpSkeleton(decision={}, nature={0: frozenset()}, target=frozenset())


def test_oracle_guards():
    g = random_game(20, 10, 2, seed=1)
    with pytest.raises(TooLarge):
        sure_oracle(g, g.finals)
    g = random_game(8, 4, 3, seed=1)
    wide = any(len(o) > 2 for o in g.edges)
    if wide:
        with pytest.raises(TooLarge):
            sure_oracle(g, g.finals)
    m = MdpSkeleton(decision={i: {0: i} for i in range(11)}, nature={}, target=frozenset())
    with pytest.raises(TooLarge):
        asr_oracle(m)


small_games = st.builds(
    lambda seed, n, k: random_game(n, min(k, n), 2, seed=seed, n_finals=1 + seed % 2),
    st.integers(0, 100_000),
    st.integers(2, 10),
    st.integers(0, 10),
)


@settings(max_examples=60, deadline=None)
@given(small_games, st.sampled_from([Player.P1, Player.P2]))
def test_attractor_matches_oracle(g, reacher):
    assert attractor(g, g.finals, reacher).win_reacher == sure_oracle(g, g.finals, reacher)


@settings(max_examples=60, deadline=None)
@given(small_games)
def test_almost_sure_matches_oracle(g):
    decision = {s: dict(g.edges[s]) for s in g.states_of(Player.P1)}
    nature = {s: frozenset(t for _, t in g.edges[s]) for s in g.states_of(Player.P2)}
    m = MdpSkeleton(decision=decision, nature=nature, target=g.finals)
    assert almost_sure_reach(m) == asr_oracle(m)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.integers(5, 60))
def test_greedy_support_reduces_rank(seed, n):
    g = random_game(n, n // 2, 4, seed=seed)
    res = attractor(g, g.finals)
    for s, acts in greedy_reacher_supports(res, g).items():
        assert acts
        for a in acts:
            assert res.rank[g.step(s, a)] < res.rank[s]
    lose = res.win_opponent
    for s, acts in opponent_safety_supports(res, g).items():
        assert acts and all(g.step(s, a) in lose for a in acts)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(5, 60))
def test_sure_region_is_almost_sure(seed, n):
    g = random_game(n, n // 2, 4, seed=seed)
    decision = {s: dict(g.edges[s]) for s in g.states_of(Player.P2)}
    nature = {s: frozenset(t for _, t in g.edges[s]) for s in g.states_of(Player.P1)}
    m = MdpSkeleton(decision=decision, nature=nature, target=g.finals)
    assert attractor(g, g.finals).win_reacher <= almost_sure_reach(m)
