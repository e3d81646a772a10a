"""Attractor computation, strategy extraction and qualitative MDP reachability.

The brute-force oracles at the bottom enumerate memoryless deterministic
strategies and share no code with the fixpoint routines they check.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from decoygame.errors import TooLarge, UnknownState
from decoygame.game import GameGraph, Player, StrategySupport

INF = math.inf

#: default bounds for the enumeration oracles
ORACLE_MAX_STATES = 12
ORACLE_MAX_ACTIONS = 2


@dataclass(frozen=True)
class SolveResult:
    target: frozenset[int]
    reacher: Player
    levels: tuple[frozenset[int], ...]
    rank: tuple[float, ...]

    @property
    def win_reacher(self) -> frozenset[int]:
        return self.levels[-1]

    @property
    def win_opponent(self) -> frozenset[int]:
        return frozenset(s for s in range(len(self.rank)) if self.rank[s] == INF)


def attractor(g: GameGraph, target: Iterable[int], reacher: Player = Player.P2) -> SolveResult:
    """Level sets of ``reacher``'s attractor to ``target``.

    ``Z[k+1] = Z[k] | {reacher states with a successor in Z[k]}
    | {opponent states with every successor in Z[k]}``.  Computed with
    per-state counters so the whole fixpoint is linear in the arena size.
    """
    target = frozenset(target)
    n = g.n_states
    bad = [t for t in target if not 0 <= t < n]
    if bad:
        raise UnknownState(bad[0])

    rank = [INF] * n
    for t in target:
        rank[t] = 0
    # number of successors (counted per edge) not yet known to be attracted
    remaining = [len(out) for out in g.edges]
    pred = g.predecessors

    frontier = sorted(target)
    # opponent dead ends satisfy the universal Pre vacuously
    first = [s for s in range(n) if rank[s] == INF and not g.edges[s] and g.owner[s] is not reacher]
    levels = [target]
    current = set(target)
    k = 0
    while True:
        nxt = [] if k else list(first)
        for s in nxt:
            rank[s] = 1
        for t in frontier:
            for s, _ in pred[t]:
                if rank[s] != INF:
                    continue
                if g.owner[s] is reacher:
                    rank[s] = k + 1
                    nxt.append(s)
                else:
                    remaining[s] -= 1
                    if remaining[s] == 0:
                        rank[s] = k + 1
                        nxt.append(s)
        if not nxt:
            break
        k += 1
        current.update(nxt)
        levels.append(frozenset(current))
        frontier = sorted(nxt)
    return SolveResult(target=target, reacher=reacher, levels=tuple(levels), rank=tuple(rank))


def greedy_reacher_supports(res: SolveResult, g: GameGraph) -> StrategySupport:
    """Strictly rank-reducing actions at every reacher state of ``Z_K \\ target``."""
    support = {}
    for s in sorted(res.win_reacher - res.target):
        if g.owner[s] is not res.reacher:
            continue
        acts = frozenset(a for a, t in g.edges[s] if res.rank[t] < res.rank[s])
        support[s] = acts
    return StrategySupport(res.reacher, support)


def opponent_safety_supports(res: SolveResult, g: GameGraph) -> StrategySupport:
    """Actions keeping the opponent inside its winning region."""
    lose = res.win_opponent
    support = {}
    for s in sorted(lose):
        if g.owner[s] is res.reacher:
            continue
        support[s] = frozenset(a for a, t in g.edges[s] if t in lose)
    return StrategySupport(res.reacher.opponent, support)


def randomized_reacher_supports(res: SolveResult, g: GameGraph) -> StrategySupport:
    """Actions keeping the reacher inside ``Z_K`` (almost-sure strategy support)."""
    win = res.win_reacher
    support = {}
    for s in sorted(win):
        if g.owner[s] is not res.reacher:
            continue
        support[s] = frozenset(a for a, t in g.edges[s] if t in win)
    return StrategySupport(res.reacher, support)


@dataclass(frozen=True)
class MdpSkeleton:
    """Support-only MDP: decision states pick an action, nature states move to
    any listed successor with positive probability."""

    decision: Mapping[int, Mapping[int, int]]
    nature: Mapping[int, frozenset[int]]
    target: frozenset[int]

    def __post_init__(self):
        overlap = set(self.decision) & set(self.nature)
        if overlap:
            raise ValueError(f"states both decision and nature: {sorted(overlap)}")
        for s, succ in self.nature.items():
            if not succ:
                raise ValueError(f"nature state {s} has no successor")

    @property
    def states(self) -> frozenset[int]:
        return frozenset(self.decision) | frozenset(self.nature)

    def successors(self, s: int) -> frozenset[int]:
        if s in self.nature:
            return frozenset(self.nature[s])
        return frozenset(self.decision.get(s, {}).values())


def almost_sure_reach(m: MdpSkeleton) -> frozenset[int]:
    """States from which the decision player reaches ``m.target`` with probability one.

    Nested fixpoint: shrink a candidate set ``U`` to the states that can reach
    the target with positive probability while never being forced out of
    ``U``; repeat until ``U`` is stable.
    """
    # target states are absorbing whether or not they are listed as states
    target = frozenset(m.target)
    alive = set(m.states | target)
    pred: dict[int, list[int]] = {s: [] for s in alive}
    for s in alive:
        for t in m.successors(s):
            if t in pred:
                pred[t].append(s)

    while True:
        # positive-probability reachability of target inside `alive`,
        # where nature states count only if no successor escapes `alive`
        reach = set(target)
        stack = list(target)
        while stack:
            t = stack.pop()
            for s in pred[t]:
                if s in reach or s not in alive:
                    continue
                if s in m.nature and not m.nature[s] <= alive:
                    continue
                reach.add(s)
                stack.append(s)
        if reach == alive:
            return frozenset(alive)
        alive = reach
        # drop nature states that may leave, and decision states with no way to stay
        changed = True
        while changed:
            changed = False
            for s in list(alive):
                if s in target:
                    continue
                if s in m.nature:
                    ok = m.nature[s] <= alive
                else:
                    ok = any(t in alive for t in m.decision.get(s, {}).values())
                if not ok:
                    alive.discard(s)
                    changed = True


# -- oracles -----------------------------------------------------------------


def _check_oracle_size(n: int, widths: Iterable[int], max_states: int, max_actions: int) -> None:
    if n > max_states:
        raise TooLarge(f"{n} states exceeds oracle bound {max_states}")
    if any(w > max_actions for w in widths):
        raise TooLarge(f"a state has more than {max_actions} actions")


def sure_oracle(
    g: GameGraph,
    target: Iterable[int],
    reacher: Player = Player.P2,
    max_states: int = ORACLE_MAX_STATES,
    max_actions: int = ORACLE_MAX_ACTIONS,
) -> frozenset[int]:
    """Reacher's sure-winning region by enumerating all memoryless deterministic
    strategy pairs.

    A state wins iff some reacher strategy hits ``target`` against every
    opponent strategy.  Plays are evaluated for all pairs at once with numpy.
    """
    target = frozenset(target)
    n = g.n_states
    _check_oracle_size(n, (len(o) for o in g.edges), max_states, max_actions)
    if n == 0:
        return frozenset()
    mine = [s for s in range(n) if g.owner[s] is reacher and g.edges[s]]
    theirs = [s for s in range(n) if g.owner[s] is not reacher and g.edges[s]]
    # dead ends stay put: a play stuck there never reaches target
    base = np.arange(n)
    hit0 = np.zeros(n, dtype=bool)
    hit0[list(target)] = True

    def choices(states):
        return list(itertools.product(*[[t for _, t in g.edges[s]] for s in states]))

    opp = choices(theirs)
    opp_succ = np.tile(base, (len(opp), 1))
    if theirs:
        opp_succ[:, theirs] = np.array(opp, dtype=int)
    rows = np.arange(len(opp))[:, None]

    winners = np.zeros(n, dtype=bool)
    for combo in choices(mine):
        succ = opp_succ.copy()
        if mine:
            succ[:, mine] = combo
        hit = np.tile(hit0, (len(opp), 1))
        for _ in range(n):
            hit = hit | hit[rows, succ]
        winners |= hit.all(axis=0)
    return frozenset(int(s) for s in np.flatnonzero(winners))


def asr_oracle(
    m: MdpSkeleton,
    max_states: int = 2 * ORACLE_MAX_STATES,
    max_decisions: int = 10,
    max_actions: int = ORACLE_MAX_ACTIONS,
) -> frozenset[int]:
    """Almost-sure region by enumerating deterministic memoryless policies.

    Under a fixed policy the skeleton is a finite chain; a state reaches the
    (absorbing) target with probability one iff every state reachable from it
    can still reach the target.
    """
    states = sorted(m.states | m.target)
    if len(states) > max_states or len(m.decision) > max_decisions:
        raise TooLarge(f"skeleton with {len(states)} states / {len(m.decision)} decision states exceeds oracle bound")
    if any(len(acts) > max_actions for acts in m.decision.values()):
        raise TooLarge(f"a decision state has more than {max_actions} actions")
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)
    tgt = np.zeros(n, dtype=bool)
    for t in m.target:
        tgt[idx[t]] = True

    fixed = np.zeros((n, n), dtype=bool)
    for s, succ in m.nature.items():
        if s in m.target:
            continue
        for t in succ:
            fixed[idx[s], idx[t]] = True
    deciders = [s for s in sorted(m.decision) if s not in m.target and m.decision[s]]
    options = [sorted(m.decision[s].values()) for s in deciders]
    for t in m.target:
        fixed[idx[t], :] = False
        fixed[idx[t], idx[t]] = True

    winners = np.zeros(n, dtype=bool)
    for combo in itertools.product(*options):
        adj = fixed.copy()
        for s, t in zip(deciders, combo):
            adj[idx[s], idx[t]] = True
        # reflexive-transitive closure by repeated squaring
        reach = adj | np.eye(n, dtype=bool)
        while True:
            nxt = (reach.astype(np.int32) @ reach.astype(np.int32)) > 0
            if (nxt == reach).all():
                break
            reach = nxt
        can_hit = reach[:, tgt].any(axis=1)
        # from s, every reachable state must still be able to hit target
        ok = ~(reach & ~can_hit[None, :]).any(axis=1)
        winners |= ok
    return frozenset(states[i] for i in np.flatnonzero(winners))
