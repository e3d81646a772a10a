"""True/perceptual games, subjectively rationalizable actions and deceptive regions.

P1 knows where the traps ``X`` and fake targets ``Y`` are; P2 does not.
P2 plans in its perceptual game (finals ``F | Y``) and only plays actions
consistent with winning there.  P1's deceptive regions are computed by
solving a reachability game (sure) or an MDP (almost-sure) for ``X | Y``
over P2's base winning region, with P2 restricted to those actions.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from decoygame.errors import DecoysOutsideWin2, IncompatibleComposition
from decoygame.game import DecoyPlacement, GameGraph, Player, StrategySupport
from decoygame.solver import MdpSkeleton, SolveResult, almost_sure_reach, attractor, greedy_reacher_supports


class Mode(enum.Enum):
    SURE = "sure"
    ALMOST_SURE = "almost-sure"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        text = str(value).strip().lower().replace("_", "-")
        if text in ("almost-sure", "almostsure", "as"):
            return cls.ALMOST_SURE
        if text == "sure":
            return cls.SURE
        raise ValueError(f"unknown mode {value!r}")


def true_game(g: GameGraph, p: DecoyPlacement) -> GameGraph:
    """The arena as P1 knows it: every decoy is a sink, finals unchanged."""
    p.check(g)
    return g.with_sinks(p.decoys)


def perceptual_game(g: GameGraph, p: DecoyPlacement) -> GameGraph:
    """P2's view: original transitions, fake targets added to the finals.

    Fakes keep their outgoing edges; they are rank 0 so the edges never
    matter to the attractor.
    """
    p.check(g)
    return g.replace(finals=g.finals | p.fakes)


@lru_cache(maxsize=64)
def base_solution(g: GameGraph) -> SolveResult:
    """P2's attractor to ``F`` in the base game (cached per game)."""
    return attractor(g, g.finals, Player.P2)


def win2_minus_finals(g: GameGraph) -> frozenset[int]:
    return base_solution(g).win_reacher - g.finals


@dataclass(frozen=True)
class RationalizableActionMap:
    sracts: Mapping[int, frozenset[int]]
    mode: Mode

    def __getitem__(self, s: int) -> frozenset[int]:
        return self.sracts[s]


def rationalizable_actions(g: GameGraph, p: DecoyPlacement, mode: Mode | str) -> RationalizableActionMap:
    """P2-rationalizable actions at every state.

    Inside P2's perceptual winning region (excluding perceived goals) P2
    keeps rank-reducing actions under ``SURE`` and region-preserving actions
    under ``ALMOST_SURE``.  Everywhere else every enabled action is kept.
    """
    mode = Mode.parse(mode)
    perc = perceptual_game(g, p)
    res = attractor(perc, perc.finals, Player.P2) if p.fakes else base_solution(g)
    region = res.win_reacher
    sracts = {}
    for s in g.states:
        out = g.edges[s]
        if g.owner[s] is Player.P1 or s not in region or s in perc.finals:
            sracts[s] = frozenset(a for a, _ in out)
        elif mode is Mode.SURE:
            sracts[s] = frozenset(a for a, t in out if res.rank[t] < res.rank[s])
        else:
            sracts[s] = frozenset(a for a, t in out if t in region)
    return RationalizableActionMap(sracts, mode)


@dataclass(frozen=True)
class HypergameModel:
    """P1's reachability problem for ``X | Y`` over P2's base winning region.

    In ``SURE`` mode ``game`` is the restricted arena (re-indexed; use
    ``state_map`` to recover original ids) whose finals are the decoys.  In
    ``ALMOST_SURE`` mode ``mdp`` holds P1 decision states and P2 nature
    states, keyed by original ids.
    """

    mode: Mode
    states: frozenset[int]
    target: frozenset[int]
    sracts: RationalizableActionMap
    game: GameGraph | None = None
    state_map: tuple[int, ...] = ()
    mdp: MdpSkeleton | None = None

    @property
    def arena(self):
        return self.game if self.mode is Mode.SURE else self.mdp

    def to_arena(self, states: Iterable[int]) -> frozenset[int]:
        index = {s: i for i, s in enumerate(self.state_map)}
        return frozenset(index[s] for s in states if s in index)

    def from_arena(self, states: Iterable[int]) -> frozenset[int]:
        return frozenset(self.state_map[i] for i in states)


def _require_in_win2(g: GameGraph, p: DecoyPlacement) -> frozenset[int]:
    p.check(g)
    win2 = base_solution(g).win_reacher
    outside = p.decoys - (win2 - g.finals)
    if outside:
        raise DecoysOutsideWin2(f"decoys outside Win2(G, F) \\ F: {g.names(outside)}")
    return win2


def build_hypergame(g: GameGraph, p: DecoyPlacement, mode: Mode | str) -> HypergameModel:
    mode = Mode.parse(mode)
    win2 = _require_in_win2(g, p)
    sr = rationalizable_actions(g, p, mode)
    truth = true_game(g, p)
    decoys = p.decoys
    if mode is Mode.SURE:
        allowed = {s: sr[s] for s in win2 if s not in decoys}
        arena, order = truth.subgame(win2, allowed, finals=decoys)
        return HypergameModel(mode, win2, decoys, sr, game=arena, state_map=order)

    decision = {}
    nature = {}
    for s in sorted(win2):
        if g.owner[s] is Player.P1:
            decision[s] = {a: t for a, t in truth.edges[s]}
        else:
            acts = sr[s] if s not in decoys else truth.enabled(s)
            nature[s] = frozenset(t for a, t in truth.edges[s] if a in acts)
    mdp = MdpSkeleton(decision=decision, nature=nature, target=decoys)
    return HypergameModel(mode, win2, decoys, sr, mdp=mdp)


def _solve_sure(model: HypergameModel, target: Iterable[int]) -> tuple[SolveResult, frozenset[int]]:
    res = attractor(model.game, model.to_arena(target), Player.P1)
    return res, model.from_arena(res.win_reacher)


def dswin(g: GameGraph, p: DecoyPlacement) -> frozenset[int]:
    """P1's stealthy deceptive sure-winning region."""
    model = build_hypergame(g, p, Mode.SURE)
    return _solve_sure(model, model.target)[1]


def daswin(g: GameGraph, p: DecoyPlacement) -> frozenset[int]:
    """P1's stealthy deceptive almost-sure winning region."""
    model = build_hypergame(g, p, Mode.ALMOST_SURE)
    return almost_sure_reach(model.mdp)


def deceptive_region(g: GameGraph, p: DecoyPlacement, mode: Mode | str) -> frozenset[int]:
    return dswin(g, p) if Mode.parse(mode) is Mode.SURE else daswin(g, p)


def deceptive_strategy(g: GameGraph, p: DecoyPlacement, mode: Mode | str) -> StrategySupport:
    """Supports of P1's stealthy deceptive strategy on its deceptive region.

    Sure mode keeps P1's rank-reducing actions in the hypergame attractor;
    almost-sure mode keeps every action that stays in the almost-sure region.
    Decoys are sinks and get no entry.
    """
    mode = Mode.parse(mode)
    model = build_hypergame(g, p, mode)
    if mode is Mode.SURE:
        res, _ = _solve_sure(model, model.target)
        local = greedy_reacher_supports(res, model.game)
        support = {
            model.state_map[s]: frozenset(acts) for s, acts in local.items()
        }
        return StrategySupport(Player.P1, support)

    region = almost_sure_reach(model.mdp)
    support = {}
    for s in sorted(region - model.target):
        if s in model.mdp.decision:
            support[s] = frozenset(a for a, t in model.mdp.decision[s].items() if t in region)
    return StrategySupport(Player.P1, support)


def compose_regions(
    g: GameGraph,
    p_base: DecoyPlacement,
    region_a: Iterable[int],
    region_b: Iterable[int],
    mode: Mode | str,
    sources: tuple[DecoyPlacement, DecoyPlacement] | None = None,
) -> frozenset[int]:
    """Solve the hypergame of ``p_base`` with P1's target ``region_a | region_b``.

    ``region_a``/``region_b`` are deceptive regions of placements contained
    in ``p_base`` (pass them as ``sources`` to have that checked).  The
    result equals the region of ``p_base`` computed directly.
    """
    mode = Mode.parse(mode)
    if sources is not None:
        for src in sources:
            if not (src.traps <= p_base.traps and src.fakes <= p_base.fakes):
                raise IncompatibleComposition("source placement is not contained in the base placement")
    model = build_hypergame(g, p_base, mode)
    target = frozenset(region_a) | frozenset(region_b)
    stray = target - model.states
    if stray:
        raise IncompatibleComposition(f"regions leave the hypergame arena: {g.names(stray)}")
    if mode is Mode.SURE:
        return _solve_sure(model, target)[1]
    mdp = MdpSkeleton(decision=model.mdp.decision, nature=model.mdp.nature, target=target)
    return almost_sure_reach(mdp)
