"""Game arena data model and play semantics.

A :class:`GameGraph` is a finite two-player turn-based arena with a
deterministic, partial transition function.  States and actions are dense
integer ids; human-readable names are kept alongside for I/O.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from decoygame.errors import MissingChoice, PlacementOverlapsFinals, SchemaError, TrapFakeOverlap, UnknownState


class Player(enum.IntEnum):
    P1 = 1
    P2 = 2

    @property
    def opponent(self) -> "Player":
        return Player.P2 if self is Player.P1 else Player.P1

    @classmethod
    def parse(cls, value) -> "Player":
        if isinstance(value, Player):
            return value
        text = str(value).strip().upper()
        if text in ("1", "P1"):
            return cls.P1
        if text in ("2", "P2"):
            return cls.P2
        raise ValueError(f"unknown player {value!r}")


@dataclass(frozen=True)
class GameGraph:
    """Two-player turn-based arena ``<S, A, T, s0, F>``.

    ``edges[s]`` lists the defined ``(action, successor)`` pairs at ``s``,
    sorted by action id.  Use :meth:`build` to construct one from names.
    """

    state_names: tuple[str, ...]
    owner: tuple[Player, ...]
    action_names: tuple[str, ...]
    action_owner: tuple[Player, ...]
    edges: tuple[tuple[tuple[int, int], ...], ...]
    initial: int
    finals: frozenset[int]

    def __post_init__(self):
        n = len(self.state_names)
        if len(self.owner) != n or len(self.edges) != n:
            raise SchemaError("owner/edges length does not match the number of states")
        if len(self.action_owner) != len(self.action_names):
            raise SchemaError("action_owner length does not match the number of actions")
        for s, out in enumerate(self.edges):
            seen = set()
            for a, t in out:
                if not 0 <= a < len(self.action_names):
                    raise SchemaError(f"transition ({self.state_names[s]}, {a}) uses an unknown action")
                if not 0 <= t < n:
                    raise SchemaError(f"transition ({self.state_names[s]}, {self.action_names[a]}) -> {t}: unknown target")
                if a in seen:
                    raise SchemaError(f"duplicate transition for ({self.state_names[s]}, {self.action_names[a]})")
                seen.add(a)
        if n and not 0 <= self.initial < n:
            raise SchemaError(f"initial state {self.initial} out of range")
        bad = [f for f in self.finals if not 0 <= f < n]
        if bad:
            raise SchemaError(f"final states out of range: {sorted(bad)}")

    @classmethod
    def build(
        cls,
        states: Sequence[tuple[str, Player | str | int]],
        actions: Sequence[tuple[str, Player | str | int]],
        transitions: Iterable[tuple[str, str, str]],
        initial: str,
        finals: Iterable[str],
    ) -> "GameGraph":
        """Construct a game from names.

        Action names only need to be unique per owner; a transition
        ``(state, action, target)`` resolves ``action`` against the owner of
        ``state`` first, so both players may use an action called ``a``.
        """
        names = [str(name) for name, _ in states]
        owner = [Player.parse(p) for _, p in states]
        index = {name: i for i, name in enumerate(names)}
        if len(index) != len(names):
            raise SchemaError("duplicate state names")
        anames = [str(name) for name, _ in actions]
        aowner = [Player.parse(p) for _, p in actions]
        aindex: dict[tuple[str, Player], int] = {}
        for i, key in enumerate(zip(anames, aowner)):
            if key in aindex:
                raise SchemaError(f"duplicate action {key[0]!r} for {key[1].name}")
            aindex[key] = i
        out: list[dict[int, int]] = [{} for _ in names]
        for src, act, dst in transitions:
            if src not in index:
                raise SchemaError(f"transition ({src}, {act}, {dst}): unknown source state")
            if dst not in index:
                raise SchemaError(f"transition ({src}, {act}, {dst}): unknown target state")
            s = index[src]
            a = aindex.get((act, owner[s]))
            if a is None:
                a = aindex.get((act, owner[s].opponent))
            if a is None:
                raise SchemaError(f"transition ({src}, {act}, {dst}): unknown action")
            if a in out[s] and out[s][a] != index[dst]:
                raise SchemaError(f"transition ({src}, {act}): more than one successor")
            out[s][a] = index[dst]
        if initial not in index:
            raise SchemaError(f"unknown initial state {initial!r}")
        fin = []
        for f in finals:
            if f not in index:
                raise SchemaError(f"unknown final state {f!r}")
            fin.append(index[f])
        return cls(
            state_names=tuple(names),
            owner=tuple(owner),
            action_names=tuple(anames),
            action_owner=tuple(aowner),
            edges=tuple(tuple(sorted(o.items())) for o in out),
            initial=index[initial],
            finals=frozenset(fin),
        )

    # -- queries -----------------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.state_names)

    @property
    def n_transitions(self) -> int:
        return sum(len(out) for out in self.edges)

    @property
    def states(self) -> range:
        return range(self.n_states)

    def successors(self, s: int) -> tuple[tuple[int, int], ...]:
        return self.edges[s]

    def step(self, s: int, a: int) -> int | None:
        for b, t in self.edges[s]:
            if b == a:
                return t
        return None

    def enabled(self, s: int) -> frozenset[int]:
        return frozenset(a for a, _ in self.edges[s])

    def states_of(self, player: Player) -> frozenset[int]:
        return frozenset(s for s in self.states if self.owner[s] is player)

    def is_sink(self, s: int) -> bool:
        return all(t == s for _, t in self.edges[s])

    @cached_property
    def predecessors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """``predecessors[t]`` lists ``(s, a)`` with ``T(s, a) = t``."""
        pred: list[list[tuple[int, int]]] = [[] for _ in self.states]
        for s, out in enumerate(self.edges):
            for a, t in out:
                pred[t].append((s, a))
        return tuple(tuple(p) for p in pred)

    @cached_property
    def _state_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.state_names)}

    def state_id(self, name: str | int) -> int:
        if isinstance(name, int):
            if 0 <= name < self.n_states:
                return name
            raise UnknownState(name)
        try:
            return self._state_index[name]
        except KeyError:
            raise UnknownState(name) from None

    def ids(self, names: Iterable[str | int]) -> frozenset[int]:
        return frozenset(self.state_id(n) for n in names)

    def names(self, ids: Iterable[int]) -> list[str]:
        return [self.state_names[i] for i in sorted(ids)]

    def action_id(self, name: str, owner: Player | None = None) -> int:
        for i, (n, p) in enumerate(zip(self.action_names, self.action_owner)):
            if n == name and (owner is None or p is owner):
                return i
        raise KeyError(name)

    # -- derived games -----------------------------------------------------

    def replace(self, *, edges=None, finals=None, initial=None) -> "GameGraph":
        return GameGraph(
            state_names=self.state_names,
            owner=self.owner,
            action_names=self.action_names,
            action_owner=self.action_owner,
            edges=self.edges if edges is None else tuple(edges),
            initial=self.initial if initial is None else initial,
            finals=self.finals if finals is None else frozenset(finals),
        )

    def with_sinks(self, sinks: Iterable[int]) -> "GameGraph":
        """Rewrite every defined transition of ``sinks`` into a self-loop."""
        sinks = frozenset(sinks)
        edges = tuple(
            tuple((a, s) for a, _ in out) if s in sinks else out for s, out in enumerate(self.edges)
        )
        return self.replace(edges=edges)

    def subgame(
        self,
        keep: Iterable[int],
        allowed: Mapping[int, Iterable[int]] | None = None,
        finals: Iterable[int] = (),
    ) -> tuple["GameGraph", tuple[int, ...]]:
        """Restrict the arena to ``keep``, optionally filtering actions per state.

        Returns the restricted game (re-indexed densely) and the map from
        new ids to original ids.  Transitions leaving ``keep`` are dropped.
        """
        order = tuple(sorted(set(keep)))
        new_id = {s: i for i, s in enumerate(order)}
        edges = []
        for s in order:
            ok = None if allowed is None or s not in allowed else set(allowed[s])
            edges.append(
                tuple(
                    (a, new_id[t])
                    for a, t in self.edges[s]
                    if t in new_id and (ok is None or a in ok)
                )
            )
        init = new_id.get(self.initial, 0)
        sub = GameGraph(
            state_names=tuple(self.state_names[s] for s in order),
            owner=tuple(self.owner[s] for s in order),
            action_names=self.action_names,
            action_owner=self.action_owner,
            edges=tuple(edges),
            initial=init,
            finals=frozenset(new_id[f] for f in finals if f in new_id),
        )
        return sub, order


@dataclass(frozen=True)
class DecoyPlacement:
    """Disjoint sets of traps (X) and fake targets (Y)."""

    traps: frozenset[int] = frozenset()
    fakes: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "traps", frozenset(self.traps))
        object.__setattr__(self, "fakes", frozenset(self.fakes))

    @property
    def decoys(self) -> frozenset[int]:
        return self.traps | self.fakes

    def check(self, g: GameGraph) -> None:
        for s in self.decoys:
            g.state_id(s)
        if self.traps & self.fakes:
            raise TrapFakeOverlap(f"states used as both trap and fake: {g.names(self.traps & self.fakes)}")
        if self.decoys & g.finals:
            raise PlacementOverlapsFinals(f"decoys placed on final states: {g.names(self.decoys & g.finals)}")

    @classmethod
    def named(cls, g: GameGraph, traps: Iterable[str | int] = (), fakes: Iterable[str | int] = ()) -> "DecoyPlacement":
        return cls(g.ids(traps), g.ids(fakes))


@dataclass(frozen=True)
class DeterministicStrategy:
    player: Player
    choice: Mapping[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class StrategySupport:
    """Supports of a memoryless randomized strategy: state -> set of actions."""

    player: Player
    support: Mapping[int, frozenset[int]] = field(default_factory=dict)

    def __getitem__(self, s: int) -> frozenset[int]:
        return self.support[s]

    def __contains__(self, s: int) -> bool:
        return s in self.support

    def __len__(self) -> int:
        return len(self.support)

    def items(self):
        return self.support.items()


class TerminalKind(enum.Enum):
    HIT_TARGET = "hit_target"
    ENTERED_SINK = "entered_sink"
    CYCLE_DETECTED = "cycle_detected"


@dataclass(frozen=True)
class Path:
    states: tuple[int, ...]
    terminal_kind: TerminalKind


def validate_game(g: GameGraph) -> list[str]:
    """Return a description of every violated arena invariant (empty if valid)."""
    problems = []
    for s in g.states:
        name = g.state_names[s]
        out = g.edges[s]
        if not out:
            problems.append(f"dead end: state {name} has no outgoing transition")
        for a, t in out:
            if g.action_owner[a] is not g.owner[s]:
                problems.append(
                    f"owner mismatch: action {g.action_names[a]} ({g.action_owner[a].name}) "
                    f"at state {name} ({g.owner[s].name})"
                )
        if s in g.finals and any(t != s for _, t in out):
            problems.append(f"final not sink: state {name} has an edge leaving it")
    return problems


def _choose(s: int, g: GameGraph, p1: DeterministicStrategy, p2: DeterministicStrategy) -> int:
    strategy = p1 if g.owner[s] is Player.P1 else p2
    if s not in strategy.choice:
        raise MissingChoice(f"no action chosen at state {g.state_names[s]}")
    a = strategy.choice[s]
    t = g.step(s, a)
    if t is None:
        raise MissingChoice(f"chosen action {g.action_names[a]} is undefined at state {g.state_names[s]}")
    return t


def deterministic_outcome(
    g: GameGraph, s: int, p1: DeterministicStrategy, p2: DeterministicStrategy
) -> Path:
    """Follow a pair of deterministic strategies from ``s``.

    Stops when a final state or a sink is entered, or a state repeats.
    Sinks need no chosen action.
    """
    visited = [s]
    seen = {s}
    while True:
        if s in g.finals:
            return Path(tuple(visited), TerminalKind.HIT_TARGET)
        if g.is_sink(s):
            return Path(tuple(visited), TerminalKind.ENTERED_SINK)
        s = _choose(s, g, p1, p2)
        visited.append(s)
        if s in seen and s not in g.finals:
            return Path(tuple(visited), TerminalKind.CYCLE_DETECTED)
        seen.add(s)


def reachable_play_graph(
    g: GameGraph, s: int, p1: StrategySupport, p2: StrategySupport
) -> frozenset[tuple[int, int, int]]:
    """Edges traversable from ``s`` when both players stay inside their supports.

    Final states and sinks end a play, so their self-loops are not listed and
    they need no support entry.
    """
    edges = set()
    stack = [s]
    seen = {s}
    while stack:
        u = stack.pop()
        if u in g.finals or g.is_sink(u):
            continue
        strategy = p1 if g.owner[u] is Player.P1 else p2
        if u not in strategy.support:
            raise MissingChoice(f"no support at reachable state {g.state_names[u]}")
        acts = strategy.support[u]
        out = [(a, t) for a, t in g.edges[u] if a in acts]
        if len(out) != len(acts):
            raise MissingChoice(f"support at {g.state_names[u]} lists undefined actions")
        for a, t in out:
            edges.add((u, a, t))
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(edges)
