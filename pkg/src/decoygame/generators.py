"""Cat-and-mouse gridworld and seeded random games."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from decoygame.errors import InvalidConfig, InvalidParams
from decoygame.game import GameGraph, Player
from decoygame.hypergame import base_solution
from decoygame.placement import CandidateGroup

Cell = tuple[int, int]

MOVES = {"N": (-1, 0), "E": (0, 1), "S": (1, 0), "W": (0, -1)}


@dataclass(frozen=True)
class GridworldConfig:
    rows: int
    cols: int
    obstacles: frozenset[Cell] = frozenset()
    cheese: frozenset[Cell] = frozenset()
    cat_start: Cell | None = None
    mouse_start: Cell | None = None
    # who moves at the initial state
    first_turn: Player = Player.P2
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "obstacles", frozenset(tuple(c) for c in self.obstacles))
        object.__setattr__(self, "cheese", frozenset(tuple(c) for c in self.cheese))
        object.__setattr__(self, "first_turn", Player.parse(self.first_turn))
        for name in ("cat_start", "mouse_start"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, tuple(value))

    def validate(self) -> None:
        if self.rows <= 0 or self.cols <= 0:
            raise InvalidConfig("grid must have positive dimensions")
        for cell in self.obstacles | self.cheese:
            if not self.in_bounds(cell):
                raise InvalidConfig(f"cell {cell} is out of bounds")
        if self.cheese & self.obstacles:
            raise InvalidConfig(f"cheese on obstacles: {sorted(self.cheese & self.obstacles)}")
        if not self.free_cells():
            raise InvalidConfig("no free cells")
        for name in ("cat_start", "mouse_start"):
            cell = getattr(self, name)
            if cell is not None and (not self.in_bounds(cell) or cell in self.obstacles):
                raise InvalidConfig(f"{name} {cell} is not a free cell")
        if self.mouse_start is not None and self.mouse_start in self.cheese:
            raise InvalidConfig("the mouse may not start on real cheese")

    def to_dict(self) -> dict:
        doc = {
            "rows": self.rows,
            "cols": self.cols,
            "obstacles": [list(c) for c in sorted(self.obstacles)],
            "cheese": [list(c) for c in sorted(self.cheese)],
            "cat_start": list(self.cat_start) if self.cat_start else None,
            "mouse_start": list(self.mouse_start) if self.mouse_start else None,
            "first_turn": self.first_turn.name,
        }
        if self.extra:
            doc["extra"] = dict(self.extra)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "GridworldConfig":
        try:
            return cls(
                rows=int(doc["rows"]),
                cols=int(doc["cols"]),
                obstacles=frozenset(tuple(c) for c in doc.get("obstacles", [])),
                cheese=frozenset(tuple(c) for c in doc.get("cheese", [])),
                cat_start=doc.get("cat_start"),
                mouse_start=doc.get("mouse_start"),
                first_turn=doc.get("first_turn", "P2"),
                extra=dict(doc.get("extra", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig(f"bad gridworld config: {exc}") from None

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.rows and 0 <= c < self.cols

    def free_cells(self) -> list[Cell]:
        return [(r, c) for r in range(self.rows) for c in range(self.cols) if (r, c) not in self.obstacles]

    def eligible_cells(self) -> list[Cell]:
        """Cells where a decoy may go: free and not real cheese."""
        return [cell for cell in self.free_cells() if cell not in self.cheese]


def _move(cfg: GridworldConfig, cell: Cell, d: str) -> Cell:
    dr, dc = MOVES[d]
    nxt = (cell[0] + dr, cell[1] + dc)
    if not cfg.in_bounds(nxt) or nxt in cfg.obstacles:
        return cell
    return nxt


def state_name(cat: Cell, mouse: Cell, turn: Player) -> str:
    return f"({cat[0]},{cat[1]},{mouse[0]},{mouse[1]},{turn.name})"


def gridworld(cfg: GridworldConfig) -> tuple[GameGraph, dict[Cell, frozenset[int]]]:
    """Build the cat (P1) and mouse (P2) game.

    A state is ``(cat cell, mouse cell, turn)``.  Moves off the board or into
    an obstacle leave the mover in place.  Mouse-on-cheese states without the
    cat are the finals; capture states (same cell) are non-final sinks.

    Returns the game and, for each eligible cell, the states with the mouse
    on that cell (cat elsewhere) that lie in P2's winning region.
    """
    cfg.validate()
    free = cfg.free_cells()
    states = []
    transitions = []
    finals = []
    for turn in (Player.P1, Player.P2):
        for cat in free:
            for mouse in free:
                name = state_name(cat, mouse, turn)
                states.append((name, turn))
                captured = cat == mouse
                goal = mouse in cfg.cheese and not captured
                if goal:
                    finals.append(name)
                for d in MOVES:
                    if captured or goal:
                        transitions.append((name, d, name))
                    elif turn is Player.P1:
                        transitions.append((name, d, state_name(_move(cfg, cat, d), mouse, Player.P2)))
                    else:
                        transitions.append((name, d, state_name(cat, _move(cfg, mouse, d), Player.P1)))

    cat0 = cfg.cat_start or free[0]
    mouse0 = cfg.mouse_start
    if mouse0 is None:
        options = [c for c in reversed(free) if c not in cfg.cheese and c != cat0]
        mouse0 = options[0] if options else free[-1]
    g = GameGraph.build(
        states=states,
        actions=[(d, Player.P1) for d in MOVES] + [(d, Player.P2) for d in MOVES],
        transitions=transitions,
        initial=state_name(cat0, mouse0, cfg.first_turn),
        finals=finals,
    )
    win2 = base_solution(g).win_reacher
    groups = {}
    for cell in cfg.eligible_cells():
        members = frozenset(
            g.state_id(state_name(cat, cell, turn))
            for turn in (Player.P1, Player.P2)
            for cat in free
            if cat != cell
        ) & win2
        groups[cell] = members
    return g, groups


def cell_name(cell: Cell) -> str:
    return f"({cell[0]},{cell[1]})"


def gridworld_candidates(groups: dict[Cell, frozenset[int]]) -> list[CandidateGroup]:
    """One candidate per eligible cell; cells with no Win2 states are left out."""
    return [CandidateGroup(cell_name(cell), members) for cell, members in sorted(groups.items()) if members]


def random_game(
    n_states: int = 150,
    n_p1: int = 75,
    max_actions: int = 5,
    seed: int = 0,
    n_finals: int | None = None,
) -> GameGraph:
    """Seeded random arena.

    Owners are shuffled, ``n_finals`` states (default ``max(1, n_states // 15)``)
    become self-looping finals, and every other state gets between 1 and
    ``max_actions`` actions with uniformly chosen successors.
    """
    if n_states < 1 or not 0 <= n_p1 <= n_states or max_actions < 1:
        raise InvalidParams(f"bad sizes: n_states={n_states}, n_p1={n_p1}, max_actions={max_actions}")
    if n_finals is None:
        n_finals = max(1, n_states // 15)
    if not 0 <= n_finals <= n_states:
        raise InvalidParams(f"n_finals={n_finals} out of range")
    rng = random.Random(seed)
    owners = [Player.P1] * n_p1 + [Player.P2] * (n_states - n_p1)
    rng.shuffle(owners)
    finals = set(rng.sample(range(n_states), n_finals))
    names = [f"s{i}" for i in range(n_states)]
    prefix = {Player.P1: "a", Player.P2: "b"}
    transitions = []
    for s in range(n_states):
        p = prefix[owners[s]]
        if s in finals:
            transitions.append((names[s], f"{p}1", names[s]))
            continue
        for k in range(rng.randint(1, max_actions)):
            transitions.append((names[s], f"{p}{k + 1}", names[rng.randrange(n_states)]))
    actions = [(f"a{k + 1}", Player.P1) for k in range(max_actions)] + [
        (f"b{k + 1}", Player.P2) for k in range(max_actions)
    ]
    initial = next((names[s] for s in range(n_states) if s not in finals), names[0])
    return GameGraph.build(
        states=list(zip(names, owners)),
        actions=actions,
        transitions=transitions,
        initial=initial,
        finals=[names[s] for s in sorted(finals)],
    )
