"""Small hand-built games used in docs, tests and the bundled JSON files."""
from __future__ import annotations

from decoygame.game import GameGraph, Player

P1, P2 = Player.P1, Player.P2


def running_example() -> GameGraph:
    """The 12-state game with P2 aiming for ``s0`` or ``s1``."""
    owners = {
        "s0": P2, "s1": P1, "s2": P2, "s3": P1, "s4": P1, "s5": P2,
        "s6": P2, "s7": P1, "s8": P2, "s9": P1, "s10": P1, "s11": P2,
    }
    transitions = [
        ("s0", "top", "s0"),
        ("s1", "top", "s1"),
        ("s2", "b2", "s0"), ("s2", "b1", "s5"),
        ("s3", "a1", "s0"), ("s3", "a2", "s1"),
        ("s4", "a2", "s1"),
        ("s5", "b2", "s2"), ("s5", "b1", "s7"),
        ("s6", "b1", "s3"), ("s6", "b2", "s4"),
        ("s7", "a1", "s5"), ("s7", "a2", "s6"),
        ("s8", "b1", "s7"), ("s8", "b2", "s8"),
        ("s9", "a2", "s6"), ("s9", "a1", "s8"),
        ("s10", "a1", "s8"), ("s10", "a2", "s10"),
        ("s11", "b2", "s10"),
    ]
    return GameGraph.build(
        states=list(owners.items()),
        actions=[("a1", P1), ("a2", P1), ("top", P1), ("b1", P2), ("b2", P2), ("top", P2)],
        transitions=transitions,
        initial="s9",
        finals=["s0", "s1"],
    )


def toy_counterexample() -> GameGraph:
    """7-state game where deceptive almost-sure winning is strictly weaker than sure."""
    owners = {"s0": P2, "s1": P1, "s2": P1, "s3": P1, "s4": P2, "s5": P1, "s6": P2}
    transitions = [
        ("s0", "top", "s0"),
        ("s1", "a", "s0"), ("s2", "a", "s0"), ("s3", "a", "s0"),
        ("s4", "a", "s1"), ("s4", "b", "s2"), ("s4", "c", "s5"),
        ("s5", "a", "s6"),
        ("s6", "a", "s3"),
    ]
    return GameGraph.build(
        states=list(owners.items()),
        actions=[("a", P1), ("a", P2), ("b", P2), ("c", P2), ("top", P2)],
        transitions=transitions,
        initial="s4",
        finals=["s0"],
    )
