"""Value of deception, greedy and exhaustive decoy placement, set-function audits."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from decoygame.errors import InvalidParams, PlacementError, TooManyCombinations
from decoygame.game import DecoyPlacement, GameGraph
from decoygame.hypergame import Mode, deceptive_region, win2_minus_finals

EXHAUSTIVE_LIMIT = 100_000


@dataclass(frozen=True)
class CandidateGroup:
    """A set of states that is placed (as trap or fake) as one unit."""

    name: str
    members: frozenset[int]

    @property
    def key(self) -> int:
        return min(self.members)


def singleton_candidates(g: GameGraph) -> list[CandidateGroup]:
    return [CandidateGroup(g.state_names[s], frozenset([s])) for s in sorted(win2_minus_finals(g))]


def _check_pool(g: GameGraph, pool: Sequence[CandidateGroup]) -> list[CandidateGroup]:
    seen: set[int] = set()
    eligible = win2_minus_finals(g)
    for grp in pool:
        if not grp.members:
            raise PlacementError(f"candidate group {grp.name} is empty")
        if grp.members & seen:
            raise PlacementError(f"candidate group {grp.name} overlaps another group")
        if not grp.members <= eligible:
            raise PlacementError(f"candidate group {grp.name} leaves Win2(G, F) \\ F")
        seen |= grp.members
    return sorted(pool, key=lambda grp: grp.key)


def vod(g: GameGraph, p: DecoyPlacement, mode: Mode | str) -> Fraction:
    """Fraction of P2's non-final winning states that become deceptively winning for P1."""
    denom = len(win2_minus_finals(g))
    region = deceptive_region(g, p, mode)
    if denom == 0:
        return Fraction(0)
    return Fraction(len(region), denom)


@dataclass
class PlacementReport:
    mode: Mode
    traps: list[CandidateGroup] = field(default_factory=list)
    fakes: list[CandidateGroup] = field(default_factory=list)
    # one heatmap per greedy step: group name -> VoD with that group added
    iterations: list[dict[str, Fraction]] = field(default_factory=list)
    iteration_kinds: list[str] = field(default_factory=list)
    final_region: frozenset[int] = frozenset()
    final_vod: Fraction = Fraction(0)

    @property
    def placement(self) -> DecoyPlacement:
        return DecoyPlacement(
            frozenset().union(*(grp.members for grp in self.traps)),
            frozenset().union(*(grp.members for grp in self.fakes)),
        )

    def best_per_iteration(self) -> list[Fraction]:
        return [max(h.values()) for h in self.iterations]


def greedy_place(
    g: GameGraph,
    M: int,
    N: int,
    mode: Mode | str = Mode.SURE,
    candidates: Sequence[CandidateGroup] | None = None,
) -> PlacementReport:
    """Greedy decoy placement: up to ``N`` fakes first, then up to ``M`` traps.

    Each step adds the candidate whose addition maximises the deceptive
    region; ties go to the group with the smallest state id.
    """
    if M < 0 or N < 0:
        raise InvalidParams("budgets must be non-negative")
    mode = Mode.parse(mode)
    pool = _check_pool(g, singleton_candidates(g) if candidates is None else candidates)
    report = PlacementReport(mode)
    denom = len(win2_minus_finals(g))
    traps: frozenset[int] = frozenset()
    fakes: frozenset[int] = frozenset()
    used: set[int] = set()

    for kind, budget in (("fake", N), ("trap", M)):
        for _ in range(budget):
            eligible = [grp for grp in pool if grp.key not in used]
            if not eligible:
                break
            heat = {}
            best = None
            for grp in eligible:
                if kind == "fake":
                    p = DecoyPlacement(traps, fakes | grp.members)
                else:
                    p = DecoyPlacement(traps | grp.members, fakes)
                size = len(deceptive_region(g, p, mode))
                heat[grp.name] = Fraction(size, denom) if denom else Fraction(0)
                if best is None or size > best[0]:
                    best = (size, grp)
            chosen = best[1]
            used.add(chosen.key)
            if kind == "fake":
                fakes |= chosen.members
                report.fakes.append(chosen)
            else:
                traps |= chosen.members
                report.traps.append(chosen)
            report.iterations.append(heat)
            report.iteration_kinds.append(kind)

    final = DecoyPlacement(traps, fakes)
    report.final_region = deceptive_region(g, final, mode)
    report.final_vod = Fraction(len(report.final_region), denom) if denom else Fraction(0)
    return report


def count_placements(n: int, M: int, N: int) -> int:
    return sum(math.comb(n, j) * math.comb(n - j, i) for j in range(min(N, n) + 1) for i in range(min(M, n - j) + 1))


def exhaustive_place(
    g: GameGraph,
    M: int,
    N: int,
    mode: Mode | str = Mode.SURE,
    candidates: Sequence[CandidateGroup] | None = None,
    limit: int = EXHAUSTIVE_LIMIT,
) -> tuple[list[DecoyPlacement], Fraction]:
    """Every admissible placement with ``|X| <= M``, ``|Y| <= N``; returns all maximisers."""
    if M < 0 or N < 0:
        raise InvalidParams("budgets must be non-negative")
    mode = Mode.parse(mode)
    pool = _check_pool(g, singleton_candidates(g) if candidates is None else candidates)
    total = count_placements(len(pool), M, N)
    if total > limit:
        raise TooManyCombinations(f"{total} placements exceeds limit {limit}")
    denom = len(win2_minus_finals(g))
    best_size = -1
    best: list[DecoyPlacement] = []
    for j in range(min(N, len(pool)) + 1):
        for fake_groups in itertools.combinations(pool, j):
            rest = [grp for grp in pool if grp not in fake_groups]
            fakes = frozenset().union(*(grp.members for grp in fake_groups))
            for i in range(min(M, len(rest)) + 1):
                for trap_groups in itertools.combinations(rest, i):
                    traps = frozenset().union(*(grp.members for grp in trap_groups))
                    p = DecoyPlacement(traps, fakes)
                    size = len(deceptive_region(g, p, mode))
                    if size > best_size:
                        best_size, best = size, [p]
                    elif size == best_size:
                        best.append(p)
    optimum = Fraction(best_size, denom) if denom else Fraction(0)
    return best, optimum


@dataclass(frozen=True)
class AuditSample:
    base: frozenset[int]
    added: int
    other: int
    size_base: int
    size_added: int
    size_union: int
    superadditive: bool
    monotone: bool
    union_contained: bool
    union_equality: bool
    intersection_equality: bool


@dataclass
class AuditReport:
    mode: Mode
    kind: str
    samples: list[AuditSample] = field(default_factory=list)

    @property
    def superadditivity_violations(self) -> list[AuditSample]:
        return [x for x in self.samples if not x.superadditive]

    @property
    def monotonicity_violations(self) -> list[AuditSample]:
        return [x for x in self.samples if not x.monotone]

    @property
    def union_containment_violations(self) -> list[AuditSample]:
        return [x for x in self.samples if not x.union_contained]

    @property
    def greedy_bound_applicable(self) -> bool:
        """Whether the sampled union or intersection condition held everywhere."""
        if not self.samples:
            return False
        return all(x.union_equality for x in self.samples) or all(x.intersection_equality for x in self.samples)


def superadditivity_audit(
    g: GameGraph,
    mode: Mode | str = Mode.SURE,
    sample_count: int = 50,
    seed: int = 0,
    kind: str = "fake",
    max_base: int = 3,
) -> AuditReport:
    """Sample ``(Y, s1, s2)`` and check the growth properties of the region map.

    ``kind="fake"`` varies the fake-target set with no traps; ``"trap"``
    varies traps with no fakes.
    """
    mode = Mode.parse(mode)
    if kind not in ("fake", "trap"):
        raise InvalidParams(f"unknown decoy kind {kind!r}")
    rng = random.Random(seed)
    pool = sorted(win2_minus_finals(g))
    report = AuditReport(mode, kind)
    if len(pool) < 2:
        return report
    cache: dict[frozenset[int], frozenset[int]] = {}

    def region(states: frozenset[int]) -> frozenset[int]:
        if states not in cache:
            p = DecoyPlacement(fakes=states) if kind == "fake" else DecoyPlacement(traps=states)
            cache[states] = deceptive_region(g, p, mode)
        return cache[states]

    for _ in range(sample_count):
        k = rng.randint(0, min(max_base, len(pool) - 2))
        chosen = rng.sample(pool, k + 2)
        base = frozenset(chosen[:k])
        s1, s2 = chosen[k], chosen[k + 1]
        r_base = region(base)
        r_s = region(frozenset([s1]))
        r_1 = region(base | {s1})
        r_2 = region(base | {s2})
        report.samples.append(
            AuditSample(
                base=base,
                added=s1,
                other=s2,
                size_base=len(r_base),
                size_added=len(r_s),
                size_union=len(r_1),
                superadditive=len(r_base) + len(r_s) <= len(r_1),
                monotone=r_base <= r_1,
                union_contained=(r_base | r_s) <= r_1,
                union_equality=(r_base | r_s) == r_1,
                intersection_equality=(r_1 & r_2) == r_base,
            )
        )
    return report
