"""Reachability games on graphs with trap and fake-target decoys."""
from decoygame.errors import (
    DecoyGameError,
    DecoysOutsideWin2,
    IncompatibleComposition,
    InvalidConfig,
    InvalidParams,
    MissingChoice,
    ParseError,
    PlacementError,
    PlacementOverlapsFinals,
    SchemaError,
    TooLarge,
    TooManyCombinations,
    TrapFakeOverlap,
    UnknownState,
    ValidationError,
)
from decoygame.game import (
    DecoyPlacement,
    DeterministicStrategy,
    GameGraph,
    Path,
    Player,
    StrategySupport,
    TerminalKind,
    deterministic_outcome,
    reachable_play_graph,
    validate_game,
)
from decoygame.solver import (
    INF,
    MdpSkeleton,
    SolveResult,
    almost_sure_reach,
    asr_oracle,
    attractor,
    greedy_reacher_supports,
    opponent_safety_supports,
    randomized_reacher_supports,
    sure_oracle,
)
from decoygame.hypergame import (
    HypergameModel,
    Mode,
    RationalizableActionMap,
    build_hypergame,
    compose_regions,
    daswin,
    deceptive_region,
    deceptive_strategy,
    dswin,
    perceptual_game,
    rationalizable_actions,
    true_game,
)
from decoygame.placement import (
    AuditReport,
    CandidateGroup,
    PlacementReport,
    exhaustive_place,
    greedy_place,
    singleton_candidates,
    superadditivity_audit,
    vod,
)
from decoygame.generators import GridworldConfig, gridworld, gridworld_candidates, random_game
from decoygame.io import load_document, load_game, save_game

__version__ = "0.1.0"
