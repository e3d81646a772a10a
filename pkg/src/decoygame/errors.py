"""Exception hierarchy shared by all modules."""


class DecoyGameError(Exception):
    """Base class for every error raised by this package."""


class MissingChoice(DecoyGameError):
    """A reachable state owned by a strategy's player has no chosen action."""


class UnknownState(DecoyGameError, KeyError):
    pass


class TooLarge(DecoyGameError):
    """An oracle was asked to enumerate an instance beyond its size bound."""


class TooManyCombinations(DecoyGameError):
    pass


class PlacementError(DecoyGameError, ValueError):
    pass


class PlacementOverlapsFinals(PlacementError):
    pass


class TrapFakeOverlap(PlacementError):
    pass


class DecoysOutsideWin2(PlacementError):
    """Synthesis requires every decoy to lie in P2's base winning region minus F."""


class IncompatibleComposition(DecoyGameError, ValueError):
    pass


class InvalidConfig(DecoyGameError, ValueError):
    pass


class InvalidParams(DecoyGameError, ValueError):
    pass


class ParseError(DecoyGameError, ValueError):
    pass


class SchemaError(DecoyGameError, ValueError):
    pass


class ValidationError(DecoyGameError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid game")
