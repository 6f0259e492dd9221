"""Exceptions raised by the rglab core.

Every domain failure gets its own class so callers (service layer, CLI
exit codes, experiment rows) can branch without string matching.
"""


class RGLabError(Exception):
    """Base class for all rglab domain errors."""


class SpaceExhausted(RGLabError):
    """Requested relator count exceeds the sampled word space.

    Signals that (n, k, d) is infeasible at desk scale.
    """

    def __init__(self, requested: int, available: int):
        self.requested = requested
        self.available = available
        super().__init__(
            f"requested {requested} distinct relators but the word space "
            f"holds only {available}"
        )


class InsufficientPositiveRelators(RGLabError):
    """A sampled presentation has fewer positive relators than the
    downsampling target requires at this density and rank."""

    def __init__(self, have: int, need: int):
        self.have = have
        self.need = need
        super().__init__(f"have {have} positive relators, need {need}")


class WrongRelatorLength(RGLabError):
    """Relator length does not match what the operation requires."""


class NotPositive(RGLabError):
    """Word contains an inverse letter where a positive word is required."""


class NotDivisible(RGLabError):
    """Word length is not divisible by the block length."""


class EmptyGraph(RGLabError):
    """Link graph has no edges; no spectrum to compute."""
