"""Exception types shared across the package."""


class MoranError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(MoranError):
    """Base class for graph construction errors."""


class NodeIdOutOfRange(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class DisconnectedGraph(GraphError):
    pass


class InvalidFamilyParams(GraphError):
    pass


class EdgeListFormatError(GraphError):
    pass


class AlreadyFixated(MoranError):
    """A step was requested on a configuration where one type holds every node."""


class NoOpFlip(MoranError):
    """apply_flip called with the node's current type."""


class EmptyList(MoranError):
    """find_random called on a list with no live entries."""


class DeadSlot(MoranError):
    """delete called on a slot that holds no live entry."""


class TooLarge(MoranError):
    """Exact solve requested for a graph beyond the hard size guard."""


class NeutralRate(MoranError):
    """Closed form undefined at r = 1."""


class UnbiasedWalk(MoranError):
    """Gambler's-ruin closed form undefined at p = 1/2."""


class InvalidFitness(MoranError):
    """Operation requires r > 1 (or r > 0) and got something else."""


class InvalidEpsilon(MoranError):
    """Epsilon outside the supported open interval (0, 1/2)."""
