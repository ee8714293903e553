"""Exception types shared across driftlab modules."""


class DriftlabError(Exception):
    """Base class for all driftlab errors."""


class DimensionMismatch(DriftlabError):
    pass


class RankDeficient(DriftlabError):
    pass


class OutOfDomain(DriftlabError):
    """Exponent query outside the validity region of the formula."""


class NonFiniteState(DriftlabError):
    """A simulated trajectory produced a nan/inf state entry.

    Carries ``time`` and ``trajectory`` attributes locating the blow-up.
    """

    def __init__(self, message, time=None, trajectory=None):
        super().__init__(message)
        self.time = time
        self.trajectory = trajectory


class InsufficientCoverage(DriftlabError):
    """A state-sampling plan does not probe outside the small set."""


class KernelNotStochastic(DriftlabError):
    pass


class NotBoundaryCase(DriftlabError):
    pass


class Reducible(DriftlabError):
    pass


class Periodic(DriftlabError):
    pass


class SingularDiffusion(DriftlabError):
    pass


class ExcessiveTruncation(DriftlabError):
    pass


class NotReachable(DriftlabError):
    pass


class NotOrthogonal(DriftlabError):
    pass


class ConfigInvalid(DriftlabError):
    """Experiment config failed validation; names the offending field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
