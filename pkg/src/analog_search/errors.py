"""Exception types raised by the search model."""


class SearchError(ValueError):
    """Base class for invalid or degenerate search configurations."""


class InvalidParameter(SearchError):
    pass


class DegenerateInitialState(SearchError):
    """cos(beta) or cos(gamma) vanishes: the initial state is the marked state up to phase."""


class ZeroGapError(SearchError):
    """E_o = 0, the probability never oscillates so no finite measuring time exists."""


class StepSizeError(SearchError):
    """Integrator step violates the accuracy guard."""


class ScaleGuardError(SearchError):
    """Full-space instance is too large for the dense oracle."""
