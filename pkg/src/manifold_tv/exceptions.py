"""Exception hierarchy shared by the whole package."""


class ManifoldError(Exception):
    """Base class for all errors raised by manifold_tv."""


class CutLocusError(ManifoldError, ValueError):
    """The logarithm was requested for a pair on (or too close to) the cut locus.

    Attributes
    ----------
    index : tuple or None
        Batch index of the first offending pair, relative to the arrays
        passed to the failing call.
    pair : tuple or None
        The two offending points ``(a, b)``.
    pixel : tuple or None
        Image location, filled in by the solvers.
    stage : str or None
        Solver stage (``"data"``, ``"horizontal"``, ``"vertical"``, ``"parallel"``).
    """

    def __init__(self, message, index=None, pair=None, pixel=None, stage=None):
        super().__init__(message)
        self.index = index
        self.pair = pair
        self.pixel = pixel
        self.stage = stage

    def locate(self, pixel, stage):
        """Return a copy annotated with an image location and solver stage."""
        msg = f"{self.args[0]} at pixel {pixel} during {stage} step"
        return CutLocusError(msg, index=self.index, pair=self.pair, pixel=pixel, stage=stage)


class DomainError(ManifoldError, ValueError):
    """Input is not a valid point of the manifold (e.g. a non-SPD matrix)."""


class InvariantError(ManifoldError, ValueError):
    """A decoded or supplied point violates the manifold's invariants."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NonConvergedError(ManifoldError, RuntimeError):
    """An iterative routine hit its iteration cap before reaching tolerance."""

    def __init__(self, message, residual=None, index=None):
        super().__init__(message)
        self.residual = residual
        self.index = index


class FormatError(ManifoldError, ValueError):
    """Malformed container or text file."""


class ConfigurationError(ManifoldError, ValueError):
    """Invalid acquisition or solver configuration (e.g. rank-deficient design)."""
