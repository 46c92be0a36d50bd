"""Exception types shared across the package."""


class GabfrontError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GabfrontError):
    """Input lies outside the representable domain (e.g. an impulse center off the grid)."""


class GridMismatch(GabfrontError):
    """Two sampled objects live on incompatible grids."""


class UnsupportedAtom(GabfrontError):
    """No closed-form catalog entry exists for the requested atom/window pair."""


class NotAFrame(GabfrontError):
    """The lattice is too sparse for the sampled Gabor system to act as a frame."""


class NoConvergence(GabfrontError):
    """An iterative solver exhausted its budget before reaching the requested tolerance."""

    def __init__(self, iterations, residual, message=None):
        self.iterations = int(iterations)
        self.residual = float(residual)
        super().__init__(
            message
            or f"no convergence after {self.iterations} iterations (residual {self.residual:.3e})"
        )


class BadPartition(GabfrontError):
    """Invalid sector partition request (odd or too small sector count)."""


class InsufficientLattice(GabfrontError):
    """A radial shell intersected with a sector holds too few lattice points."""

    def __init__(self, shell_index, message=None):
        self.shell_index = int(shell_index)
        super().__init__(message or f"too few lattice points in shell {self.shell_index}")


class DegenerateFit(GabfrontError):
    """Decay fit impossible: not enough shells above the statistic floor."""


class NotSymplectic(GabfrontError):
    """A matrix expected to be symplectic fails S^T J S = J."""


class NearSingularTime(GabfrontError):
    """Propagation time too close to a kernel singularity for reliable quadrature."""
