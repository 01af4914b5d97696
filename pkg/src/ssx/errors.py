"""Exception hierarchy shared by all modules."""


class SSXError(Exception):
    """Base class for every error raised by this package."""


class SpectrumError(SSXError):
    """Eigenvalue iteration failed to converge."""


class ExpOverflowError(SSXError):
    """Matrix exponential would overflow for the given input."""


class ClusterError(SSXError):
    """Eigenvalue clusters are too close to be separated reliably."""

    def __init__(self, message, clusters=None):
        super().__init__(message)
        self.clusters = clusters or []


class ModelError(SSXError):
    """Invalid model construction or input outside the model's subspaces."""


class UnsupportedModelError(SSXError):
    """The requested computation is not available for this model family."""


class NumericsError(SSXError):
    """A result violated an identity that holds exactly in theory."""


class DegenerateStratumError(SSXError):
    """Levi form requested where the complex tangent space degenerates."""


class RegionError(SSXError):
    """Point lies outside, or on the boundary of, a closed-orbit region."""


class WitnessError(SSXError):
    """Bounded search for a collision witness found nothing."""


class LatticeError(SSXError):
    """Invalid lattice input or enumeration abort."""
