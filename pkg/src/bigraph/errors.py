"""Exception and warning types shared across the package."""


class BigraphError(Exception):
    """Base class for all package-specific failures."""


class DegenerateOrder(BigraphError):
    """A forcing order hits a pole or degeneracy of the trace coefficients."""


class BadShape(BigraphError):
    """Array dimensions do not match the declared edge count."""


class BadOrder(BigraphError):
    """Fractional order outside the supported range."""


class SingularMatrix(BigraphError):
    """Coupling matrix failed the invertibility certificate."""


class SingularBlock(BigraphError):
    """The 2x2 pivot block of the block factorization is singular."""


class SingularClosure(BigraphError):
    """The discrete vertex-closure system cannot be solved."""


class NoConvergence(BigraphError):
    """An iterative procedure stalled above its tolerance."""


class Blowup(BigraphError):
    """Solution amplitude exceeded the configured cap."""


class ConfigError(BigraphError):
    """Malformed or incomplete experiment configuration."""


class CompatibilityWarning(UserWarning):
    """Signal violates a smoothness/vanishing assumption; accuracy degraded."""


class TruncationWarning(UserWarning):
    """Spatial truncation tail contributes more than the reporting threshold."""
