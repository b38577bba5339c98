"""Exception types shared across the package."""


class RankDesignError(Exception):
    """Base class for all library errors."""


class DomainError(RankDesignError):
    """Input lies outside the domain of a function or operation."""


class RangeError(RankDesignError):
    """Target value lies outside the image of a function."""


class ModelError(RankDesignError):
    """Model primitives are inconsistent with the requested computation."""


class CapacityError(RankDesignError):
    """A reward policy cannot satisfy its capacity constraint."""


class QuadratureError(RankDesignError):
    """Adaptive quadrature failed to converge.

    Carries the best available estimate in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class PerturbationError(RankDesignError):
    """A policy perturbation would violate policy invariants."""


class RegionError(RankDesignError):
    """A skill rank falls outside the region required by an operation."""


class AssumptionError(RankDesignError):
    """A sign or shape assumption required by a formula failed numerically."""


class ConfigError(RankDesignError):
    """Malformed or inconsistent experiment configuration."""
