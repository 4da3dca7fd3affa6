"""Exception types shared across the package."""


class PolycondError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(PolycondError):
    """Dimension mismatch or an allocation beyond the configured cap."""


class ContractViolation(PolycondError):
    """An input violates a documented invariant (non-unit vector, lost orthogonality)."""


class PreconditionError(PolycondError):
    """A stated hypothesis of the operation does not hold for the given inputs."""


class ConstructionError(PolycondError):
    """A constructive operation cannot produce a valid object (degenerate data)."""


class InvariantViolation(PolycondError):
    """A postcondition that should always hold was observed to fail."""


class ConfigError(PolycondError):
    """Malformed configuration or file content."""
