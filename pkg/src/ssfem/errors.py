"""Exception types shared across the toolkit."""


class ConfigError(ValueError):
    """Invalid run configuration (bad key, bad value, inconsistent options)."""


class MeshFormatError(ValueError):
    """Malformed mesh file; message carries the offending line number."""


class SolverError(RuntimeError):
    """Iterative solver failed to converge.

    Carries the iteration count and the final relative residual so callers
    can report or retry with different settings.
    """

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
