class DomainError(ValueError):
    """Input outside the domain of an operation (bad shape, not PSD, ...)."""


class SolverError(RuntimeError):
    """The conic solver failed to converge; ``stats`` carries its diagnostics."""

    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = stats or {}
