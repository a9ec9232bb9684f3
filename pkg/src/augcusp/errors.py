"""Exception types shared across the package."""


class PDSyntaxError(ValueError):
    """Malformed input text or JSON envelope (CLI exit code 2)."""


class DiagramInvariantError(ValueError):
    """Structurally invalid diagram or annotation (CLI exit code 3)."""


class UnsupportedLinkError(ValueError):
    """Link outside the class with explicit geometry (reported, not fatal)."""


class ConvergenceError(RuntimeError):
    """Circle packing solver failed to reach tolerance (CLI exit code 4)."""

    def __init__(self, message: str, worst_residual: float):
        super().__init__(message)
        self.worst_residual = worst_residual


class ReducibleDiagramWarning(UserWarning):
    """Non-alternating bigon chain: the diagram admits a crossing reduction."""
