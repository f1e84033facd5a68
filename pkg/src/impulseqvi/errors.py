"""Exception types shared across the package."""


class ImpulseQVIError(Exception):
    """Base class for all package errors."""


class GridError(ImpulseQVIError):
    """Bad grid construction or an index/stencil out of range."""


class GridMismatchError(ImpulseQVIError):
    """Two fields that must share a grid do not."""


class ParseError(ImpulseQVIError):
    """Expression syntax error; carries the byte offset of the failure."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvalError(ImpulseQVIError):
    """Expression evaluation produced a non-finite value or hit a domain error."""

    def __init__(self, message, path=""):
        super().__init__(f"{message}" + (f" [subexpression: {path}]" if path else ""))
        self.path = path


class ConfigError(ImpulseQVIError):
    """Problem file does not match the documented schema."""


class ValidationError(ImpulseQVIError):
    """A standing assumption failed; carries the witness node when there is one."""

    def __init__(self, message, witness=None):
        super().__init__(message + (f" (witness node {witness})" if witness is not None else ""))
        self.witness = witness


class NonMonotoneStencilError(ImpulseQVIError):
    """Assembly violated the M-matrix conditions; names the worst node."""

    def __init__(self, message, node, value):
        super().__init__(f"non-monotone stencil: {message} at node {node} (offending value {value:.6g})")
        self.node = node
        self.value = value


class NonConvergenceError(ImpulseQVIError):
    """An iterative solve hit its cap; carries the residual history."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class SizeGuardError(ImpulseQVIError):
    """A quadratic-cost oracle was asked to run on a grid above its node budget."""
