"""Exception types shared across the pipeline and service layers."""


class CtxScopeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CtxScopeError):
    """Invalid generation or build configuration."""


class InputError(CtxScopeError):
    """An operation was called with arguments violating its preconditions."""


class UndefinedSimilarityError(InputError):
    """Cosine similarity requested against a zero vector."""


class ParseError(CtxScopeError):
    """A corpus or bundle document could not be parsed.

    ``location`` is a human-readable position hint (line/column or path).
    """

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{message} (at {location})" if location else message)
        self.location = location


class NotFoundError(CtxScopeError):
    """A referenced id does not exist."""


class IntegrityError(CtxScopeError):
    """Cross-references inside a corpus, bundle or context block are broken."""


class NumericalError(CtxScopeError):
    """An iterative numerical routine failed to converge."""

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual={residual:.3e})"
        super().__init__(message)
        self.residual = residual


class InternalError(CtxScopeError):
    """An internal contract between two pipeline stages was violated."""


class ProviderError(CtxScopeError):
    """A pluggable provider (embedding, labeling, response) failed.

    Retryable; carries the provider name for diagnostics.
    """

    def __init__(self, provider: str, message: str):
        super().__init__(f"provider '{provider}': {message}")
        self.provider = provider


class BuildError(CtxScopeError):
    """A pipeline stage failed during bundle building."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"build stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
