from typing import Any, Optional


class ChannelKitError(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class DimensionError(ChannelKitError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class DomainError(ChannelKitError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class QuantizerError(ChannelKitError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class ConfigError(ChannelKitError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class NumericalError(ChannelKitError):
    """
    Raised when an iterative solver produces a non-finite or degenerate
    intermediate. `diagnostics` carries whatever the caller had at hand
    (iteration index, offending values, polynomial coefficients...).
    """

    def __init__(
        self, message: str, diagnostics: Optional[dict[str, Any]] = None
    ) -> None:
        self.diagnostics = diagnostics if diagnostics is not None else {}
        if self.diagnostics:
            details = ", ".join(
                f"{k}={v!r}" for k, v in self.diagnostics.items()
            )
            message = f"{message} ({details})"
        super().__init__(message)
