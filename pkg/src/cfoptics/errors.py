"""Exception types shared across the package."""


class CfOpticsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidNetworkError(CfOpticsError):
    """An optical network references modes or elements inconsistently."""


class DomainError(CfOpticsError):
    """A parameter lies outside the mathematically supported domain."""


class MalformedOutcomeError(CfOpticsError):
    """A protocol outcome is missing required entries."""


class UndecidableDecodingError(CfOpticsError):
    """Detector signals tie exactly, so argmax decoding has no answer."""


class BracketError(CfOpticsError):
    """A root bracket shows no sign change, so bisection cannot start."""


class AuditError(CfOpticsError):
    """A carrier log is malformed and cannot be audited."""
