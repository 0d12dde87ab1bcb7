"""Error hierarchy shared by the audit engine, the management commands and the API."""


class FairnessAuditError(Exception):
    """Base class. ``exit_code`` is used by the CLI, ``http_status`` by the API."""

    exit_code = 1
    http_status = 500

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.message = message
        self.detail = detail


class InputError(FairnessAuditError):
    """Malformed document, unknown name or malformed rational."""

    exit_code = 2
    http_status = 400


class PreconditionError(FairnessAuditError):
    """An operation's precondition does not hold; ``condition`` names it."""

    exit_code = 3
    http_status = 422

    def __init__(self, condition, message=None):
        super().__init__(message or f"precondition failed: {condition}")
        self.condition = condition


class BoundExceededError(FairnessAuditError):
    exit_code = 4
    http_status = 413

    def __init__(self, bound_name, limit, actual):
        super().__init__(f"{bound_name} exceeded: {actual} > {limit}")
        self.bound_name = bound_name
        self.limit = limit
        self.actual = actual


class InternalInvariantError(FairnessAuditError):
    """A constructed object failed its own post-check."""


VERIFICATION_FAILED_EXIT_CODE = 5
