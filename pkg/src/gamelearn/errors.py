"""Error taxonomy shared across the engine and the HTTP layer."""


class GamelearnError(Exception):
    """Base class; `code` is the machine-readable identifier surfaced by the API."""

    code = "error"


class ValidationError(GamelearnError):
    code = "validation_error"


class AccessError(GamelearnError):
    code = "access_error"


class ConflictError(GamelearnError):
    code = "conflict"


class NotFoundError(GamelearnError):
    code = "not_found"


class AuthError(GamelearnError):
    code = "auth_error"


class ForbiddenError(GamelearnError):
    code = "forbidden"


class PreconditionError(GamelearnError):
    code = "precondition_failed"


class DerivationError(GamelearnError):
    code = "derivation_error"


class ConfigurationError(GamelearnError):
    code = "configuration_error"
