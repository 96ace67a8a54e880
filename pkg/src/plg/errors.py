"""Exception types shared by all modules."""


class PlgError(Exception):
    """Base class. `witness` carries whatever concrete data explains the failure."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidInputError(PlgError, ValueError):
    pass


class DimensionError(InvalidInputError):
    pass


class CapExceededError(PlgError):
    pass


class PreconditionError(PlgError):
    pass


class AxiomFailure(PreconditionError):
    pass


class NotArguesianError(PreconditionError):
    pass


class ConstructionError(PlgError):
    pass


class InconsistencyError(PlgError):
    pass


class NotJoinPreservingError(PlgError):
    pass


class NotClosedError(PreconditionError):
    pass


class OracleInconsistentError(PlgError):
    pass


class IsotropyError(PlgError):
    pass
