"""Exception types shared across the package."""


class SepdistError(ValueError):
    """Base class for all errors raised by sepdist."""


class PreconditionError(SepdistError):
    """An argument is outside the domain an operation accepts (bad qubit index, range)."""


class ContractError(SepdistError):
    """A matrix argument violates a structural contract (not Hermitian, not unitary, ...)."""


class ValidationError(SepdistError):
    """A parameter record violates one of the Dür-family invariants."""
