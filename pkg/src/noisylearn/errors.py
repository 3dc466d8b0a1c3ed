"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested size exceeds a hard resource cap (qubits, enumeration, tiling radius)."""


class DomainError(ValueError):
    """A parameter lies outside its mathematical domain."""


class NumericalError(ArithmeticError):
    """A floating-point consistency check failed beyond tolerance."""
