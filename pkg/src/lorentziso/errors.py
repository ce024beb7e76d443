"""Exception hierarchy.  Everything derives from ``ValueError`` so callers that
only care about bad input can catch that."""


class LorentzIsoError(ValueError):
    pass


class InvalidInputError(LorentzIsoError):
    """Malformed arguments: wrong shapes, mismatched dimensions, non-finite data."""


class DomainError(LorentzIsoError):
    """Argument outside the mathematical domain of the operation."""


class DegenerateError(LorentzIsoError):
    """Zero area, zero measure, collinear simplex and similar degeneracies."""


class AdmissibilityError(LorentzIsoError):
    """A perturbed graph violates the spacelike condition |r'| < r."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class UnsupportedDomainError(LorentzIsoError):
    pass


class EmptyDomainError(LorentzIsoError):
    pass


class PreconditionError(LorentzIsoError):
    pass


class NumericError(LorentzIsoError):
    pass
