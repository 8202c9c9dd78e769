"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for every error raised by degreelab."""


class DimensionError(LabError):
    pass


class AlphabetError(LabError):
    pass


class EmptyValueError(LabError):
    pass


class TopError(LabError):
    pass


class WitnessError(LabError):
    """A witness construction was fed a witness that fails its contract."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


class BudgetExceeded(LabError):
    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size


class PreconditionError(LabError):
    pass


class ClassError(LabError):
    pass


class HypothesisError(LabError):
    pass


class FormatError(LabError):
    """Malformed input file."""


class ParseError(LabError):
    def __init__(self, message, position):
        super().__init__(f"{message} at {position}")
        self.position = position


class NotAPoset(LabError):
    pass


class NotALattice(LabError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotBounded(LabError):
    pass


class NotClosure(LabError):
    def __init__(self, message, law=None):
        super().__init__(message)
        self.law = law


class MissingStructure(LabError):
    pass


class UnassignedVariable(LabError):
    pass


class FamilyNotClosed(LabError):
    def __init__(self, message, escaping=None):
        super().__init__(message)
        self.escaping = escaping
