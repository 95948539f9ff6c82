"""Exception hierarchy shared by every module."""


class MdsForgeError(Exception):
    """Base class for all library errors."""


class VerificationFailure(MdsForgeError):
    """A mathematical claim checked at runtime turned out false."""


class SearchBudgetExceeded(MdsForgeError):
    def __init__(self, budget, message=None):
        self.budget = budget
        super().__init__(message or f"search exceeded node budget of {budget}")


# finite_field
class NonPrimeCharacteristic(MdsForgeError, ValueError):
    pass


class FieldTooLarge(MdsForgeError, ValueError):
    pass


class DivisionByZero(MdsForgeError, ZeroDivisionError):
    pass


# projective_geometry
class SpaceTooLarge(MdsForgeError, ValueError):
    pass


class DimensionMismatch(MdsForgeError, ValueError):
    pass


class WrongRank(MdsForgeError, ValueError):
    pass


class CenterOnHyperplane(MdsForgeError, ValueError):
    pass


# arcs
class DuplicatePoints(MdsForgeError, ValueError):
    pass


class DimensionOutOfRange(MdsForgeError, ValueError):
    pass


class NotAMember(MdsForgeError, ValueError):
    pass


# codes
class CardinalityMismatch(MdsForgeError, ValueError):
    pass


class TooManyPositions(MdsForgeError, ValueError):
    pass


class DimensionUnderflow(MdsForgeError, ValueError):
    pass


class MalformedMove(MdsForgeError, ValueError):
    pass


# extension_search
class NotMDS(MdsForgeError, ValueError):
    pass


class NotAnExtension(MdsForgeError, ValueError):
    pass


class ConventionMismatch(MdsForgeError, ValueError):
    pass


# brs
class RankDeficient(MdsForgeError, ValueError):
    pass


class NoFreePoint(MdsForgeError, ValueError):
    pass


class NotAffine(MdsForgeError, ValueError):
    pass


# redei
class PointOnFlat(MdsForgeError, ValueError):
    pass


# nets
class DegreeTooSmall(MdsForgeError, ValueError):
    pass


class AxiomViolation(MdsForgeError, ValueError):
    pass


# cli
class SchemaError(MdsForgeError, ValueError):
    pass


BudgetExceeded = SearchBudgetExceeded
