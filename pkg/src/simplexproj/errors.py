"""Exception hierarchy.

Validation failures (bad input) and numerical failures (a solve that should
not fail did) are kept apart so the command line can map them to distinct
exit codes.
"""


class SimplexProjError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SimplexProjError, ValueError):
    pass


class NumericalError(SimplexProjError, ArithmeticError):
    pass


class NotSquare(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotPositiveDefinite(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DimensionTooLarge(ValidationError):
    pass


class DegenerateMetric(ValidationError):
    pass


class TooFewSamples(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, reason, row=None, path=None):
        self.reason = reason
        self.row = row
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}: "
        if row is not None:
            where += f"row {row}: "
        super().__init__(where + reason)


class NonPositivePrice(ValidationError):
    pass


class EmptyPanel(ValidationError):
    pass


class MisalignedBenchmark(ValidationError):
    pass


class InvalidWeights(ValidationError):
    pass


class SingularSystem(NumericalError):
    pass
