"""Exception hierarchy.

Every error carries a ``kind`` string so the CLI can emit structured JSON
without a lookup table.
"""


class HypLambdaError(Exception):
    kind = "Error"
    #: numerical failures map to exit code 3, input errors to 2
    numerical = False


class InputError(HypLambdaError, ValueError):
    kind = "InputError"


class NumericalError(HypLambdaError, ArithmeticError):
    kind = "NumericalError"
    numerical = True


class ParseError(InputError):
    kind = "ParseError"


class NotSymmetric(InputError):
    kind = "NotSymmetric"


class NotPositiveDefinite(InputError):
    kind = "NotPositiveDefinite"


class NotSymplectic(InputError):
    kind = "NotSymplectic"


class IndexOutOfRange(InputError):
    kind = "IndexOutOfRange"


class DuplicateRoot(InputError):
    kind = "DuplicateRoot"


class WrongCount(InputError):
    kind = "WrongCount"


class DegenerateMap(InputError):
    kind = "DegenerateMap"


class BadOrdering(InputError):
    kind = "BadOrdering"


class MissingConstant(InputError):
    kind = "MissingConstant"


class DegenerateFit(InputError):
    kind = "DegenerateFit"


class SingularDenominator(NumericalError):
    kind = "SingularDenominator"


class PrecisionExhausted(NumericalError):
    kind = "PrecisionExhausted"


class IllConditioned(NumericalError):
    kind = "IllConditioned"


class QuadratureNotConverged(NumericalError):
    kind = "QuadratureNotConverged"
