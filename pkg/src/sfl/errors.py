"""Exception hierarchy shared by every module of the package."""


class SflError(Exception):
    """Base class for domain and input errors."""


class FieldMismatch(SflError):
    pass


class DimensionMismatch(SflError):
    pass


class ZeroEntry(SflError):
    def __init__(self, i, j):
        super().__init__(f"entry ({i},{j}) is zero")
        self.i = i
        self.j = j


class ZeroValue(SflError):
    """A map value that should be nonzero is zero."""


class ZeroVector(SflError):
    pass


class ZeroPolynomial(SflError):
    pass


class IndexOutOfRange(SflError):
    pass


class IndicesEqual(SflError):
    pass


class NotCentral(SflError):
    pass


class NotNormalized(SflError):
    pass


class NotFullyNormalized(SflError):
    pass


class NotATransformation(SflError):
    pass


class ExactModeTooLarge(SflError):
    pass


class FieldTooSmall(SflError):
    pass


class DegreeTooLarge(SflError):
    pass


class RationalsNotDecidable(SflError):
    pass


class RationalsUndecidable(SflError):
    """Coherence over Q outside the central fast paths: status unknown."""


class BudgetExceeded(SflError):
    pass


class InfiniteField(SflError):
    pass


class ScaleTooLarge(SflError):
    pass


class BlockShapeMismatch(SflError):
    pass


class SingularBlock(SflError):
    pass


class WrongDegree(SflError):
    pass


class InvalidWitness(SflError):
    pass


class SchemaError(SflError):
    """Malformed JSON input; ``path`` points at the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
