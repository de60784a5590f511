"""Exception hierarchy shared by every driftfield module."""


class DriftFieldError(ValueError):
    """Base class for all input and contract violations."""


class NonFinite(DriftFieldError):
    def __init__(self, row: int, col: int):
        self.row, self.col = row, col
        super().__init__(f"NonFinite({row},{col}): non-finite entry at row {row}, column {col}")


class EmptyCloud(DriftFieldError):
    def __init__(self, msg: str = "EmptyCloud: point cloud has no rows or no columns"):
        super().__init__(msg)


class ShapeMismatch(DriftFieldError):
    pass


class TooFewPoints(DriftFieldError):
    pass


class DimensionMismatch(DriftFieldError):
    def __init__(self, expected: int, got: int, what: str = "dimension"):
        self.expected, self.got = expected, got
        super().__init__(f"DimensionMismatch: expected {what} {expected}, got {got}")


class IoError(DriftFieldError):
    pass


class ParseError(DriftFieldError):
    def __init__(self, row: int, col: int, cell: str = ""):
        self.row, self.col = row, col
        super().__init__(f"Parse({row},{col}): cannot parse {cell!r} as a number")


class RaggedRows(DriftFieldError):
    pass


class EmptyVocabulary(DriftFieldError):
    pass


class EmptyField(DriftFieldError):
    pass


class NotADistribution(DriftFieldError):
    pass


class EmptySample(DriftFieldError):
    pass


class ZeroVector(DriftFieldError):
    pass


class EmptyText(DriftFieldError):
    pass


class EmptyEvaluationSet(DriftFieldError):
    pass


class BadRank(DriftFieldError):
    pass
