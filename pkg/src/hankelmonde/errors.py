"""Exception types shared across the package."""


class ShapeMismatch(ValueError):
    """Matrix dimensions are incompatible for the requested operation."""


class NonSquare(ValueError):
    """A square matrix was required."""


class IndexOutOfRange(IndexError):
    """A block or submatrix index lies outside its legal range."""


class CaseViolation(ValueError):
    """The parameters violate the hypothesis under which a construction is defined.

    The message states the violated hypothesis, e.g. "constant right inverse
    requires r >= q and nu >= q".
    """


class UnknownFamily(KeyError):
    """The requested matrix family name is not recognised."""
