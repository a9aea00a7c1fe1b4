"""Exception hierarchy shared by all modules."""


class LimAvgError(Exception):
    """Base class for every error raised by this package."""


class StructureError(LimAvgError, ValueError):
    """Ill-formed input: broken chaining, wrong dimension, unknown index."""


class ValidityError(LimAvgError, ValueError):
    """A lasso is structurally fine but not executable over the naturals."""


class UnsupportedProblem(LimAvgError):
    """The requested problem/domain combination has no decision procedure."""


class MisuseError(LimAvgError, ValueError):
    """Arguments violate an operation's precondition."""
