"""Exception hierarchy."""


class QDephaseError(Exception):
    """Base class for all package errors."""


class NotHermitian(QDephaseError, ValueError):
    pass


class NoConvergence(QDephaseError, ArithmeticError):
    pass


class DimensionMismatch(QDephaseError, ValueError):
    pass


class NonRealExpectation(QDephaseError, ArithmeticError):
    """Expectation of a Hermitian operator came out with a sizeable imaginary part."""


class ConsistencyError(QDephaseError, ArithmeticError):
    """Two independent computation paths disagree beyond tolerance."""


class GridTooSmall(QDephaseError, ValueError):
    pass


class NonUniformGrid(QDephaseError, ValueError):
    pass


class ConfigInvalid(QDephaseError, ValueError):
    """Bad run configuration; ``problems`` maps field name to message."""

    def __init__(self, problems):
        self.problems = dict(problems)
        msg = "; ".join(f"{k}: {v}" for k, v in self.problems.items())
        super().__init__(msg)


class MissingSeries(QDephaseError, ValueError):
    pass


class NumericError(QDephaseError, ArithmeticError):
    """A numeric failure tagged with the (N, g, t) point where it happened."""

    def __init__(self, n_spins, g, t, cause):
        self.n_spins, self.g, self.t, self.cause = n_spins, g, t, cause
        where = f"N={n_spins}, g={g}" + ("" if t is None else f", t={t}")
        super().__init__(f"{type(cause).__name__} at {where}: {cause}")
