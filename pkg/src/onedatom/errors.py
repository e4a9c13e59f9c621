"""Exception types raised by the solvers and the command-line front end."""


class OneDAtomError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(OneDAtomError, ValueError):
    """One or more parameter invariants are violated.

    The full list of messages is kept on ``problems`` so callers can
    report every violation at once.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class SolverError(OneDAtomError, RuntimeError):
    """A numerical routine could not produce a meaningful result."""


class GridTooCoarseError(SolverError):
    pass


class NoSteadyStateError(SolverError):
    pass


class NoNetEmissionError(SolverError):
    pass


class UndefinedRatioError(SolverError):
    pass


class OverdampedError(SolverError):
    pass
