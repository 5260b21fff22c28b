"""Exception hierarchy.  Every error raised by the package derives from
:class:`DispatchError`; validation problems are also ``ValueError``."""


class DispatchError(Exception):
    pass


class DegeneratePrices(DispatchError, ValueError):
    """Both the energy and the ramping price are (numerically) zero."""


class InvalidInput(DispatchError, ValueError):
    pass


class SingularSystem(DispatchError, ArithmeticError):
    pass


class OutOfDomain(DispatchError, ValueError):
    pass


class WrongRegime(DispatchError, ValueError):
    pass


class BadStep(DispatchError, ValueError):
    pass


class EmptyTrajectory(DispatchError, ValueError):
    pass


class EmptyInput(DispatchError, ValueError):
    pass


class NoConvergence(DispatchError, ArithmeticError):
    pass


class SingularKKT(DispatchError, ArithmeticError):
    pass


class HourFailure(DispatchError):
    """A solver error inside a multi-hour run, tagged with the hour."""

    def __init__(self, hour, message):
        super().__init__(f"hour {hour}: {message}")
        self.hour = hour
