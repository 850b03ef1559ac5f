"""Exception hierarchy shared by every module of the package."""


class PlancherelError(Exception):
    """Base class for all errors raised by glplancherel."""


class InputError(PlancherelError, ValueError):
    pass


class DomainError(PlancherelError, ValueError):
    """A torus coordinate is off the unit circle."""


class SingularityError(PlancherelError, ArithmeticError):
    """A denominator vanishes (or q <= 1) at the requested evaluation point."""


class MissingDataError(PlancherelError):
    """A fundamental invariant needed by the computation was not supplied."""


class MixedCuspidalError(PlancherelError, ValueError):
    pass


class NotProportionalError(PlancherelError):
    """Two densities that should differ by a constant do not."""


class ParseError(PlancherelError, ValueError):
    pass


class ValidationError(PlancherelError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"{v.code}: {v.message}" for v in self.violations)
        super().__init__(msg or "invalid input")
