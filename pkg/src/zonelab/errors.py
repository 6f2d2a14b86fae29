"""Exception types raised across zonelab."""


class ZonelabError(Exception):
    pass


class MalformedInput(ZonelabError, ValueError):
    """Inputs of inconsistent dimension, duplicate hyperplanes, bad files."""


class DegenerateRestriction(ZonelabError):
    """A hyperplane is parallel to (or coincides inside) the restriction target."""


class GeneralPositionError(ZonelabError):
    """Raised when an operation requiring general position is given a degenerate instance."""

    def __init__(self, findings):
        self.findings = list(findings)
        lines = "; ".join(str(f) for f in self.findings[:5])
        more = f" (+{len(self.findings) - 5} more)" if len(self.findings) > 5 else ""
        super().__init__(f"instance is not in general position: {lines}{more}")


class GenerationFailure(ZonelabError):
    pass


class PerturbationFailure(ZonelabError):
    def __init__(self, message, findings=()):
        super().__init__(message)
        self.findings = list(findings)


class BudgetExceeded(ZonelabError):
    pass
