"""Exception hierarchy.

Numerical failures derive from :class:`NumericalError`, configuration problems
from :class:`ConfigError`; the CLI maps the two families to distinct exit codes.
"""


class LabError(Exception):
    pass


class NumericalError(LabError):
    pass


class ConfigError(LabError, ValueError):
    pass


# linalg
class IterationLimit(NumericalError):
    pass


class NearDegenerate(NumericalError):
    pass


class SizeExceeded(NumericalError, ValueError):
    pass


class NotHermitian(NumericalError, ValueError):
    pass


class NotReflectionSymmetric(NumericalError, ValueError):
    pass


# models
class ResolutionGuard(NumericalError, ValueError):
    pass


class UnsupportedParameters(LabError, ValueError):
    pass


class KindMismatch(LabError, ValueError):
    pass


# tensor
class SectorLeak(NumericalError):
    pass


class DegreeExceeded(LabError, ValueError):
    pass


# quantize
class QuadratureTooCoarse(NumericalError, ValueError):
    pass


class TailEscape(NumericalError, ValueError):
    pass


class WindowTooSmall(NumericalError):
    pass


# classical
class DomainMismatch(LabError, ValueError):
    pass


class RefinementDiverged(NumericalError):
    pass


class NotTransitive(NumericalError):
    pass


# cli
class ParseError(ConfigError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnknownKey(ParseError):
    pass


class TypeMismatch(ParseError):
    pass
