"""Exception hierarchy shared by every acstark module."""


class AcStarkError(Exception):
    """Base class for all errors raised by acstark."""


class ParameterError(AcStarkError, ValueError):
    pass


class NegativeRate(ParameterError):
    pass


class NonFiniteInput(ParameterError):
    pass


class ZeroField(ParameterError):
    pass


class DegenerateDenominator(AcStarkError, ArithmeticError):
    pass


class SolverError(AcStarkError):
    pass


class NonUniqueSteadyState(SolverError):
    pass


class SolverFailure(SolverError):
    pass


class StepFailure(SolverError):
    pass


class NonPhysicalState(SolverError):
    pass


class TooFewSamples(AcStarkError, ValueError):
    pass


class ConfigError(AcStarkError):
    pass


class ParseError(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class MissingRequired(ConfigError):
    pass
