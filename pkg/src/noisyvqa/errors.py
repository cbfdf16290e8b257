"""Exception hierarchy shared by every noisyvqa module."""


class NoisyVQAError(Exception):
    """Base class for all errors raised by noisyvqa."""


class NonHermitian(NoisyVQAError, ValueError):
    pass


class NonUnitary(NoisyVQAError, ValueError):
    pass


class DimensionOverflow(NoisyVQAError, ValueError):
    pass


class DimensionMismatch(NoisyVQAError, ValueError):
    pass


class UnnormalizedTarget(NoisyVQAError, ValueError):
    pass


class InvalidNoiseModel(NoisyVQAError, ValueError):
    pass


class InvalidSize(NoisyVQAError, ValueError):
    pass


class EmptySubspace(NoisyVQAError, ValueError):
    pass


class VanishingSubspaceWeight(NoisyVQAError, ArithmeticError):
    pass


class SingularDenominator(NoisyVQAError, ArithmeticError):
    pass


class InvalidGraph(NoisyVQAError, ValueError):
    pass


class InvalidInstance(NoisyVQAError, ValueError):
    pass


class WrongBenchmarkKind(NoisyVQAError, ValueError):
    pass


class ConsistencyError(NoisyVQAError, RuntimeError):
    """Internal numerical invariant broken beyond tolerance."""


class ParseError(NoisyVQAError, ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class ConfigError(NoisyVQAError, ValueError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
