"""Exception hierarchy. Every error class carries a distinct CLI exit code."""


class CrflatError(Exception):
    exit_code = 1


# -- surface / parsing ------------------------------------------------------

class ParseError(CrflatError):
    exit_code = 2


class SchemaError(CrflatError):
    exit_code = 3


class DegreeTooHigh(SchemaError):
    exit_code = 4


class ConfigError(CrflatError):
    exit_code = 5


class IoError(CrflatError):
    exit_code = 6


class DegenerateDefiningFunctions(CrflatError):
    exit_code = 7


class JetUnavailable(CrflatError):
    exit_code = 8


# -- quadratic form classification ------------------------------------------

class NotComplexPoint(CrflatError):
    exit_code = 10


class NotFlat(CrflatError):
    exit_code = 11


class NotNormalForm(CrflatError):
    exit_code = 12


class NotElliptic(CrflatError):
    exit_code = 13


# -- pointwise CR geometry ---------------------------------------------------

class NotCRPoint(CrflatError):
    exit_code = 20


class MinimalityDetected(CrflatError):
    exit_code = 21


class ZeroLeviForm(CrflatError):
    exit_code = 22


class IndeterminateRank(CrflatError):
    exit_code = 23


# -- orbit tracing -----------------------------------------------------------

class AtComplexPoint(CrflatError):
    exit_code = 30


class StepFailure(CrflatError):
    exit_code = 31


class NonClosure(CrflatError):
    exit_code = 32


class TransversalMiss(CrflatError):
    exit_code = 33


class PoleClassificationFailure(CrflatError):
    exit_code = 34


class HypothesisViolation(CrflatError):
    """Raised by the census when one of the standing hypotheses fails.

    ``items`` lists the failed hypotheses, e.g. ["flatness"], ["minimality"],
    ["complex-submanifold"].
    """

    exit_code = 35

    def __init__(self, items, message=""):
        if isinstance(items, str):
            items = [items]
        self.items = list(items)
        super().__init__(message or "hypothesis violation: " + ", ".join(self.items))


# -- filling -----------------------------------------------------------------

class BaseTooClose(CrflatError):
    exit_code = 40


class LineSliceEmpty(CrflatError):
    exit_code = 41


class NegativeSheetCount(CrflatError):
    exit_code = 42


class InconsistentSheetCount(CrflatError):
    exit_code = 43


class NonGraphOrbit(CrflatError):
    exit_code = 44


class PoorFit(CrflatError):
    exit_code = 45


class MeshTooCoarse(CrflatError):
    exit_code = 46


class NoOverlap(CrflatError):
    exit_code = 47


# -- variety assembly ---------------------------------------------------------

class AllLevelsExceptional(CrflatError):
    exit_code = 50


class PoleCapFailure(CrflatError):
    exit_code = 51


class BoundaryCollision(CrflatError):
    exit_code = 52


class EmptyInput(CrflatError):
    exit_code = 53


class GlueInfeasible(CrflatError):
    exit_code = 54


def exit_code_table():
    """Mapping of error class name to exit code, for --help and reports."""
    table = {}
    stack = [CrflatError]
    while stack:
        cls = stack.pop()
        table[cls.__name__] = cls.exit_code
        stack.extend(cls.__subclasses__())
    return dict(sorted(table.items(), key=lambda kv: kv[1]))
