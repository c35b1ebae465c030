"""Exception hierarchy for the inscriber package.

Checkers return reports instead of raising; exceptions signal invalid input
or a construction that could not be completed.
"""


class InscriberError(Exception):
    """Root of every error raised by the package."""


# kernel

class KernelError(InscriberError):
    pass


class DimensionMismatch(KernelError, ValueError):
    pass


class DegenerateSimplex(KernelError, ValueError):
    pass


class CenterInversion(KernelError, ValueError):
    pass


class NorthPole(KernelError, ValueError):
    pass


class NotOnSphere(KernelError, ValueError):
    pass


class EmptyIntersection(KernelError):
    pass


class InexactScalar(KernelError, TypeError):
    """A float or other inexact value reached the exact kernel."""


# complex

class ComplexError(InscriberError):
    pass


class DegenerateFacet(ComplexError, ValueError):
    pass


class NonManifoldRidge(ComplexError, ValueError):
    pass


class DanglingVertex(ComplexError, ValueError):
    pass


class NotInterior(ComplexError, ValueError):
    pass


class UnknownFacet(ComplexError, KeyError):
    pass


class UnknownVertex(ComplexError, KeyError):
    pass


class NotSimpleInterior(ComplexError, ValueError):
    pass


class DegeneratePointSet(ComplexError, ValueError):
    pass


# trees

class TreeError(InscriberError):
    pass


class EmptyTree(TreeError, ValueError):
    pass


class UnknownNode(TreeError, KeyError):
    pass


class InvalidPlan(TreeError, ValueError):
    pass


class NotStacked(TreeError):
    pass


# builder

class BuildError(InscriberError):
    pass


class BadDimension(BuildError, ValueError):
    pass


class DegenerateNormals(BuildError):
    pass


class SearchExhausted(BuildError):
    pass


class PlanNotBuildable(BuildError):
    def __init__(self, message: str, node=None):
        super().__init__(message)
        self.node = node


class NotDelaunay(BuildError):
    pass


class SupportNotSimplex(BuildError):
    pass


# obstruction

class ObstructionError(InscriberError):
    pass


class BadInput(ObstructionError, ValueError):
    pass


class WrongCombinatorialType(ObstructionError):
    pass


class InversionCenterHit(ObstructionError):
    pass


class HypothesisFailed(ObstructionError):
    pass


class NotObstructed(ObstructionError):
    pass


# generators

class GeneratorError(InscriberError):
    pass


class BadParameters(GeneratorError, ValueError):
    pass


class GrowthCapExceeded(GeneratorError):
    pass


class NonDistinctParams(GeneratorError, ValueError):
    pass


class OddDimension(GeneratorError, ValueError):
    pass


# formats / cli

class FormatError(InscriberError):
    pass


class ParseError(FormatError, ValueError):
    pass


class VerificationFailed(InscriberError):
    """A freshly built artifact failed its own verification."""
