"""Exception hierarchy.

Every error raised by the pipeline derives from :class:`OpsatError`.  The
first-level subclasses correspond to pipeline phases and carry the process
exit code the CLI maps them to.
"""

from __future__ import annotations


class OpsatError(Exception):
    exit_code = 1


# -- parsing ---------------------------------------------------------------

class ParseError(OpsatError):
    exit_code = 3

    def __init__(self, message: str, span=None):
        self.span = span
        if span is not None:
            message = f"{message} at line {span[0]}, column {span[1]}"
        super().__init__(message)


class UnknownCommand(ParseError):
    pass


class StrayCharacter(ParseError):
    pass


class ModelSyntaxError(ParseError):
    def __init__(self, expected: str, found: str, span=None):
        self.expected = expected
        self.found = found
        super().__init__(f"expected {expected}, found {found!r}", span)


class MissingObjective(ParseError):
    pass


class MultipleObjectives(ParseError):
    pass


class DuplicateAssignment(ParseError):
    def __init__(self, name: str, span=None):
        self.name = name
        super().__init__(f"duplicate assignment to {name}", span)


class FormatError(ParseError):
    """Malformed benchmark file handed to a converter."""

    def __init__(self, message: str, lineno: int = 0, line: str = ""):
        self.lineno = lineno
        self.line = line
        if lineno:
            message = f"{message} (line {lineno}: {line.strip()!r})"
        super().__init__(message)


# -- grounding -------------------------------------------------------------

class GroundingError(OpsatError):
    exit_code = 4


class UnboundedQuantifier(GroundingError):
    pass


class ExpansionLimitExceeded(GroundingError):
    pass


class NonConstantSubscript(GroundingError):
    pass


class UndeclaredDomain(GroundingError):
    pass


class CyclicDefinition(GroundingError):
    pass


class DivisionByZeroConstant(GroundingError):
    pass


class NonIntegerRangeEndpoint(GroundingError):
    pass


class UnsupportedDomainShape(GroundingError):
    pass


class TypeMismatch(GroundingError):
    """A set was used where a number is required, or vice versa."""


# -- encoding (codec + CNF rules) ------------------------------------------

class EncodingError(OpsatError):
    exit_code = 5


class ConstantOverflow(EncodingError):
    def __init__(self, value, width):
        self.value = value
        self.width = width
        super().__init__(f"{value} does not fit in {width}")


class InexactConstant(EncodingError):
    def __init__(self, value, width):
        self.value = value
        self.width = width
        super().__init__(f"{value} is not representable with {width.m} fractional bits")


class MissingBit(EncodingError):
    def __init__(self, var: int):
        self.var = var
        super().__init__(f"assignment does not define Boolean variable {var}")


class WidthMismatch(EncodingError):
    pass


class ArityError(EncodingError):
    pass


class ExponentNotConstant(EncodingError):
    pass


class ScaleFactorInexact(EncodingError):
    pass


class EmptyDomain(EncodingError):
    pass


class BoundOverflow(EncodingError):
    pass


class UnsupportedNode(EncodingError):
    pass


# -- solving ---------------------------------------------------------------

class SolverError(OpsatError):
    exit_code = 6


class SolverCrashed(SolverError):
    def __init__(self, returncode: int, stderr_tail: str):
        self.returncode = returncode
        self.stderr_tail = stderr_tail
        super().__init__(f"solver exited with status {returncode}: {stderr_tail}")


class UnparsableOutput(SolverError):
    pass


class SolverTimeout(SolverError):
    exit_code = 7


class NonUnitSoft(SolverError):
    pass


class CapExceeded(SolverError):
    pass


# -- evaluation / decoding -------------------------------------------------

class EvaluationError(OpsatError):
    exit_code = 8


class EvalDivisionByZero(EvaluationError):
    pass


class MissingValue(EvaluationError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no value for {name}")


class SearchSpaceTooLarge(EvaluationError):
    pass


class DecodedInfeasible(EvaluationError):
    """A MaxSAT optimum decoded to an assignment the exact checker rejects."""
