"""Error hierarchy shared by every module.

Each error carries a stable ``code`` (printed by the CLI) and the process exit status the CLI
uses for it: 2 for malformed input, 3 for domain violations, 4 for unreachable targets and
enumeration guards.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional

EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_UNREACHABLE = 4


class ConeCalcError(ValueError):
    code = "error"
    exit_status = EXIT_DOMAIN


class ParseError(ConeCalcError):
    code = "parse"
    exit_status = EXIT_INPUT

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DimensionMismatch(ConeCalcError):
    code = "dimension-mismatch"
    exit_status = EXIT_INPUT


class NotNormalized(ConeCalcError):
    code = "not-normalized"
    exit_status = EXIT_INPUT


class DegenerateSegment(ConeCalcError):
    code = "degenerate-segment"
    exit_status = EXIT_INPUT


class BadSlice(ConeCalcError):
    code = "bad-slice"
    exit_status = EXIT_INPUT


class UsageError(ConeCalcError):
    code = "usage"
    exit_status = EXIT_INPUT


class InvalidDocument(ConeCalcError):
    """A JSON path or profile file that does not match its schema."""

    code = "invalid-document"
    exit_status = EXIT_INPUT


class UnsupportedGenus(ConeCalcError):
    code = "unsupported-genus"


class NotInCone(ConeCalcError):
    code = "not-in-cone"


class NotReduced(ConeCalcError):
    code = "not-reduced"


class ParameterOutOfRange(ConeCalcError):
    code = "parameter-out-of-range"

    def __init__(self, message: str, bound: Optional[Fraction] = None) -> None:
        super().__init__(message)
        self.bound = bound


class NonpositiveArea(ConeCalcError):
    code = "nonpositive-area"


class InfeasibleCorrection(ConeCalcError):
    code = "infeasible-correction"


class NotMildPair(ConeCalcError):
    code = "not-mild-pair"


class InvalidDecomposition(ConeCalcError):
    code = "invalid-decomposition"


class NotAdmissible(ConeCalcError):
    code = "not-admissible"

    def __init__(self, message: str, pair: Optional[tuple[Any, Any]] = None) -> None:
        super().__init__(message)
        self.pair = pair


class InconsistentProfile(ConeCalcError):
    code = "inconsistent-profile"


class Unreachable(ConeCalcError):
    code = "unreachable"
    exit_status = EXIT_UNREACHABLE

    def __init__(self, message: str, best_bound: Optional[Fraction] = None) -> None:
        super().__init__(message)
        self.best_bound = best_bound


class BoundTooLarge(ConeCalcError):
    code = "bound-too-large"
    exit_status = EXIT_UNREACHABLE


class IncompleteSearch(ConeCalcError):
    code = "incomplete-search"
    exit_status = EXIT_UNREACHABLE
