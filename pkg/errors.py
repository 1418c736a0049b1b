# -*- coding: utf-8 -*-
"""
Exception hierarchy shared by the optimizer modules.
The CLI maps each family to a process exit code.
"""
from typing import List, Optional

from config import EXIT_CODES


class OffloadError(Exception):
    """Base class for every error raised by the library."""


class ScenarioParseError(OffloadError):
    """The scenario (or preset) document is not valid JSON or has the wrong shape."""


class ScenarioValidationError(OffloadError):
    """A scenario invariant does not hold."""


class ZeroSecrecyError(OffloadError):
    """Data was routed over a link whose secrecy rate is zero."""


class SpeedViolationError(OffloadError):
    """A UAV moved farther than v0 * tau within one slot."""


class ConicProgramError(OffloadError):
    """Structurally inconsistent cone program."""


class SolverFailure(OffloadError):
    """The conic backend returned no usable iterate."""


class InfeasibleSubproblem(OffloadError):
    """A subproblem has no feasible point; `diagnosis` lists the culprits."""

    def __init__(self, message: str, diagnosis: Optional[List[str]] = None):
        super().__init__(message)
        self.diagnosis = list(diagnosis or [])

    def __str__(self):
        base = super().__str__()
        if not self.diagnosis:
            return base
        return base + "\n  " + "\n  ".join(self.diagnosis)


class PresetError(OffloadError):
    """Invalid experiment preset."""


class ReportError(OffloadError):
    """A results file is missing or corrupt."""

    def __init__(self, path: str, line: Optional[int], message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line


class InternalAssertion(OffloadError):
    """An internal invariant broke (solver or linearization bug)."""


def exit_code_for(exc: BaseException) -> int:
    """Exit code the CLI returns for an exception."""
    if isinstance(exc, InfeasibleSubproblem):
        return EXIT_CODES["infeasible"]
    if isinstance(
        exc,
        (ScenarioParseError, ScenarioValidationError, PresetError, ReportError),
    ):
        return EXIT_CODES["validation"]
    return EXIT_CODES["internal"]
