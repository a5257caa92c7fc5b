"""
Error Types
Exception hierarchy shared by the solvers, the entropy formulas and the CLI.

Every class carries the process exit code the CLI reports for it:
    1 -> validation / precondition problems
    2 -> numerical or solver failures
(3 is reserved for table mismatches and is never raised as an exception)
"""

from typing import Optional, Sequence, Tuple

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVER = 2
EXIT_MISMATCH = 3


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench"""

    exit_code = EXIT_SOLVER


# ============================================================================
# Validation errors (exit code 1)
# ============================================================================

class ConfigError(WorkbenchError):
    """Invalid numerics settings or CLI arguments"""

    exit_code = EXIT_VALIDATION


class BundleValidationError(WorkbenchError):
    """Bundle data violates 0 < |q| < p or a schema rule"""

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, violations: Sequence[str] = ()):
        super().__init__(message)
        self.violations = list(violations)


class NotInCatalog(WorkbenchError):
    exit_code = EXIT_VALIDATION


class ExistenceFailed(WorkbenchError):
    """The existence integral (or the sign requirement on eps) rules the family out"""

    exit_code = EXIT_VALIDATION

    def __init__(self, message: str, integral: Optional[float] = None):
        super().__init__(message)
        self.integral = integral


# ============================================================================
# Numerical errors (exit code 2)
# ============================================================================

class NumericalError(WorkbenchError):
    """A non-finite sample was produced by an integrand"""

    def __init__(self, message: str, abscissa: Optional[float] = None):
        super().__init__(message)
        self.abscissa = abscissa


class NoSignChange(WorkbenchError):
    def __init__(self, lo: float, hi: float, g_lo: float, g_hi: float):
        super().__init__(
            f"no sign change on [{lo!r}, {hi!r}]: g(lo)={g_lo!r}, g(hi)={g_hi!r}"
        )
        self.bracket = (lo, hi)
        self.values = (g_lo, g_hi)


class NoConvergence(WorkbenchError):
    def __init__(self, message: str, bracket: Optional[Tuple[float, float]] = None):
        if bracket is not None:
            message = f"{message} (last bracket [{bracket[0]!r}, {bracket[1]!r}])"
        super().__init__(message)
        self.bracket = bracket


class NoAdmissibleRoot(WorkbenchError):
    """Neither root of the beta-quadratic keeps every beta_i positive"""


class TrivialSoliton(WorkbenchError):
    """Only kappa1 = 0 closes the soliton ansatz"""


class DomainError(WorkbenchError):
    """Profile evaluated outside [0, s*]"""


class InvalidProfile(WorkbenchError):
    def __init__(self, message: str, violations: Sequence[str] = ()):
        if violations:
            message = f"{message}: " + "; ".join(violations)
        super().__init__(message)
        self.violations = list(violations)


class FiberDimensionError(WorkbenchError):
    """Warped products need an integer fibre dimension m >= 2"""
