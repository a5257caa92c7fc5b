"""
Numerics Module
Composite Simpson 3/8 quadrature and bracketed scalar root finding
used by every closing condition and entropy formula.

All functions are stateless; integrands are called with numpy arrays
of abscissae and must return arrays of the same shape.
"""

import os
import math
import logging
from dataclasses import dataclass, replace
from typing import Callable, List, Literal, Tuple

import numpy as np
from dotenv import load_dotenv
from scipy import optimize

from errors import ConfigError, NumericalError, NoConvergence, NoSignChange

load_dotenv()

logger = logging.getLogger(__name__)

# ============================================================================
# Defaults (environment overrides apply through NumericsConfig.from_env)
# ============================================================================

DEFAULT_STEPS = 1500          # "Simpson 3/8 with 1500 steps"
DEFAULT_ROOT_TOL = 1e-12      # bracket width
DEFAULT_RESIDUAL_TOL = 1e-10  # |g(root)| on the normalised closing functions
DEFAULT_MAX_ITER = 200
DEFAULT_SCAN_GRID = 512
DEFAULT_CHECK_POINTS = 101
DEFAULT_FD_STEP = 1e-5

Integrand = Callable[[np.ndarray], np.ndarray]
Scalar = Callable[[float], float]


@dataclass(frozen=True)
class NumericsConfig:
    """
    Quadrature and root-finding settings shared by all solvers

    Scan ranges are (lo, hi) pairs per solver: R is scanned linearly,
    kappa0 geometrically and kappa1 linearly with a gap of kappa1_gap
    around zero.
    """

    steps: int = DEFAULT_STEPS
    root_tol: float = DEFAULT_ROOT_TOL
    residual_tol: float = DEFAULT_RESIDUAL_TOL
    max_iter: int = DEFAULT_MAX_ITER
    scan_grid: int = DEFAULT_SCAN_GRID
    check_points: int = DEFAULT_CHECK_POINTS
    fd_step: float = DEFAULT_FD_STEP
    r_scan: Tuple[float, float] = (0.05, 3.95)
    kappa0_scan: Tuple[float, float] = (1e-3, 1e3)
    kappa1_scan: Tuple[float, float] = (-8.0, 8.0)
    kappa1_gap: float = 1e-6

    def __post_init__(self):
        if not isinstance(self.steps, int) or self.steps < 3 or self.steps % 3:
            raise ConfigError(f"steps must be a positive multiple of 3, got {self.steps!r}")
        if not (self.root_tol > 0 and self.residual_tol > 0):
            raise ConfigError("root_tol and residual_tol must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be positive")
        if self.scan_grid < 2:
            raise ConfigError("scan_grid needs at least two points")
        if self.check_points < 3:
            raise ConfigError("check_points needs at least three points")
        if not self.fd_step > 0:
            raise ConfigError("fd_step must be positive")
        lo, hi = self.kappa0_scan
        if not 0 < lo < hi:
            raise ConfigError("kappa0_scan must satisfy 0 < lo < hi (geometric scan)")
        for name in ("r_scan", "kappa1_scan"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ConfigError(f"{name} must satisfy lo < hi")

    @classmethod
    def from_env(cls, **overrides) -> "NumericsConfig":
        """
        Build a config from ENTROPY_* environment variables

        Args:
            **overrides: explicit values (e.g. CLI flags); None values are ignored

        Returns:
            NumericsConfig
        """
        values = {}
        try:
            steps = os.getenv("ENTROPY_STEPS")
            if steps:
                values["steps"] = int(steps)
            root_tol = os.getenv("ENTROPY_ROOT_TOL")
            if root_tol:
                values["root_tol"] = float(root_tol)
        except ValueError as e:
            raise ConfigError(f"Invalid ENTROPY_* environment value: {e}")

        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_steps(self, steps: int) -> "NumericsConfig":
        return replace(self, steps=steps)


# ============================================================================
# Quadrature
# ============================================================================

def _simpson38_weights(steps: int) -> np.ndarray:
    weights = np.full(steps + 1, 3.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    weights[3:-1:3] = 2.0
    return weights


def integrate_simpson38(f: Integrand, a: float, b: float, steps: int = DEFAULT_STEPS) -> float:
    """
    Composite Simpson 3/8 rule on [a, b]

    Args:
        f: vectorised integrand
        a: lower limit
        b: upper limit (a <= b)
        steps: number of subintervals, divisible by 3

    Returns:
        Integral estimate. The weighted sum is reduced in a fixed order, so
        identical inputs give bit-identical results.

    Raises:
        ConfigError: steps not a positive multiple of 3, or a > b
        NumericalError: a sample is nan/inf (abscissa attached)
    """
    if not isinstance(steps, (int, np.integer)) or steps < 3 or steps % 3:
        raise ConfigError(f"Simpson 3/8 needs steps divisible by 3, got {steps!r}")
    if a > b:
        raise ConfigError(f"integration limits out of order: a={a!r} > b={b!r}")
    if a == b:
        return 0.0

    x = np.linspace(a, b, steps + 1)
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)

    finite = np.isfinite(y)
    if not finite.all():
        bad = float(x[np.argmin(finite)])
        raise NumericalError(f"non-finite integrand sample at x={bad!r}", abscissa=bad)

    h = (b - a) / steps
    # strict left-to-right accumulation
    total = np.cumsum(_simpson38_weights(steps) * y)[-1]
    return float(3.0 * h / 8.0 * total)


# ============================================================================
# Root finding
# ============================================================================

def scan_bracket(g: Scalar, lo: float, hi: float, grid: int = DEFAULT_SCAN_GRID,
                 scale: Literal["linear", "geometric"] = "linear") -> List[Tuple[float, float]]:
    """
    Find every adjacent grid pair on which g changes sign

    Args:
        g: scalar function
        lo, hi: scan range (lo < hi; 0 < lo for geometric)
        grid: number of grid points
        scale: "linear" or "geometric" spacing

    Returns:
        Ascending list of (lo', hi') brackets. Pairs with a non-finite end are skipped.
    """
    if not lo < hi:
        raise ConfigError(f"scan range needs lo < hi, got [{lo!r}, {hi!r}]")
    if scale == "geometric":
        if lo <= 0:
            raise ConfigError("geometric scan needs lo > 0")
        xs = np.geomspace(lo, hi, grid)
    elif scale == "linear":
        xs = np.linspace(lo, hi, grid)
    else:
        raise ConfigError(f"unknown scan scale {scale!r}")

    values = []
    for x in xs:
        try:
            values.append(float(g(float(x))))
        except NumericalError as e:
            logger.debug(f"scan sample at {x!r} skipped: {e}")
            values.append(math.nan)

    brackets = []
    previous_zero = False
    for i in range(len(xs) - 1):
        g0, g1 = values[i], values[i + 1]
        if not (math.isfinite(g0) and math.isfinite(g1)):
            previous_zero = False
            continue
        if g0 == 0.0 and previous_zero:
            # zero already reported with the pair ending at xs[i]
            previous_zero = g1 == 0.0
            continue
        if g0 * g1 < 0.0 or g0 == 0.0 or g1 == 0.0:
            brackets.append((float(xs[i]), float(xs[i + 1])))
        previous_zero = g1 == 0.0
    return brackets


def find_root_bracketed(g: Scalar, lo: float, hi: float, cfg: NumericsConfig) -> float:
    """
    Root of g inside [lo, hi] by Brent's method (bisection safeguarded by
    secant and inverse-quadratic steps; iterates never leave the bracket)

    Args:
        g: scalar function, finite at lo and hi
        lo, hi: bracket
        cfg: tolerances (root_tol on bracket width, residual_tol on |g|, max_iter)

    Returns:
        x with |g(x)| <= residual_tol * max(1, |g(lo)|, |g(hi)|)

    Raises:
        NoSignChange: g(lo) and g(hi) have the same sign
        NoConvergence: iteration budget exhausted or residual too large
    """
    g_lo = float(g(lo))
    g_hi = float(g(hi))
    if not (math.isfinite(g_lo) and math.isfinite(g_hi)):
        raise NumericalError(f"closing function not finite at bracket ends [{lo!r}, {hi!r}]")
    if g_lo == 0.0:
        return float(lo)
    if g_hi == 0.0:
        return float(hi)
    if g_lo * g_hi > 0.0:
        raise NoSignChange(lo, hi, g_lo, g_hi)

    root, info = optimize.brentq(
        g, lo, hi,
        xtol=cfg.root_tol,
        maxiter=cfg.max_iter,
        full_output=True,
        disp=False,
    )
    if not info.converged:
        raise NoConvergence(
            f"root finder stopped after {info.iterations} iterations ({info.flag})",
            bracket=(lo, hi),
        )

    # tolerance follows the scale of g at the bracket ends
    residual = abs(float(g(root)))
    allowed = cfg.residual_tol * max(1.0, abs(g_lo), abs(g_hi))
    if residual > allowed:
        raise NoConvergence(
            f"residual |g({root!r})| = {residual:.3e} exceeds {allowed:.1e}",
            bracket=(lo, hi),
        )
    return float(root)


# ============================================================================
# Small shared helpers
# ============================================================================

def quadratic_roots(E: float, p: float, q: float) -> Tuple[float, float]:
    """
    Roots of 8 E A^2 - 8 p A - q^2 = 0 without cancellation

    Returns:
        (r1, r2) with r1 = (8p + sqrt(D)) / (16E) and r2 = -2q^2 / (8p + sqrt(D)).
        For E > 0, r1 is the positive and r2 the negative root; for E < 0 both
        are negative and r2 is the one of smaller magnitude.
    """
    if E == 0.0:
        raise NumericalError("degenerate beta-quadratic (E = 0)")
    disc = 64.0 * p * p + 32.0 * E * q * q
    if disc < 0.0:
        raise NumericalError(f"beta-quadratic has no real roots (discriminant {disc!r})")
    root_disc = math.sqrt(disc)
    return (8.0 * p + root_disc) / (16.0 * E), -2.0 * q * q / (8.0 * p + root_disc)


def one_sided_derivative(f: Scalar, x: float, h: float, direction: int = 1) -> float:
    """Second-order one-sided difference; direction=+1 looks right, -1 looks left"""
    h = direction * h
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)


def central_derivative(f: Scalar, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)
