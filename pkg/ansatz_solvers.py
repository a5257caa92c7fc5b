"""
Ansatz Solvers Module
Resolves each metric family's defining constant from its closing condition
and evaluates alpha, beta_i and the potential f on [0, s*].

Families (metric  alpha^-1 ds^2 + alpha theta^2 + sum beta_i h_i, tau = 1):
    einstein_z2  Wang-Wang Einstein, fibre-wise Z2 symmetric   constant R,      s* = 2R
    einstein_ww  Wang-Wang Einstein                            constant kappa0, s* = 4
    krs          Kahler-Ricci soliton (Dancer-Wang)            constant kappa1, s* = 4
    qe           quasi-Einstein with parameter m               constant kappa0, s* = 4

Every closing function is divided by the quadrature of its absolute
integrand, so root residuals are relative and comparable across families.
"""

import math
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from bundle_config import BundleData, EpsilonChoice, existence_integral, validate
from errors import (
    ConfigError,
    DomainError,
    ExistenceFailed,
    NoAdmissibleRoot,
    NoConvergence,
    NoSignChange,
    NumericalError,
    TrivialSoliton,
)
from numerics import (
    NumericsConfig,
    find_root_bracketed,
    integrate_simpson38,
    one_sided_derivative,
    quadratic_roots,
    scan_bracket,
)

logger = logging.getLogger(__name__)

ALPHA_END_TOL = 1e-8
ALPHA_SLOPE_TOL = 1e-6
QUADRATIC_TOL = 1e-10
SYMMETRY_TOL = 1e-9
SYMMETRY_POINTS = 101


class Family(str, Enum):
    EINSTEIN_Z2 = "einstein_z2"
    EINSTEIN_WW = "einstein_ww"
    KRS = "krs"
    QUASI_EINSTEIN = "qe"

    @property
    def constant_name(self) -> str:
        return {
            Family.EINSTEIN_Z2: "R",
            Family.EINSTEIN_WW: "kappa0",
            Family.KRS: "kappa1",
            Family.QUASI_EINSTEIN: "kappa0",
        }[self]

    @property
    def is_einstein(self) -> bool:
        return self in (Family.EINSTEIN_Z2, Family.EINSTEIN_WW)


# ============================================================================
# Constants records
# ============================================================================

@dataclass(frozen=True)
class Z2Constants:
    R: float
    A: Tuple[float, ...]
    E: float  # R(R-4)/2


@dataclass(frozen=True)
class WWConstants:
    kappa0: float
    E_star: float  # kappa0(kappa0+4)/2
    A: Tuple[float, ...]


@dataclass(frozen=True)
class KRSConstants:
    kappa1: float
    sigmas: Tuple[Fraction, ...]  # sigma_i = -2 - 2p_i/q_i
    C: Optional[float] = None     # fixed by the entropy normalisation

    @property
    def kappa0(self) -> Optional[float]:
        if self.C is None or self.kappa1 == 0.0:
            return None
        return self.C / self.kappa1 - 2.0


@dataclass(frozen=True)
class QEConstants:
    m: float
    kappa0: float
    E_star: float
    A: Tuple[float, ...]


Constants = Union[Z2Constants, WWConstants, KRSConstants, QEConstants]


@dataclass(frozen=True)
class ProfileSample:
    alpha: float
    betas: List[float]
    f: float


def _star_energy(kappa0: float) -> float:
    return kappa0 * (kappa0 + 4.0) / 2.0


def _z2_constants(bundle: BundleData, R: float) -> Z2Constants:
    """
    For each factor pick the negative root of 8EA^2 - 8pA - q^2 = 0 that keeps
    beta_i = A(s-R)^2 - q^2/(4A) positive on [0, 2R]

    Raises:
        NoAdmissibleRoot: both roots fail positivity for some factor
    """
    E = R * (R - 4.0) / 2.0
    chosen = []
    for i, factor in enumerate(bundle.factors, start=1):
        small, large = quadratic_roots(E, factor.p, factor.q)[::-1]
        admissible = [
            A for A in (small, large)
            if A < 0.0 and A * R * R - factor.q ** 2 / (4.0 * A) > 0.0
        ]
        if not admissible:
            raise NoAdmissibleRoot(f"factor {i}: no negative root keeps beta positive at R={R!r}")
        if len(admissible) > 1:
            logger.warning(f"⚠️ factor {i}: both roots admissible at R={R!r}, keeping the smaller |A|")
        chosen.append(admissible[0])
    return Z2Constants(R=R, A=tuple(chosen), E=E)


def _signed_roots(bundle: BundleData, E_star: float, eps: EpsilonChoice) -> Tuple[float, ...]:
    roots = []
    for factor, sign in zip(bundle.factors, eps.signs):
        positive, negative = quadratic_roots(E_star, factor.p, factor.q)
        roots.append(positive if sign == 1 else negative)
    return tuple(roots)


def _krs_constants(bundle: BundleData, kappa1: float) -> KRSConstants:
    sigmas = tuple(Fraction(-2) - Fraction(2 * f.p, f.q) for f in bundle.factors)
    return KRSConstants(kappa1=kappa1, sigmas=sigmas)


def _make_constants(family: Family, bundle: BundleData, value: float,
                    eps: Optional[EpsilonChoice], m: Optional[float]) -> Constants:
    if family is Family.EINSTEIN_Z2:
        return _z2_constants(bundle, value)
    if family is Family.KRS:
        return _krs_constants(bundle, value)
    E_star = _star_energy(value)
    A = _signed_roots(bundle, E_star, eps)
    if family is Family.EINSTEIN_WW:
        return WWConstants(kappa0=value, E_star=E_star, A=A)
    return QEConstants(m=m, kappa0=value, E_star=E_star, A=A)


# ============================================================================
# Metric profile
# ============================================================================

@dataclass(frozen=True)
class MetricProfile:
    """
    A solved (or explicitly built) ansatz

    Immutable; evaluators are reentrant and safe to share between threads.
    `violations` lists every broken profile invariant (empty for solved profiles).
    """

    family: Family
    bundle: BundleData
    constants: Constants
    s_star: float
    cfg: NumericsConfig
    eps: Optional[EpsilonChoice] = None
    m: Optional[float] = None
    violations: Tuple[str, ...] = field(default=(), compare=False)

    # ------------------------------------------------------------------
    # identification
    # ------------------------------------------------------------------

    @property
    def constant_name(self) -> str:
        return self.family.constant_name

    @property
    def constant_value(self) -> float:
        c = self.constants
        if isinstance(c, Z2Constants):
            return c.R
        if isinstance(c, KRSConstants):
            return c.kappa1
        return c.kappa0

    @property
    def label(self) -> str:
        parts = [self.family.value]
        if self.m is not None:
            parts.append(f"m={self.m:g}")
        if self.eps is not None:
            parts.append(f"eps={self.eps}")
        return " ".join(parts)

    # ------------------------------------------------------------------
    # beta_i and the volume density prod beta_i^n_i
    # ------------------------------------------------------------------

    def betas(self, s) -> np.ndarray:
        """Array of shape (r,) + shape(s)"""
        s = np.asarray(s, dtype=float)
        c = self.constants
        rows = []
        for i, factor in enumerate(self.bundle.factors):
            if isinstance(c, KRSConstants):
                rows.append(-factor.q * (s + float(c.sigmas[i])))
            else:
                center = -c.R if isinstance(c, Z2Constants) else c.kappa0
                A = c.A[i]
                rows.append(A * (s + center) ** 2 - factor.q ** 2 / (4.0 * A))
        return np.array(rows)

    def density(self, s) -> np.ndarray:
        betas = self.betas(s)
        value = np.ones_like(betas[0])
        for beta, factor in zip(betas, self.bundle.factors):
            value = value * beta ** factor.n
        return value

    # ------------------------------------------------------------------
    # Z2 helpers: P(s) = Q((s-R)^2) with Q a polynomial
    # ------------------------------------------------------------------

    @cached_property
    def _z2_polynomials(self) -> Tuple[Polynomial, Polynomial]:
        """Q(u) and D(u) = (Q(u) - Q(0)) / u"""
        c = self.constants
        Q = Polynomial([1.0])
        for A, factor in zip(c.A, self.bundle.factors):
            Q = Q * Polynomial([-factor.q ** 2 / (4.0 * A), A]) ** factor.n
        coef = Q.coef[1:] if len(Q.coef) > 1 else np.array([0.0])
        return Q, Polynomial(coef)

    def _z2_regular_integrand(self, x: np.ndarray) -> np.ndarray:
        c = self.constants
        gap = -c.E  # R(4-R)/2
        Q, D = self._z2_polynomials
        u = (x - c.R) ** 2
        return 0.5 * Q(u) + gap * D(u)

    def _z2_alpha_direct(self, s: float) -> float:
        """Regularised alpha formula, valid on both sides of R"""
        c = self.constants
        gap = -c.E
        Q, _ = self._z2_polynomials
        H = integrate_simpson38(self._z2_regular_integrand, 0.0, s, self.cfg.steps)
        P_R = float(Q(0.0))
        return ((c.R - s) * H + gap * P_R * s / c.R) / float(self.density(s))

    # ------------------------------------------------------------------
    # alpha integrands for the other families
    # ------------------------------------------------------------------

    def _integrand(self, x: np.ndarray) -> np.ndarray:
        c = self.constants
        if isinstance(c, KRSConstants):
            return (2.0 - x) * np.exp(-c.kappa1 * x) * self.density(x)
        y = x + c.kappa0
        core = (c.E_star - y * y / 2.0) * self.density(x)
        if isinstance(c, WWConstants):
            return core / (y * y)
        return y ** (c.m - 2.0) * core

    def _prefactor(self, s: float) -> float:
        c = self.constants
        if isinstance(c, KRSConstants):
            return math.exp(c.kappa1 * s) / float(self.density(s))
        y = s + c.kappa0
        if isinstance(c, WWConstants):
            return y / float(self.density(s))
        return y ** (1.0 - c.m) / float(self.density(s))

    # ------------------------------------------------------------------
    # public evaluators
    # ------------------------------------------------------------------

    def _check_domain(self, s: float):
        if not (0.0 <= s <= self.s_star):
            raise DomainError(f"s={s!r} outside [0, {self.s_star!r}]")

    def alpha(self, s: float) -> float:
        self._check_domain(s)
        if s == 0.0:
            return 0.0
        if self.family is Family.EINSTEIN_Z2:
            R = self.constants.R
            if s > R:
                return self._z2_alpha_direct(2.0 * R - s)
            return self._z2_alpha_direct(s)
        return self._prefactor(s) * integrate_simpson38(self._integrand, 0.0, s, self.cfg.steps)

    def potential(self, s: float) -> float:
        """
        f(s): 0 for Einstein families, kappa1(s-2) + C for the soliton
        (C = 0 until normalised), -m ln(s + kappa0) for quasi-Einstein
        (kappa1 = 1; defined up to an additive constant)
        """
        self._check_domain(s)
        c = self.constants
        if isinstance(c, KRSConstants):
            return c.kappa1 * (s - 2.0) + (c.C or 0.0)
        if isinstance(c, QEConstants):
            return -c.m * math.log(s + c.kappa0)
        return 0.0

    def evaluate(self, s: float) -> ProfileSample:
        self._check_domain(s)
        return ProfileSample(
            alpha=self.alpha(s),
            betas=[float(b) for b in self.betas(s)],
            f=self.potential(s),
        )

    def closing_residual(self) -> float:
        return _closing_value(self)

    # ------------------------------------------------------------------
    # invariants
    # ------------------------------------------------------------------

    def check_invariants(self) -> List[str]:
        """
        Every profile invariant: beta positivity, alpha boundary values and
        slopes, interior positivity, quadratic consistency, closing residual
        """
        problems = []
        cfg = self.cfg
        c = self.constants

        grid = np.linspace(0.0, self.s_star, cfg.steps + 1)
        betas = self.betas(grid)
        for i, row in enumerate(betas, start=1):
            if not np.all(row > 0.0):
                problems.append(f"beta_{i} not positive on [0, s*] (min {float(row.min()):.3e})")
        if problems:
            return problems

        try:
            residual = self.closing_residual()
            if abs(residual) > cfg.residual_tol:
                problems.append(f"closing residual {residual:.3e}")

            if self.alpha(0.0) != 0.0:
                problems.append("alpha(0) != 0")
            end = self.alpha(self.s_star)
            if abs(end) > ALPHA_END_TOL:
                problems.append(f"|alpha(s*)| = {abs(end):.3e}")

            interior = np.linspace(0.0, self.s_star, cfg.check_points)[1:-1]
            low = [s for s in interior if not self.alpha(float(s)) > 0.0]
            if low:
                problems.append(f"alpha not positive at s={low[0]!r}")

            h = cfg.fd_step
            start_slope = one_sided_derivative(self.alpha, 0.0, h, +1)
            end_slope = one_sided_derivative(self.alpha, self.s_star, h, -1)
            if abs(start_slope - 2.0) > ALPHA_SLOPE_TOL:
                problems.append(f"alpha'(0) = {start_slope!r}")
            if abs(end_slope + 2.0) > ALPHA_SLOPE_TOL:
                problems.append(f"alpha'(s*) = {end_slope!r}")

            if self.family is Family.EINSTEIN_Z2:
                asym = self.z2_asymmetry()
                if asym > SYMMETRY_TOL:
                    problems.append(f"Z2 asymmetry {asym:.3e}")
        except NumericalError as e:
            problems.append(f"evaluation failed: {e}")

        if isinstance(c, KRSConstants):
            if c.kappa1 == 0.0:
                problems.append("kappa1 = 0 (trivial soliton)")
            for i, (sigma, factor) in enumerate(zip(c.sigmas, self.bundle.factors), start=1):
                if Fraction(2) != -sigma - Fraction(2 * factor.p, factor.q):
                    problems.append(f"sigma_{i} inconsistent")
        else:
            E = c.E if isinstance(c, Z2Constants) else c.E_star
            for i, (A, factor) in enumerate(zip(c.A, self.bundle.factors), start=1):
                quad = 8.0 * A * A * E - 8.0 * A * factor.p - factor.q ** 2
                if abs(quad) > QUADRATIC_TOL:
                    problems.append(f"quadratic residual {quad:.3e} for factor {i}")
                if self.eps is not None and math.copysign(1, A) != self.eps.signs[i - 1]:
                    problems.append(f"sign(A_{i}) does not match eps")
        return problems

    def z2_asymmetry(self) -> float:
        """max |alpha(s) - alpha(2R - s)| with both sides from the unreflected formula"""
        R = self.constants.R
        worst = 0.0
        for s in np.linspace(0.0, R, SYMMETRY_POINTS):
            s = float(s)
            if s == 0.0:
                continue
            worst = max(worst, abs(self._z2_alpha_direct(s) - self._z2_alpha_direct(2.0 * R - s)))
        return worst


def eval_profile(profile: MetricProfile, s: float) -> ProfileSample:
    """alpha, beta_i and f at s; Z2 profiles use alpha(s) = alpha(2R - s) for s > R"""
    return profile.evaluate(s)


def closing_residual(profile: MetricProfile) -> float:
    """Normalised closing-function value at the profile's constant"""
    return _closing_value(profile)


# ============================================================================
# Closing conditions
# ============================================================================

def _closing_value(profile: MetricProfile) -> float:
    """Normalised closing function at the profile's constant"""
    cfg = profile.cfg
    if profile.family is Family.EINSTEIN_Z2:
        c = profile.constants
        Q, _ = profile._z2_polynomials
        tail = -c.E * float(Q(0.0)) / c.R
        H = integrate_simpson38(profile._z2_regular_integrand, 0.0, c.R, cfg.steps)
        scale = integrate_simpson38(
            lambda x: np.abs(profile._z2_regular_integrand(x)), 0.0, c.R, cfg.steps
        ) + abs(tail)
        return (H - tail) / scale

    value = integrate_simpson38(profile._integrand, 0.0, profile.s_star, cfg.steps)
    scale = integrate_simpson38(lambda x: np.abs(profile._integrand(x)), 0.0, profile.s_star, cfg.steps)
    if scale == 0.0:
        raise NumericalError("closing integrand vanishes identically")
    return value / scale


def _raw_profile(family: Family, bundle: BundleData, value: float, cfg: NumericsConfig,
                 eps: Optional[EpsilonChoice], m: Optional[float]) -> MetricProfile:
    constants = _make_constants(family, bundle, value, eps, m)
    s_star = 2.0 * value if family is Family.EINSTEIN_Z2 else 4.0
    return MetricProfile(family=family, bundle=bundle, constants=constants, s_star=s_star,
                         cfg=cfg, eps=eps, m=m)


def build_profile(family: Family, bundle: BundleData, value: float, cfg: NumericsConfig,
                  eps: Optional[EpsilonChoice] = None, m: Optional[float] = None) -> MetricProfile:
    """
    Build a profile at a given constant (R, kappa0 or kappa1) without solving

    Returns:
        MetricProfile with `violations` filled in
    """
    family = Family(family)
    if family in (Family.EINSTEIN_WW, Family.QUASI_EINSTEIN) and eps is None:
        eps = EpsilonChoice.all_negative(bundle.r)
    profile = _raw_profile(family, bundle, value, cfg, eps, m)
    return replace(profile, violations=tuple(profile.check_invariants()))


def _closing_function(family: Family, bundle: BundleData, cfg: NumericsConfig,
                      eps: Optional[EpsilonChoice], m: Optional[float]) -> Callable[[float], float]:
    def g(value: float) -> float:
        return _closing_value(_raw_profile(family, bundle, value, cfg, eps, m))
    return g


def _for_scan(g: Callable[[float], float], failures: List[Exception]) -> Callable[[float], float]:
    def safe(value: float) -> float:
        try:
            return g(value)
        except (NoAdmissibleRoot, NumericalError) as e:
            failures.append(e)
            return math.nan
    return safe


def _solve_brackets(family: Family, bundle: BundleData, cfg: NumericsConfig,
                    brackets: List[Tuple[float, float]], eps: Optional[EpsilonChoice],
                    m: Optional[float]) -> List[MetricProfile]:
    g = _closing_function(family, bundle, cfg, eps, m)
    survivors = []
    for lo, hi in brackets:
        try:
            root = find_root_bracketed(g, lo, hi, cfg)
        except (NoSignChange, NoConvergence, NumericalError, NoAdmissibleRoot) as e:
            logger.warning(f"⚠️ {family.value}: bracket [{lo:.6g}, {hi:.6g}] dropped: {e}")
            continue
        profile = build_profile(family, bundle, root, cfg, eps=eps, m=m)
        if profile.violations:
            logger.warning(
                f"⚠️ {family.value}: root {root:.10g} rejected: {'; '.join(profile.violations)}"
            )
            continue
        logger.info(f"✅ {bundle.name} {profile.label}: {family.constant_name} = {root:.12g}")
        survivors.append(profile)
    return survivors


def _require_survivors(family: Family, survivors: List[MetricProfile], brackets, failures):
    if survivors:
        if len(survivors) > 1:
            values = ", ".join(f"{p.constant_value:.10g}" for p in survivors)
            logger.warning(f"⚠️ {family.value}: {len(survivors)} admissible roots ({values})")
        return survivors
    if not brackets and failures and all(isinstance(e, NoAdmissibleRoot) for e in failures):
        raise NoAdmissibleRoot(str(failures[0]))
    if not brackets:
        raise NoConvergence(f"{family.value}: closing function has no sign change in the scan range")
    raise NoConvergence(f"{family.value}: no root in {len(brackets)} bracket(s) passed the profile checks")


# ============================================================================
# Solvers
# ============================================================================

def _check_bundle(bundle: BundleData):
    validate(bundle).raise_if_invalid()


def _check_eps(bundle: BundleData, eps: EpsilonChoice):
    if eps is None or len(eps) != bundle.r:
        raise ConfigError(f"eps must have r={bundle.r} entries")


def solve_ww_z2_candidates(bundle: BundleData, cfg: NumericsConfig) -> List[MetricProfile]:
    _check_bundle(bundle)
    failures: List[Exception] = []
    g = _for_scan(_closing_function(Family.EINSTEIN_Z2, bundle, cfg, None, None), failures)
    lo, hi = cfg.r_scan
    brackets = scan_bracket(g, lo, hi, cfg.scan_grid, "linear")
    survivors = _solve_brackets(Family.EINSTEIN_Z2, bundle, cfg, brackets, None, None)
    return _require_survivors(Family.EINSTEIN_Z2, survivors, brackets, failures)


def solve_ww_z2(bundle: BundleData, cfg: NumericsConfig) -> MetricProfile:
    """
    Z2-symmetric Einstein metric: R is the root of the regularised alpha'(R) = 0
    condition, s* = 2R

    Raises:
        NoConvergence: no sign change in the R scan range
        NoAdmissibleRoot: no negative quadratic root keeps beta positive
    """
    return solve_ww_z2_candidates(bundle, cfg)[0]


def _ww_preconditions(bundle: BundleData, eps: EpsilonChoice, cfg: NumericsConfig):
    _check_bundle(bundle)
    _check_eps(bundle, eps)
    integral = existence_integral(bundle, eps, cfg.steps)
    if not eps.has_positive:
        raise ExistenceFailed(f"Einstein ansatz needs some eps_i = +1, got eps={eps}", integral)
    if not integral < 0.0:
        raise ExistenceFailed(f"existence integral {integral:.6g} is not negative for eps={eps}", integral)


def solve_ww_einstein_candidates(bundle: BundleData, eps: EpsilonChoice,
                                 cfg: NumericsConfig) -> List[MetricProfile]:
    _ww_preconditions(bundle, eps, cfg)
    failures: List[Exception] = []
    g = _for_scan(_closing_function(Family.EINSTEIN_WW, bundle, cfg, eps, None), failures)
    lo, hi = cfg.kappa0_scan
    brackets = scan_bracket(g, lo, hi, cfg.scan_grid, "geometric")
    survivors = _solve_brackets(Family.EINSTEIN_WW, bundle, cfg, brackets, eps, None)
    return _require_survivors(Family.EINSTEIN_WW, survivors, brackets, failures)


def solve_ww_einstein(bundle: BundleData, eps: EpsilonChoice, cfg: NumericsConfig) -> MetricProfile:
    """
    Wang-Wang Einstein metric: kappa0 > 0 closes alpha(4) = 0

    Raises:
        ExistenceFailed: no eps_i = +1 or non-negative existence integral
        NoConvergence: no bracket in the kappa0 scan range
    """
    return solve_ww_einstein_candidates(bundle, eps, cfg)[0]


def solve_krs_candidates(bundle: BundleData, cfg: NumericsConfig) -> List[MetricProfile]:
    _check_bundle(bundle)
    if any(f.q > 0 for f in bundle.factors):
        raise ExistenceFailed("soliton ansatz is set up for q_i < 0 only")

    failures: List[Exception] = []
    g = _closing_function(Family.KRS, bundle, cfg, None, None)
    safe = _for_scan(g, failures)
    lo, hi = cfg.kappa1_scan
    gap = cfg.kappa1_gap
    half = max(cfg.scan_grid // 2, 2)

    brackets = []
    if lo < -gap:
        brackets += scan_bracket(safe, lo, -gap, half, "linear")
    if gap < hi:
        brackets += scan_bracket(safe, gap, hi, half, "linear")

    if not brackets:
        left, right = safe(-gap), safe(gap)
        if left * right <= 0.0:
            raise TrivialSoliton(f"{bundle.name}: only kappa1 = 0 closes the soliton ansatz")
    survivors = _solve_brackets(Family.KRS, bundle, cfg, brackets, None, None)
    return _require_survivors(Family.KRS, survivors, brackets, failures)


def solve_krs(bundle: BundleData, cfg: NumericsConfig) -> MetricProfile:
    """
    Kahler-Ricci soliton: kappa1 != 0 solves
    int_0^4 (2-x) e^{-kappa1 x} prod (x - 2 - 2p_i/q_i)^{n_i} dx = 0

    Raises:
        TrivialSoliton: only kappa1 = 0 closes the ansatz
        NoConvergence: no bracket in the kappa1 scan range
    """
    return solve_krs_candidates(bundle, cfg)[0]


def _qe_preconditions(bundle: BundleData, m: float, eps: EpsilonChoice, cfg: NumericsConfig):
    _check_bundle(bundle)
    _check_eps(bundle, eps)
    if m is None or not m > 1.0:
        raise ConfigError(f"quasi-Einstein parameter m must exceed 1, got {m!r}")
    integral = existence_integral(bundle, eps, cfg.steps)
    if not integral < 0.0:
        raise ExistenceFailed(f"existence integral {integral:.6g} is not negative for eps={eps}", integral)


def solve_qem_candidates(bundle: BundleData, m: float, eps: EpsilonChoice,
                         cfg: NumericsConfig) -> List[MetricProfile]:
    _qe_preconditions(bundle, m, eps, cfg)
    m = float(m)
    failures: List[Exception] = []
    g = _for_scan(_closing_function(Family.QUASI_EINSTEIN, bundle, cfg, eps, m), failures)
    lo, hi = cfg.kappa0_scan
    brackets = scan_bracket(g, lo, hi, cfg.scan_grid, "geometric")
    survivors = _solve_brackets(Family.QUASI_EINSTEIN, bundle, cfg, brackets, eps, m)
    return _require_survivors(Family.QUASI_EINSTEIN, survivors, brackets, failures)


def solve_qem(bundle: BundleData, m: float, eps: EpsilonChoice, cfg: NumericsConfig) -> MetricProfile:
    """
    Quasi-Einstein metric with parameter m > 1: kappa0 > 0 solves
    int_0^4 (x+kappa0)^{m-2} (E* - (x+kappa0)^2/2) prod beta_i^{n_i} dx = 0

    Raises:
        ExistenceFailed: non-negative existence integral
        NoConvergence: no bracket in the kappa0 scan range
    """
    return solve_qem_candidates(bundle, m, eps, cfg)[0]


def solve_candidates(family: Union[Family, str], bundle: BundleData, cfg: NumericsConfig,
                     eps: Optional[EpsilonChoice] = None, m: Optional[float] = None) -> List[MetricProfile]:
    """Every admissible profile of a family, ascending in the constant"""
    family = Family(family)
    if family is Family.EINSTEIN_Z2:
        return solve_ww_z2_candidates(bundle, cfg)
    if family is Family.KRS:
        return solve_krs_candidates(bundle, cfg)
    if eps is None:
        eps = EpsilonChoice.all_negative(bundle.r)
    if family is Family.EINSTEIN_WW:
        return solve_ww_einstein_candidates(bundle, eps, cfg)
    return solve_qem_candidates(bundle, m, eps, cfg)


def solve(family: Union[Family, str], bundle: BundleData, cfg: NumericsConfig,
          eps: Optional[EpsilonChoice] = None, m: Optional[float] = None) -> MetricProfile:
    return solve_candidates(family, bundle, cfg, eps=eps, m=m)[0]


def fiber_einstein_constant(profile: MetricProfile, kappa1: float) -> float:
    """
    Einstein constant mu of the fibre for a quasi-Einstein profile once
    kappa1 is chosen: E* = mu / kappa1^2
    """
    if not isinstance(profile.constants, QEConstants):
        raise ConfigError("fibre Einstein constant is defined for quasi-Einstein profiles only")
    if kappa1 == 0.0:
        raise ConfigError("kappa1 must be nonzero")
    return profile.constants.E_star * kappa1 * kappa1
