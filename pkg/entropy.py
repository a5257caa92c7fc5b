"""
Entropy Module
Perelman nu-entropy of solved profiles from the closed formulas (tau = 1):

    Einstein        nu = log(Vol / (4 pi e)^{n/2})
    soliton         nu = log(K I / (4 pi e)^{n/2})
    quasi-Einstein  normalised nu = log(K (2E*)^{-m/2} J / (4 pi e)^{n/2})
    warped product  normalised nu + nu(fibre)

Values are reported as nu = log(significand * e^{-exponent}) like the tables.
"""

import math
import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy import special

from ansatz_solvers import Family, MetricProfile, QEConstants
from bundle_config import BundleData
from errors import ConfigError, FiberDimensionError, InvalidProfile
from numerics import integrate_simpson38

logger = logging.getLogger(__name__)

LOG_4PI_E = math.log(4.0 * math.pi) + 1.0
SIGNIFICAND_CAP = 20.0


@dataclass(frozen=True)
class EntropyBreakdown:
    K_constant: float
    main_integral: float
    dimension: int
    volume: Optional[float] = None
    C: Optional[float] = None
    weighted_volume: Optional[float] = None     # (4pi)^{-n/2} int e^{-f} dV, soliton only
    soliton_functional: Optional[float] = None  # (4pi)^{-n/2} int f e^{-f} dV - n/2, soliton only
    fiber_entropy: Optional[float] = None


@dataclass(frozen=True)
class EntropyResult:
    nu: float
    significand: float
    exponent: int
    breakdown: EntropyBreakdown
    normalized: bool = False  # quasi-Einstein value, not the true nu of the base

    @property
    def density(self) -> float:
        """Gaussian density e^nu"""
        return math.exp(self.nu)

    def rendered(self, digits: int = 7) -> str:
        return f"log({self.significand:.{digits}g} e^-{self.exponent})"


def render_exponent(nu: float, table_exponent: Optional[int] = None) -> int:
    """
    Exponent k of the "log(X e^-k)" rendering: the table's k when known,
    else the largest k with significand below 20
    """
    if table_exponent is not None:
        return table_exponent
    return math.ceil(math.log(SIGNIFICAND_CAP) - nu) - 1


def _result(nu: float, exponent: int, breakdown: EntropyBreakdown, normalized: bool = False) -> EntropyResult:
    return EntropyResult(
        nu=nu,
        significand=math.exp(nu + exponent),
        exponent=exponent,
        breakdown=breakdown,
        normalized=normalized,
    )


def nu_from_volume(volume: float, dimension: int) -> float:
    """log(Vol / (4 pi e)^{n/2}) at tau = 1"""
    return math.log(volume) - dimension / 2.0 * LOG_4PI_E


def _base_constant(bundle: BundleData) -> float:
    """K = 2 pi prod vol_i"""
    return 2.0 * math.pi * bundle.base_volume


def _require(profile: MetricProfile, families, strict: bool):
    if profile.family not in families:
        names = ", ".join(f.value for f in families)
        raise ConfigError(f"expected a {names} profile, got {profile.family.value}")
    if strict and profile.violations:
        raise InvalidProfile(f"{profile.bundle.name} {profile.label} violates profile invariants",
                             profile.violations)


# ============================================================================
# Closed formulas
# ============================================================================

def nu_einstein(profile: MetricProfile, strict: bool = True) -> EntropyResult:
    """
    nu = log(Vol / (4 pi e)^{n/2}), Vol = K int_0^{s*} prod beta_i^{n_i} ds

    Raises:
        InvalidProfile: the profile breaks an invariant (strict mode)
    """
    _require(profile, (Family.EINSTEIN_Z2, Family.EINSTEIN_WW), strict)
    bundle = profile.bundle
    n = bundle.total_dimension

    integral = integrate_simpson38(profile.density, 0.0, profile.s_star, profile.cfg.steps)
    K = _base_constant(bundle)
    volume = K * integral
    nu = nu_from_volume(volume, n)

    breakdown = EntropyBreakdown(K_constant=K, main_integral=integral, dimension=n, volume=volume)
    return _result(nu, render_exponent(nu, bundle.table_exponent), breakdown)


def _krs_weight(profile: MetricProfile):
    c = profile.constants

    def W(x: np.ndarray) -> np.ndarray:
        value = np.ones_like(x)
        for sigma, factor in zip(c.sigmas, profile.bundle.factors):
            value = value * (x + float(sigma)) ** factor.n
        return value

    return W


def nu_krs(profile: MetricProfile, strict: bool = True) -> EntropyResult:
    """
    nu = log(K I / (4 pi e)^{n/2}) with
    I = int_0^4 e^{-kappa1(x-2)} prod (x - 2 - 2p_i/q_i)^{n_i} dx and
    K = 2 pi prod (-q_i)^{n_i} vol_i.  C = nu + n/2 normalises f.
    """
    _require(profile, (Family.KRS,), strict)
    bundle = profile.bundle
    n = bundle.total_dimension
    steps = profile.cfg.steps
    kappa1 = profile.constants.kappa1
    W = _krs_weight(profile)

    I = integrate_simpson38(lambda x: np.exp(-kappa1 * (x - 2.0)) * W(x), 0.0, 4.0, steps)
    K = 2.0 * math.pi * math.prod((-f.q) ** f.n * f.vol for f in bundle.factors)
    nu = math.log(K * I) - n / 2.0 * LOG_4PI_E
    C = nu + n / 2.0

    norm = K * (4.0 * math.pi) ** (-n / 2.0)
    weighted = norm * integrate_simpson38(
        lambda x: np.exp(-kappa1 * (x - 2.0) - C) * W(x), 0.0, 4.0, steps
    )
    functional = norm * integrate_simpson38(
        lambda x: (kappa1 * (x - 2.0) + C) * np.exp(-kappa1 * (x - 2.0) - C) * W(x), 0.0, 4.0, steps
    ) - n / 2.0

    breakdown = EntropyBreakdown(
        K_constant=K, main_integral=I, dimension=n, C=C,
        weighted_volume=weighted, soliton_functional=functional,
    )
    return _result(nu, render_exponent(nu, bundle.table_exponent), breakdown)


def normalize_krs(profile: MetricProfile) -> MetricProfile:
    """Soliton profile with C (and so kappa0 = C/kappa1 - 2) filled in"""
    result = nu_krs(profile)
    return replace(profile, constants=replace(profile.constants, C=result.breakdown.C))


def nu_qem_normalized(profile: MetricProfile, strict: bool = True) -> EntropyResult:
    """
    Normalised entropy of a quasi-Einstein base:
    log(K (2E*)^{-m/2} J) - (n/2) log(4 pi e), J = int_0^4 (s+kappa0)^m prod beta_i^{n_i} ds,
    K = 2 pi prod vol_i
    """
    _require(profile, (Family.QUASI_EINSTEIN,), strict)
    c: QEConstants = profile.constants
    bundle = profile.bundle
    n = bundle.total_dimension

    J = integrate_simpson38(
        lambda s: (s + c.kappa0) ** c.m * profile.density(s), 0.0, 4.0, profile.cfg.steps
    )
    K = _base_constant(bundle)
    nu = math.log(K) - c.m / 2.0 * math.log(2.0 * c.E_star) + math.log(J) - n / 2.0 * LOG_4PI_E

    breakdown = EntropyBreakdown(K_constant=K, main_integral=J, dimension=n)
    return _result(nu, render_exponent(nu, bundle.table_exponent), breakdown, normalized=True)


def round_sphere_volume(m: int) -> float:
    """Vol(S^m) for the round metric with Einstein constant 1/2: radius^2 = 2(m-1)"""
    if m < 2:
        raise FiberDimensionError(f"round sphere needs m >= 2 for Ric = g/2, got {m!r}")
    unit = 2.0 * math.pi ** ((m + 1) / 2.0) / special.gamma((m + 1) / 2.0)
    return float(unit * (2.0 * (m - 1)) ** (m / 2.0))


def fiber_entropy(fiber_vol_scaled: float, m: int) -> float:
    """nu(F) = log(Vol(F, h_{1/2}) / (4 pi e)^{m/2})"""
    if not fiber_vol_scaled > 0.0:
        raise ConfigError(f"fibre volume must be positive, got {fiber_vol_scaled!r}")
    return nu_from_volume(fiber_vol_scaled, m)


def nu_warped_product(profile: MetricProfile, fiber_vol_scaled: float, strict: bool = True) -> EntropyResult:
    """
    nu of the Einstein warped product M x_{e^{-f/m}} F^m: the normalised
    quasi-Einstein entropy plus nu(F)

    Raises:
        FiberDimensionError: m is not an integer >= 2
    """
    _require(profile, (Family.QUASI_EINSTEIN,), strict)
    m = profile.m
    if m is None or float(m) != int(m) or m < 2:
        raise FiberDimensionError(f"warped product needs an integer m >= 2, got m={m!r}")
    m = int(m)

    base = nu_qem_normalized(profile, strict=strict)
    fibre = fiber_entropy(fiber_vol_scaled, m)
    nu = base.nu + fibre

    breakdown = replace(base.breakdown, dimension=base.breakdown.dimension + m, fiber_entropy=fibre)
    return _result(nu, render_exponent(nu), breakdown)


def nu_sum(a: EntropyResult, b: EntropyResult) -> float:
    """nu of a product of solitons with the same tau"""
    return a.nu + b.nu


def entropy_for(profile: MetricProfile, strict: bool = True) -> EntropyResult:
    """Dispatch on the profile family"""
    if profile.family.is_einstein:
        return nu_einstein(profile, strict=strict)
    if profile.family is Family.KRS:
        return nu_krs(profile, strict=strict)
    return nu_qem_normalized(profile, strict=strict)
