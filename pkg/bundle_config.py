"""
Bundle Configuration Module
Input data for CP^1-bundles over products of Fano Kahler-Einstein manifolds:
base factors (n_i, p_i, q_i, vol_i), sign choices eps, the built-in catalog,
validation and the existence-condition integral.
"""

import json
import math
import re
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from errors import BundleValidationError, ConfigError, NotInCatalog
from numerics import DEFAULT_STEPS, integrate_simpson38

logger = logging.getLogger(__name__)

VOL_CP1 = 2.0 * math.pi          # Fubini-Study, Ric = 2h
VOL_CP2 = 2.0 * math.pi ** 2     # Fubini-Study, Ric = 3h

UNTESTED_POSITIVE_Q = "positive q lies outside the tabulated cases"


@dataclass(frozen=True)
class BaseFactor:
    """One Kahler-Einstein factor V_i with Ric(h_i) = p_i h_i"""

    n: int        # complex dimension
    p: int        # Fano index scale
    q: int        # Euler-class coefficient
    vol: float    # Vol(V_i, h_i)

    @property
    def ratio(self) -> float:
        """p_i / |q_i|"""
        return self.p / abs(self.q)


@dataclass(frozen=True)
class BundleData:
    factors: Tuple[BaseFactor, ...]
    name: str = "custom"
    table_exponent: Optional[int] = None  # k in the tables' "log(X e^-k)" column

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def r(self) -> int:
        return len(self.factors)

    @property
    def total_dimension(self) -> int:
        """Real dimension n = 2 + 2 * sum(n_i)"""
        return 2 + 2 * sum(f.n for f in self.factors)

    @property
    def base_volume(self) -> float:
        """prod vol_i"""
        return math.prod(f.vol for f in self.factors)


@dataclass(frozen=True)
class EpsilonChoice:
    signs: Tuple[int, ...]

    def __post_init__(self):
        signs = tuple(self.signs)
        for s in signs:
            if s not in (1, -1) or isinstance(s, bool):
                raise ConfigError(f"eps entries must be +1 or -1, got {s!r}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def of(cls, *signs: int) -> "EpsilonChoice":
        return cls(tuple(signs))

    @classmethod
    def all_negative(cls, r: int) -> "EpsilonChoice":
        return cls((-1,) * r)

    @property
    def has_positive(self) -> bool:
        return 1 in self.signs

    def __len__(self) -> int:
        return len(self.signs)

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.signs) + ")"


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_invalid(self):
        if self.violations:
            raise BundleValidationError(
                "Bundle data invalid: " + "; ".join(self.violations), self.violations
            )


def validate(bundle: BundleData) -> ValidationReport:
    """
    Check every constraint on the bundle data

    Args:
        bundle: BundleData to check

    Returns:
        ValidationReport; an empty violations list means valid
    """
    report = ValidationReport()

    if bundle.r < 1:
        report.violations.append("at least one base factor (r >= 1) required")

    for i, factor in enumerate(bundle.factors, start=1):
        tag = f"factor {i}"
        if not isinstance(factor.n, int) or factor.n < 1:
            report.violations.append(f"{tag}: n must be a positive integer")
        if not isinstance(factor.p, int) or factor.p < 1:
            report.violations.append(f"{tag}: p must be a positive integer")
        if not isinstance(factor.q, int):
            report.violations.append(f"{tag}: q must be an integer")
        elif factor.q == 0:
            report.violations.append(f"{tag}: q must be nonzero")
        elif isinstance(factor.p, int) and abs(factor.q) >= factor.p:
            report.violations.append(f"{tag}: |q| < p required")
        elif factor.q > 0:
            report.warnings.append(f"{tag}: {UNTESTED_POSITIVE_Q}")
        if not (isinstance(factor.vol, (int, float)) and math.isfinite(factor.vol) and factor.vol > 0):
            report.violations.append(f"{tag}: vol must be a positive real")

    return report


def existence_integral(bundle: BundleData, eps: EpsilonChoice, steps: int = DEFAULT_STEPS) -> float:
    """
    int_{-1}^{1} prod_i (p_i/|q_i| + eps_i x)^{n_i} x dx

    A negative value is the existence condition for the quasi-Einstein family
    and, together with some eps_i = +1, for the Wang-Wang Einstein family.
    """
    if len(eps) != bundle.r:
        raise ConfigError(f"eps has {len(eps)} entries but the bundle has r={bundle.r}")

    def integrand(x: np.ndarray) -> np.ndarray:
        value = x.copy()
        for factor, sign in zip(bundle.factors, eps.signs):
            value = value * (factor.ratio + sign * x) ** factor.n
        return value

    return integrate_simpson38(integrand, -1.0, 1.0, steps)


# ============================================================================
# Built-in catalog (table order)
# ============================================================================

_CATALOG: Dict[str, BundleData] = {
    "cp1_over_cp1": BundleData(
        (BaseFactor(n=1, p=2, q=-1, vol=VOL_CP1),),
        name="cp1_over_cp1", table_exponent=2,
    ),
    "cp1_over_cp2_q1": BundleData(
        (BaseFactor(n=2, p=3, q=-1, vol=VOL_CP2),),
        name="cp1_over_cp2_q1", table_exponent=3,
    ),
    "cp1_over_cp2_q2": BundleData(
        (BaseFactor(n=2, p=3, q=-2, vol=VOL_CP2),),
        name="cp1_over_cp2_q2", table_exponent=3,
    ),
    "cp1_over_cp1xcp2": BundleData(
        (BaseFactor(n=1, p=2, q=-1, vol=VOL_CP1), BaseFactor(n=2, p=3, q=-1, vol=VOL_CP2)),
        name="cp1_over_cp1xcp2", table_exponent=4,
    ),
}


def catalog_names() -> Tuple[str, ...]:
    return tuple(_CATALOG)


def builtin_catalog(name: str) -> BundleData:
    """
    Look up one of the four tabulated manifolds

    Raises:
        NotInCatalog: unknown name
    """
    try:
        return _CATALOG[name]
    except KeyError:
        raise NotInCatalog(f"'{name}' is not in the catalog ({', '.join(_CATALOG)})")


# ============================================================================
# User bundle files
# ============================================================================

_PI_LITERAL = re.compile(r"^\s*([0-9]*\.?[0-9]*(?:[eE][+-]?[0-9]+)?)\s*\*?\s*pi(?:\s*\^\s*([0-9]+))?\s*$")


def parse_volume(value: Union[str, int, float]) -> float:
    """
    Parse a "vol" entry: a number, a numeric string, or a pi literal
    such as "2pi", "2pi^2" or "pi"
    """
    if isinstance(value, bool):
        raise BundleValidationError(f"vol must be a real number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise BundleValidationError(f"vol must be a number or string, got {type(value).__name__}")

    match = _PI_LITERAL.match(value)
    if match:
        coefficient = float(match.group(1)) if match.group(1) else 1.0
        power = int(match.group(2)) if match.group(2) else 1
        return coefficient * math.pi ** power
    try:
        return float(value)
    except ValueError:
        raise BundleValidationError(f"cannot parse vol {value!r}")


def bundle_from_dict(data: dict, name: str = "custom") -> BundleData:
    """Build and validate a BundleData from the {"factors": [...]} schema"""
    if not isinstance(data, dict) or not isinstance(data.get("factors"), list):
        raise BundleValidationError('bundle file must contain a "factors" list')

    factors = []
    for i, entry in enumerate(data["factors"], start=1):
        if not isinstance(entry, dict):
            raise BundleValidationError(f"factor {i} must be an object")
        missing = [key for key in ("n", "p", "q", "vol") if key not in entry]
        if missing:
            raise BundleValidationError(f"factor {i} is missing {', '.join(missing)}")
        for key in ("n", "p", "q"):
            if not isinstance(entry[key], int) or isinstance(entry[key], bool):
                raise BundleValidationError(f"factor {i}: {key} must be an integer")
        factors.append(BaseFactor(n=entry["n"], p=entry["p"], q=entry["q"], vol=parse_volume(entry["vol"])))

    bundle = BundleData(tuple(factors), name=data.get("name", name))
    report = validate(bundle)
    report.raise_if_invalid()
    for warning in report.warnings:
        logger.warning(f"⚠️ {bundle.name}: {warning}")
    return bundle


def load_bundle_file(path: Union[str, Path]) -> BundleData:
    """
    Load a user bundle from a JSON file

    Raises:
        BundleValidationError: unreadable file, bad schema or invalid data
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise BundleValidationError(f"cannot read bundle file {path}: {e}")
    return bundle_from_dict(data, name=path.stem)


def resolve_bundle(name_or_path: str) -> BundleData:
    """Catalog name first, then a bundle file path"""
    if name_or_path in _CATALOG:
        return _CATALOG[name_or_path]
    if Path(name_or_path).is_file():
        return load_bundle_file(name_or_path)
    raise NotInCatalog(f"'{name_or_path}' is neither a catalog name nor a bundle file")


def parse_eps(text: Optional[str], r: int) -> EpsilonChoice:
    """Parse "1,-1" style eps lists; None -> all -1"""
    if text is None:
        return EpsilonChoice.all_negative(r)
    try:
        signs = tuple(int(part) for part in text.replace(" ", "").split(",") if part)
    except ValueError:
        raise ConfigError(f"cannot parse eps {text!r}")
    if len(signs) != r:
        raise ConfigError(f"eps {text!r} has {len(signs)} entries, bundle has r={r}")
    return EpsilonChoice(signs)
