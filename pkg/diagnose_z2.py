"""
Diagnostic script for the Z2-symmetric Einstein solver
Checks the regularised closing function around the solved R, compares
alpha'(R) by finite differences and reports the reflection asymmetry.

    python diagnose_z2.py [catalog_name ...]
"""

import sys
import logging
from typing import Any, Dict

from dotenv import load_dotenv

from ansatz_solvers import Family, build_profile, solve_ww_z2
from bundle_config import builtin_catalog, catalog_names
from numerics import NumericsConfig, central_derivative

load_dotenv()

logger = logging.getLogger(__name__)

NEIGHBOUR_OFFSET = 1e-3


def diagnose(name: str, cfg: NumericsConfig) -> Dict[str, Any]:
    """
    Solve the Z2 row of one catalog bundle and check it

    Returns:
        Dict with R, the closing residual at R and at R -/+ NEIGHBOUR_OFFSET,
        alpha(R) against R(4-R)/2, the finite-difference alpha'(R) and
        the reflection asymmetry
    """
    bundle = builtin_catalog(name)
    profile = solve_ww_z2(bundle, cfg)
    R = profile.constants.R

    below = build_profile(Family.EINSTEIN_Z2, bundle, R - NEIGHBOUR_OFFSET, cfg).closing_residual()
    above = build_profile(Family.EINSTEIN_Z2, bundle, R + NEIGHBOUR_OFFSET, cfg).closing_residual()

    return {
        "bundle": name,
        "R": R,
        "A": profile.constants.A,
        "residual": profile.closing_residual(),
        "residual_below": below,
        "residual_above": above,
        "alpha_R": profile.alpha(R),
        "alpha_R_expected": R * (4.0 - R) / 2.0,
        # unreflected formula on both sides of R
        "slope_R": central_derivative(profile._z2_alpha_direct, R, cfg.fd_step),
        "asymmetry": profile.z2_asymmetry(),
    }


def main(names) -> int:
    cfg = NumericsConfig.from_env()
    failures = 0

    print("=" * 70)
    print("🔍 Z2 EINSTEIN DIAGNOSTICS")
    print("=" * 70)
    print()

    for name in names:
        print(f"Bundle: {name}")
        print("-" * 70)
        try:
            d = diagnose(name, cfg)
        except Exception as e:
            print(f"❌ Solver failed: {e}")
            failures += 1
            print()
            continue

        print(f"✅ R = {d['R']:.12f}")
        print(f"   A = {', '.join(f'{A:.12g}' for A in d['A'])}")
        print(f"   closing residual at R:       {d['residual']:.3e}")
        print(f"   closing residual at R - {NEIGHBOUR_OFFSET:g}: {d['residual_below']:+.3e}")
        print(f"   closing residual at R + {NEIGHBOUR_OFFSET:g}: {d['residual_above']:+.3e}")
        if d["residual_below"] * d["residual_above"] >= 0:
            print("⚠️  no sign change across R")
        print(f"   alpha(R) = {d['alpha_R']:.12f} (R(4-R)/2 = {d['alpha_R_expected']:.12f})")
        print(f"   alpha'(R) by central difference: {d['slope_R']:.3e}")
        print(f"   reflection asymmetry: {d['asymmetry']:.3e}")
        print()

    print("=" * 70)
    print("✅ Done" if not failures else f"❌ {failures} bundle(s) failed")
    print("=" * 70)
    return 1 if failures else 0


if __name__ == "__main__":
    logging.basicConfig(level=logging.WARNING)
    sys.exit(main(sys.argv[1:] or catalog_names()))
