"""
Tests for the quadrature, root finding and config helpers
"""

import math
import sys

import numpy as np
import pytest

from errors import ConfigError, NoConvergence, NoSignChange, NumericalError
from numerics import (
    NumericsConfig,
    central_derivative,
    find_root_bracketed,
    integrate_simpson38,
    one_sided_derivative,
    quadratic_roots,
    scan_bracket,
    _simpson38_weights,
)


def test_simpson_exact_on_cubics():
    value = integrate_simpson38(lambda x: x ** 3 - 2.0 * x + 1.0, 0.0, 2.0, 1500)
    assert value == pytest.approx(2.0, abs=1e-14)


def test_simpson_exact_on_cubics_at_representable_nodes():
    # nodes 0, 1, 2, 3 and weights are exact in binary
    assert integrate_simpson38(lambda x: x ** 3, 0.0, 3.0, 3) == 20.25


def test_simpson_unit_cubic_within_rounding():
    # 1/3 and 2/3 are not representable; the result may miss 0.25 by a few ulps
    assert integrate_simpson38(lambda x: x ** 3, 0.0, 1.0, 3) == pytest.approx(0.25, abs=2e-16)


def test_simpson_sums_left_to_right():
    f = lambda x: np.sin(7.0 * x) * np.exp(-x)
    steps = 1500
    x = np.linspace(0.0, 4.0, steps + 1)
    terms = _simpson38_weights(steps) * f(x)
    total = 0.0
    for term in terms:
        total += term
    h = 4.0 / steps
    assert integrate_simpson38(f, 0.0, 4.0, steps) == 3.0 * h / 8.0 * total


def test_simpson_fourth_order_convergence():
    exact = math.e - 1.0
    coarse = abs(integrate_simpson38(np.exp, 0.0, 1.0, 30) - exact)
    fine = abs(integrate_simpson38(np.exp, 0.0, 1.0, 60) - exact)
    assert coarse / fine >= 8.0


def test_simpson_constant_integrand_broadcasts():
    assert integrate_simpson38(lambda x: 3.0, 0.0, 2.0, 3) == pytest.approx(6.0)


def test_simpson_empty_interval():
    assert integrate_simpson38(np.exp, 1.5, 1.5) == 0.0


@pytest.mark.parametrize("steps", [0, 4, 1000, 1501])
def test_simpson_rejects_bad_steps(steps):
    with pytest.raises(ConfigError):
        integrate_simpson38(np.exp, 0.0, 1.0, steps)


def test_simpson_rejects_reversed_limits():
    with pytest.raises(ConfigError):
        integrate_simpson38(np.exp, 1.0, 0.0)


def test_simpson_reports_non_finite_abscissa():
    with np.errstate(divide="ignore"):
        with pytest.raises(NumericalError) as info:
            integrate_simpson38(np.log, 0.0, 1.0, 6)
    assert info.value.abscissa == 0.0


def test_simpson_is_deterministic():
    f = lambda x: np.sin(3.0 * x) * np.exp(-x)
    assert integrate_simpson38(f, 0.0, 4.0) == integrate_simpson38(f, 0.0, 4.0)


def test_find_root_sqrt_two(cfg):
    root = find_root_bracketed(lambda x: x * x - 2.0, 0.0, 2.0, cfg)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)


@pytest.mark.parametrize("scale", [1e-6, 1.0, 1e3, 1e6, 1e9])
def test_find_root_ignores_positive_scaling(cfg, scale):
    reference = find_root_bracketed(lambda x: x * x - 2.0, 1.0, 2.0, cfg)
    root = find_root_bracketed(lambda x: scale * (x * x - 2.0), 1.0, 2.0, cfg)
    assert root == pytest.approx(reference, abs=2.5 * cfg.root_tol)


def test_find_root_exact_endpoint(cfg):
    assert find_root_bracketed(lambda x: x - 1.0, 1.0, 3.0, cfg) == 1.0
    assert find_root_bracketed(lambda x: x - 3.0, 1.0, 3.0, cfg) == 3.0


def test_find_root_without_sign_change(cfg):
    with pytest.raises(NoSignChange) as info:
        find_root_bracketed(lambda x: x * x + 1.0, -1.0, 2.0, cfg)
    assert info.value.bracket == (-1.0, 2.0)
    assert info.value.values == (2.0, 5.0)


def test_find_root_residual_contract():
    # a jump at 1 changes sign but has no root
    tight = NumericsConfig(residual_tol=1e-10)
    with pytest.raises(NoConvergence):
        find_root_bracketed(lambda x: -1.0 if x < 1.0 else 1.0, 0.0, 2.0, tight)


def test_scan_bracket_linear_finds_every_crossing():
    brackets = scan_bracket(math.sin, 0.5, 10.0, 200)
    assert len(brackets) == 3
    for (lo, hi), k in zip(brackets, (1, 2, 3)):
        assert lo < k * math.pi < hi


def test_scan_bracket_geometric():
    brackets = scan_bracket(lambda x: x - 37.0, 1e-3, 1e3, 100, "geometric")
    assert len(brackets) == 1
    lo, hi = brackets[0]
    assert lo < 37.0 < hi


def test_scan_bracket_skips_failures():
    def g(x):
        if 0.4 < x < 0.6:
            raise NumericalError("hole")
        return x - 0.8

    brackets = scan_bracket(g, 0.0, 1.0, 11)
    assert len(brackets) == 1
    assert brackets[0][0] <= 0.8 <= brackets[0][1]


def test_scan_bracket_rejects_bad_ranges():
    with pytest.raises(ConfigError):
        scan_bracket(math.sin, 1.0, 0.0)
    with pytest.raises(ConfigError):
        scan_bracket(math.sin, 0.0, 1.0, scale="geometric")


@pytest.mark.parametrize("E,p,q", [(2.0, 2, -1), (40.0, 3, -2), (-1.99, 2, -1), (-1.5, 3, -1)])
def test_quadratic_roots_solve_the_quadratic(E, p, q):
    r1, r2 = quadratic_roots(E, p, q)
    for A in (r1, r2):
        assert 8.0 * E * A * A - 8.0 * p * A - q * q == pytest.approx(0.0, abs=1e-10)
    if E > 0:
        assert r1 > 0 > r2
    else:
        assert r1 < 0 and r2 < 0
        assert abs(r2) < abs(r1)


def test_quadratic_roots_degenerate():
    with pytest.raises(NumericalError):
        quadratic_roots(0.0, 2, -1)
    with pytest.raises(NumericalError):
        quadratic_roots(-10.0, 1, -1)


def test_derivative_stencils_exact_on_quadratics():
    f = lambda x: x * x - 3.0 * x
    assert one_sided_derivative(f, 1.0, 1e-3, +1) == pytest.approx(-1.0, abs=1e-9)
    assert one_sided_derivative(f, 1.0, 1e-3, -1) == pytest.approx(-1.0, abs=1e-9)
    assert central_derivative(f, 1.0, 1e-3) == pytest.approx(-1.0, abs=1e-9)


def test_config_from_env(monkeypatch):
    monkeypatch.setenv("ENTROPY_STEPS", "3000")
    monkeypatch.setenv("ENTROPY_ROOT_TOL", "1e-11")
    cfg = NumericsConfig.from_env(steps=None)
    assert cfg.steps == 3000
    assert cfg.root_tol == 1e-11
    assert NumericsConfig.from_env(steps=600).steps == 600


def test_config_rejects_bad_env(monkeypatch):
    monkeypatch.setenv("ENTROPY_STEPS", "many")
    with pytest.raises(ConfigError):
        NumericsConfig.from_env()


def test_config_validation():
    with pytest.raises(ConfigError):
        NumericsConfig(steps=1000)
    with pytest.raises(ConfigError):
        NumericsConfig(kappa0_scan=(0.0, 10.0))
    assert NumericsConfig().with_steps(3000).steps == 3000


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
