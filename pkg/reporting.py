"""
Reporting Module
Batch runs over the catalog, comparison against the embedded table rows,
profile sampling, m-sweeps and the table/CSV/JSON-lines writers.

Every row is a plain dict with `success` / `error` keys; a failing row is
recorded and never aborts the batch.
"""

import csv
import json
import math
import time
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from ansatz_solvers import Family, MetricProfile, solve
from bundle_config import BundleData, EpsilonChoice, builtin_catalog, catalog_names
from entropy import entropy_for
from errors import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_SOLVER,
    EXIT_VALIDATION,
    ConfigError,
    WorkbenchError,
)
from numerics import NumericsConfig
from table_rows import ExpectedRow, find_row, rows_for

logger = logging.getLogger(__name__)

DEFAULT_RTOL_SIG = 5e-6

CSV_FIELDS = [
    "bundle", "family", "m", "eps", "constant_name", "constant_value",
    "nu", "significand", "exponent", "pass",
]

# worst first: validation > solver > mismatch > pass
_SEVERITY = {EXIT_OK: 0, EXIT_MISMATCH: 1, EXIT_SOLVER: 2, EXIT_VALIDATION: 3}
_STATUS = {EXIT_OK: "pass", EXIT_MISMATCH: "mismatch", EXIT_SOLVER: "solver", EXIT_VALIDATION: "validation"}


def worst_exit_code(codes: Iterable[int]) -> int:
    worst = EXIT_OK
    for code in codes:
        if _SEVERITY[code] > _SEVERITY[worst]:
            worst = code
    return worst


@dataclass
class RunReport:
    rows: List[Dict[str, Any]]
    elapsed: float
    settings: Dict[str, Any] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return worst_exit_code(row["exit_code"] for row in self.rows)

    @property
    def passed(self) -> int:
        return sum(1 for row in self.rows if row["pass"] is True)


@dataclass
class SweepReport:
    rows: List[Dict[str, Any]]
    monotonic: str  # "increasing", "decreasing", "none" or "n/a"

    @property
    def exit_code(self) -> int:
        return worst_exit_code(row["exit_code"] for row in self.rows)


def _settings(cfg: NumericsConfig, **extra) -> Dict[str, Any]:
    return {"steps": cfg.steps, "root_tol": cfg.root_tol, "residual_tol": cfg.residual_tol, **extra}


# ============================================================================
# Single rows
# ============================================================================

def _base_row(bundle: BundleData, family: Family, eps: Optional[EpsilonChoice], m: Optional[float]) -> Dict[str, Any]:
    return {
        "bundle": bundle.name,
        "family": family.value,
        "m": m,
        "eps": str(eps) if eps is not None else None,
        "constant_name": family.constant_name,
        "constant_value": None,
        "nu": None,
        "significand": None,
        "exponent": None,
        "density": None,
        "normalized": family is Family.QUASI_EINSTEIN,
        "expected_constant": None,
        "expected_significand": None,
        "constant_deviation": None,
        "significand_deviation": None,
        "pass": None,
        "status": "pass",
        "exit_code": EXIT_OK,
        "success": False,
        "error": None,
    }


def _compare(row: Dict[str, Any], expected: ExpectedRow, rtol_sig: float, atol_const: Optional[float]):
    significand = math.exp(row["nu"] + expected.exponent)
    constant_dev = abs(row["constant_value"] - expected.constant_value)
    significand_dev = abs(significand - expected.significand) / expected.significand
    atol = atol_const if atol_const is not None else expected.constant_atol

    row["expected_constant"] = expected.constant_value
    row["expected_significand"] = expected.significand
    row["constant_deviation"] = constant_dev
    row["significand_deviation"] = significand_dev
    row["pass"] = constant_dev <= atol and significand_dev <= rtol_sig
    if not row["pass"]:
        row["status"] = _STATUS[EXIT_MISMATCH]
        row["exit_code"] = EXIT_MISMATCH
        logger.warning(
            f"⚠️ {row['bundle']} {row['family']} m={row['m']} eps={row['eps']}: "
            f"{row['constant_name']} off by {constant_dev:.3e} (atol {atol:.1e}), "
            f"significand off by {significand_dev:.3e} (rtol {rtol_sig:.1e})"
        )


def run_single(bundle: BundleData, family, cfg: NumericsConfig,
               eps: Optional[EpsilonChoice] = None, m: Optional[float] = None,
               compare: bool = True, rtol_sig: float = DEFAULT_RTOL_SIG,
               atol_const: Optional[float] = None) -> Dict[str, Any]:
    """
    Solve one family on one bundle and compute its entropy

    Returns:
        Row dict; compared against the embedded row with the same key
        when one exists and `compare` is set
    """
    family = Family(family)
    if family in (Family.EINSTEIN_Z2, Family.KRS):
        eps, m = None, None
    elif family is Family.EINSTEIN_WW:
        m = None
    if family in (Family.EINSTEIN_WW, Family.QUASI_EINSTEIN) and eps is None:
        eps = EpsilonChoice.all_negative(bundle.r)

    row = _base_row(bundle, family, eps, m)
    try:
        profile = solve(family, bundle, cfg, eps=eps, m=m)
        result = entropy_for(profile)
        row.update({
            "constant_value": profile.constant_value,
            "nu": result.nu,
            "significand": result.significand,
            "exponent": result.exponent,
            "density": result.density,
            "success": True,
        })
        if family is Family.KRS:
            row["C"] = result.breakdown.C
        expected = find_row(bundle.name, family, m=m, eps=eps) if compare else None
        if expected is not None:
            _compare(row, expected, rtol_sig, atol_const)
    except WorkbenchError as e:
        logger.error(f"❌ {bundle.name} {family.value}: {e}")
        row.update({"error": str(e), "exit_code": e.exit_code, "status": _STATUS[e.exit_code], "pass": False})
    except Exception as e:
        logger.error(f"❌ {bundle.name} {family.value}: unexpected {type(e).__name__}: {e}")
        row.update({"error": f"{type(e).__name__}: {e}", "exit_code": EXIT_SOLVER,
                    "status": _STATUS[EXIT_SOLVER], "pass": False})
    return row


# ============================================================================
# Catalog regression
# ============================================================================

def run_catalog(names: Optional[Sequence[str]], cfg: NumericsConfig,
                rtol_sig: float = DEFAULT_RTOL_SIG, atol_const: Optional[float] = None,
                workers: int = 1) -> RunReport:
    """
    Solve and compare every embedded row of the named catalog bundles

    Args:
        names: catalog names (None -> all four)
        cfg: numerics settings
        rtol_sig: relative tolerance on the nu significand
        atol_const: absolute tolerance on the constant (None -> per-row printed precision)
        workers: thread count; rows stay in table order

    Raises:
        NotInCatalog: an unknown name
    """
    names = list(names) if names else list(catalog_names())
    bundles = {name: builtin_catalog(name) for name in names}
    expected = [row for name in names for row in rows_for(name)]
    if workers < 1:
        raise ConfigError(f"workers must be positive, got {workers!r}")

    logger.info(f"🚀 Running {len(expected)} rows over {', '.join(names)} (steps={cfg.steps}, workers={workers})")
    started = time.perf_counter()

    def work(row: ExpectedRow) -> Dict[str, Any]:
        return run_single(bundles[row.bundle_name], row.family, cfg, eps=row.eps, m=row.m,
                          compare=True, rtol_sig=rtol_sig, atol_const=atol_const)

    if workers == 1:
        rows = [work(row) for row in expected]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(work, expected))

    report = RunReport(
        rows=rows,
        elapsed=time.perf_counter() - started,
        settings=_settings(cfg, rtol_sig=rtol_sig, atol_const=atol_const, workers=workers),
    )
    logger.info(f"✅ {report.passed}/{len(rows)} rows pass in {report.elapsed:.2f}s")
    return report


# ============================================================================
# Sampling and sweeps
# ============================================================================

def sample_profile(profile: MetricProfile, grid_points: int) -> List[Dict[str, float]]:
    """
    Uniform samples (s, alpha, beta_1..beta_r, f) on [0, s*] inclusive

    Raises:
        ConfigError: grid_points < 2
    """
    if grid_points < 2:
        raise ConfigError(f"grid_points must be at least 2, got {grid_points!r}")
    samples = []
    for s in np.linspace(0.0, profile.s_star, grid_points):
        point = profile.evaluate(float(s))
        record = {"s": float(s), "alpha": point.alpha}
        for i, beta in enumerate(point.betas, start=1):
            record[f"beta_{i}"] = beta
        record["f"] = point.f
        samples.append(record)
    return samples


def _monotonic(values: Sequence[float]) -> str:
    if len(values) < 2:
        return "n/a"
    steps = np.diff(values)
    if np.all(steps > 0):
        return "increasing"
    if np.all(steps < 0):
        return "decreasing"
    return "none"


def sweep_m(bundle: BundleData, eps: Optional[EpsilonChoice], m_list: Sequence[float],
            cfg: NumericsConfig, compare: bool = True) -> SweepReport:
    """
    Quasi-Einstein rows for each m, plus the soliton row for comparison

    Returns:
        SweepReport whose `monotonic` flag describes nu over the QE rows; "n/a"
        when there is a single m or any QE row failed
    """
    rows = [run_single(bundle, Family.QUASI_EINSTEIN, cfg, eps=eps, m=m, compare=compare) for m in m_list]
    failed = [row["m"] for row in rows if not row["success"]]
    if failed:
        logger.warning(f"⚠️ {bundle.name} m-sweep: no monotonicity verdict, m = {failed} failed")
        monotonic = "n/a"
    else:
        monotonic = _monotonic([row["nu"] for row in rows])
    rows.append(run_single(bundle, Family.KRS, cfg, compare=compare))
    logger.info(f"📊 {bundle.name} m-sweep over {list(m_list)}: nu {monotonic}")
    return SweepReport(rows=rows, monotonic=monotonic)


def parse_m_range(text: str) -> List[float]:
    """ "2:5" -> [2, 3, 4, 5]; "2,3.5" -> [2, 3.5] """
    try:
        if ":" in text:
            lo, hi = (int(part) for part in text.split(":", 1))
            if hi < lo:
                raise ConfigError(f"empty m range {text!r}")
            return [float(m) for m in range(lo, hi + 1)]
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse m range {text!r}")


# ============================================================================
# Writers
# ============================================================================

def _machine(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _human(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return format(value, ".7g")
    return str(value)


def write_csv(rows: Sequence[Dict[str, Any]], stream: TextIO, fields: Sequence[str] = CSV_FIELDS):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_machine(row.get(name)) for name in fields])


def write_jsonl(rows: Sequence[Dict[str, Any]], stream: TextIO, fields: Optional[Sequence[str]] = None):
    for row in rows:
        record = {name: row.get(name) for name in fields} if fields else dict(row)
        stream.write(json.dumps(record, sort_keys=False) + "\n")


def render_table(rows: Sequence[Dict[str, Any]], fields: Sequence[str] = CSV_FIELDS) -> str:
    """Aligned plain-text table, reals to 7 significant digits"""
    cells = [[_human(row.get(name)) for name in fields] for row in rows]
    widths = [max([len(name)] + [len(line[i]) for line in cells]) for i, name in enumerate(fields)]
    lines = ["  ".join(name.ljust(w) for name, w in zip(fields, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for line in cells:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(line, widths)))
    for row in rows:
        if row.get("error"):
            lines.append(f"  ! {row['bundle']} {row['family']}: {row['error']}")
    return "\n".join(lines)
