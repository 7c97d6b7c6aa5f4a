"""Seeded parameter sweeps and the Monte Carlo validation report.

A sweep walks one grid (jammer budget or antenna count) for each value of an
optional series parameter.  At every point the same user drops are used
(unless ``redraw_drops``): users optimize (phi, eta) without regard to the
jammer, then the jammer plays optimal or equal jamming against them.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .jammer_opt import equal_jamming, solve_numeric
from .montecarlo import estimate_uatf_sinr
from .scenario import ScenarioConfig, SystemParams, db_to_linear, drop_users
from .se_core import PowerSplit, sum_se_closed_form, sum_se_closed_form_cscg
from .user_opt import UserStrategy, optimize_users

SWEEP_KINDS = ("sweep_jammer_budget", "sweep_antennas", "zeta_vs_antennas")
KINDS = SWEEP_KINDS + ("validate",)
MODES = ("optimal", "equal")
SERIES_KEYS = ("user_budget_db", "jammer_budget_db", "num_antennas", "user_fraction")

CSV_COLUMNS = (
    "sweep_value", "jamming_mode", "zeta", "phi", "eta", "sum_se_bits_per_hz",
    "per_user_sinr_min", "per_user_sinr_max", "num_drops", "seed",
    "num_antennas", "user_budget_db", "jammer_budget_db",
)


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    grid: tuple
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    num_antennas: int = 100
    user_budget_db: float = 10.0
    jammer_budget_db: float = 10.0
    user_fraction: float | None = None
    jamming_modes: tuple = MODES
    num_drops: int = 100
    seed: int = 0
    output_path: str | None = None
    series_key: str | None = None
    series_values: tuple = ()
    redraw_drops: bool = False
    phi_grid_step: float = 0.05
    refine_tol: float = 1e-6
    jammer_tol: float = 1e-9

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; expected one of {SWEEP_KINDS}")
        grid = tuple(float(g) for g in self.grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be nonempty and strictly increasing")
        object.__setattr__(self, "grid", grid)
        if self.num_drops < 1:
            raise ValueError("num_drops must be at least 1")
        modes = tuple(self.jamming_modes)
        if not modes or any(m not in MODES for m in modes):
            raise ValueError(f"jamming_modes must be a nonempty subset of {MODES}")
        object.__setattr__(self, "jamming_modes", modes)
        if self.series_key is not None and self.series_key not in SERIES_KEYS:
            raise ValueError(f"series_key must be one of {SERIES_KEYS}")
        object.__setattr__(self, "series_values", tuple(self.series_values))
        if self.series_key is not None and not self.series_values:
            raise ValueError("series_values must be nonempty when series_key is set")
        if self.scenario.seed != self.seed:
            object.__setattr__(self, "scenario", replace(self.scenario, seed=self.seed))

    def series(self) -> list:
        return list(self.series_values) if self.series_key else [None]


@dataclass(frozen=True)
class PointSettings:
    num_antennas: int
    user_budget_db: float
    jammer_budget_db: float
    user_fraction: float | None


@dataclass(frozen=True, eq=False)
class PointResult:
    """Per-drop outcomes at one sweep point, keyed by jamming mode."""

    settings: PointSettings
    sweep_value: float
    sum_se: dict
    zeta: dict
    phi: np.ndarray
    eta: np.ndarray
    sinr_min: dict
    sinr_max: dict


def point_settings(spec: SweepSpec, series_value, grid_value) -> PointSettings:
    values = {
        "num_antennas": spec.num_antennas,
        "user_budget_db": spec.user_budget_db,
        "jammer_budget_db": spec.jammer_budget_db,
        "user_fraction": spec.user_fraction,
    }
    if spec.series_key is not None:
        values[spec.series_key] = series_value
    if spec.kind == "sweep_jammer_budget":
        values["jammer_budget_db"] = grid_value
    else:
        values["num_antennas"] = grid_value
    values["num_antennas"] = int(round(values["num_antennas"]))
    return PointSettings(**values)


def _base_params(spec: SweepSpec, beta: np.ndarray, s: PointSettings) -> SystemParams:
    cfg = spec.scenario
    return SystemParams(
        num_antennas=s.num_antennas,
        coherence_length=cfg.coherence_length,
        training_length=cfg.num_users,
        user_fading=beta,
        jammer_fading=cfg.jammer_fading,
        user_budget=db_to_linear(s.user_budget_db),
        jammer_budget=db_to_linear(s.jammer_budget_db),
    )


def evaluate_point(spec: SweepSpec, series_value, grid_index: int, cache: dict | None = None) -> PointResult:
    """Evaluate every drop at one grid point.

    ``cache`` memoizes user strategies, which do not depend on the jammer.
    """
    cache = {} if cache is None else cache
    grid_value = spec.grid[grid_index]
    s = point_settings(spec, series_value, grid_value)
    D = spec.num_drops
    out_se = {m: np.empty(D) for m in spec.jamming_modes}
    out_zeta = {m: np.empty(D) for m in spec.jamming_modes}
    out_min = {m: np.empty(D) for m in spec.jamming_modes}
    out_max = {m: np.empty(D) for m in spec.jamming_modes}
    phis, etas = np.empty(D), np.empty(D)
    for d in range(D):
        extra = (grid_index,) if spec.redraw_drops else ()
        beta = drop_users(spec.scenario, d, *extra)
        params = _base_params(spec, beta, s)
        key = (d, extra, s.num_antennas, s.user_budget_db, s.user_fraction)
        if key not in cache:
            cache[key] = optimize_users(params, spec.phi_grid_step, spec.refine_tol,
                                        fixed_phi=s.user_fraction)
        user: UserStrategy = cache[key]
        params = params.replace(training_length=user.eta_star)
        phis[d], etas[d] = user.phi_star, user.eta_star
        for mode in spec.jamming_modes:
            if mode == "optimal":
                zeta = solve_numeric(params, user.phi_star, spec.jammer_tol).zeta_star
            else:
                zeta = equal_jamming(params)
            report = sum_se_closed_form(params, PowerSplit.from_fractions(params, user.phi_star, zeta))
            out_se[mode][d] = report.sum_se
            out_zeta[mode][d] = zeta
            out_min[mode][d] = report.per_user_sinr.min()
            out_max[mode][d] = report.per_user_sinr.max()
    return PointResult(s, grid_value, out_se, out_zeta, phis, etas, out_min, out_max)


def _run_series(spec: SweepSpec, series_value) -> list[PointResult]:
    cache: dict = {}
    return [evaluate_point(spec, series_value, i, cache) for i in range(len(spec.grid))]


def sweep_results(spec: SweepSpec, workers: int = 1) -> list[list[PointResult]]:
    """Point results per series, in series then grid order."""
    series = spec.series()
    if workers > 1 and len(series) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(series))) as pool:
            return list(pool.map(_run_series, [spec] * len(series), series))
    return [_run_series(spec, v) for v in series]


def _rows_for(spec: SweepSpec, res: PointResult) -> list[dict]:
    rows = []
    for mode in spec.jamming_modes:
        rows.append({
            "sweep_value": res.sweep_value,
            "jamming_mode": mode,
            "zeta": float(np.mean(res.zeta[mode])),
            "phi": float(np.mean(res.phi)),
            "eta": float(np.mean(res.eta)),
            "sum_se_bits_per_hz": float(np.mean(res.sum_se[mode])),
            "per_user_sinr_min": float(np.mean(res.sinr_min[mode])),
            "per_user_sinr_max": float(np.mean(res.sinr_max[mode])),
            "num_drops": spec.num_drops,
            "seed": spec.seed,
            "num_antennas": res.settings.num_antennas,
            "user_budget_db": res.settings.user_budget_db,
            "jammer_budget_db": res.settings.jammer_budget_db,
        })
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """CSV-ready rows, one per (series value, grid value, jamming mode)."""
    rows = []
    for series in sweep_results(spec, workers):
        for res in series:
            rows.extend(_rows_for(spec, res))
    return rows


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def rows_to_csv(rows: list[dict], columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def write_csv(rows: list[dict], path, columns=CSV_COLUMNS) -> None:
    Path(path).write_text(rows_to_csv(rows, columns))


# --- Monte Carlo validation -------------------------------------------------

MIN_VERDICT_BLOCKS = 10_000
VALIDATION_COLUMNS = ("user", "closed_form_sinr", "montecarlo_sinr", "relative_deviation", "status")
REFERENCES = ("published", "cscg")


@dataclass(frozen=True)
class ValidationSpec:
    num_antennas: int = 20
    user_fading: tuple = (1.0,)
    jammer_fading: float = 1.0
    training_length: int = 2
    coherence_length: int = 200
    user_fraction: float = 0.5
    jammer_fraction: float = 0.5
    user_budget_db: float = 10.0
    jammer_budget_db: float = 10.0
    num_blocks: int = 100_000
    seed: int = 0
    field: str = "complex"
    reference: str = "published"
    threshold: float = 0.02
    output_path: str | None = None

    def params(self) -> SystemParams:
        return SystemParams(
            num_antennas=self.num_antennas,
            coherence_length=self.coherence_length,
            training_length=self.training_length,
            user_fading=self.user_fading,
            jammer_fading=self.jammer_fading,
            user_budget=db_to_linear(self.user_budget_db),
            jammer_budget=db_to_linear(self.jammer_budget_db),
        )

    def split(self) -> PowerSplit:
        return PowerSplit.from_fractions(self.params(), self.user_fraction, self.jammer_fraction)


@dataclass(frozen=True, eq=False)
class ValidationReport:
    closed_form_sinr: np.ndarray
    montecarlo_sinr: np.ndarray
    relative_deviation: np.ndarray
    num_blocks: int
    threshold: float
    status: str  # "pass", "fail" or "insufficient samples"

    @property
    def passed(self) -> bool | None:
        return None if self.status == "insufficient samples" else self.status == "pass"

    def rows(self) -> list[dict]:
        rows = []
        for k in range(self.closed_form_sinr.size):
            dev = self.relative_deviation[k]
            if self.status == "insufficient samples":
                status = self.status
            else:
                status = "pass" if dev < self.threshold else "fail"
            rows.append({
                "user": k,
                "closed_form_sinr": float(self.closed_form_sinr[k]),
                "montecarlo_sinr": float(self.montecarlo_sinr[k]),
                "relative_deviation": float(dev),
                "status": status,
            })
        return rows


def run_validation(params: SystemParams, split: PowerSplit, num_blocks: int, seed: int = 0, *,
                   reference: str = "published", field: str = "complex", workers: int = 1,
                   threshold: float = 0.02) -> ValidationReport:
    """Compare the Monte Carlo SINR with a closed form, user by user.

    ``reference="published"`` checks the closed form used throughout the
    library; ``"cscg"`` checks the exact complex-Gaussian expression.
    """
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}")
    closed = (sum_se_closed_form if reference == "published" else sum_se_closed_form_cscg)(params, split)
    est = estimate_uatf_sinr(params, split, num_blocks, seed, field=field, workers=workers)
    dev = np.abs(est.sinr - closed.per_user_sinr) / closed.per_user_sinr
    if num_blocks < MIN_VERDICT_BLOCKS:
        status = "insufficient samples"
    else:
        status = "pass" if bool(np.all(dev < threshold)) else "fail"
    return ValidationReport(closed.per_user_sinr, est.sinr, dev, num_blocks, threshold, status)


# --- presets and configuration ---------------------------------------------

PRESETS = {
    "fig1": dict(kind="sweep_jammer_budget", grid=(-10, -5, 0, 5, 10, 15, 20, 25, 30),
                 num_antennas=100, series_key="user_budget_db", series_values=(0, 10, 20)),
    "fig2": dict(kind="sweep_antennas", grid=(20, 40, 60, 80, 100, 150, 200, 300, 400, 500),
                 jammer_budget_db=10.0, series_key="user_budget_db", series_values=(5, 10, 15)),
    "fig3": dict(kind="zeta_vs_antennas",
                 grid=(10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000),
                 user_budget_db=10.0, jammer_budget_db=10.0, jamming_modes=("optimal",),
                 series_key="user_fraction", series_values=(0.1, 0.3, 0.5, 0.7, 0.9)),
}

_SCENARIO_KEYS = {f.name for f in fields(ScenarioConfig)} - {"seed"}
_SWEEP_KEYS = {f.name for f in fields(SweepSpec)} - {"scenario", "series_key", "series_values"}
_VALIDATION_KEYS = {f.name for f in fields(ValidationSpec)}


def load_config(path) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("configuration must be a JSON object")
    return cfg


def _unknown(keys, allowed):
    extra = sorted(set(keys) - set(allowed))
    if extra:
        raise ValueError(f"unknown configuration keys: {', '.join(extra)}")


def sweep_spec_from_config(preset: str | None, config: dict | None = None, **overrides) -> SweepSpec:
    """Build a SweepSpec from a preset name and/or a JSON-style mapping.

    A ``series`` entry maps one parameter name to the list of its values.
    ``None``-valued overrides are ignored.
    """
    config = dict(config or {})
    config.update({k: v for k, v in overrides.items() if v is not None})
    _unknown(config, _SCENARIO_KEYS | _SWEEP_KEYS | {"series"})
    values = dict(PRESETS[preset]) if preset else {}
    if not preset and "kind" not in config:
        raise ValueError("a custom sweep needs a 'kind'")
    scenario = ScenarioConfig(**{k: config.pop(k) for k in list(config) if k in _SCENARIO_KEYS},
                              seed=int(config.get("seed", 0)))
    series = config.pop("series", None)
    if series is not None:
        if not isinstance(series, dict) or len(series) != 1:
            raise ValueError("'series' must map exactly one parameter to a list of values")
        (key, vals), = series.items()
        values["series_key"], values["series_values"] = key, tuple(vals)
    values.update(config)
    for key in ("grid", "jamming_modes"):
        if key in values:
            values[key] = tuple(values[key])
    return SweepSpec(scenario=scenario, **values)


def validation_spec_from_config(config: dict | None = None, **overrides) -> ValidationSpec:
    config = dict(config or {})
    config.pop("kind", None)
    config.update({k: v for k, v in overrides.items() if v is not None})
    _unknown(config, _VALIDATION_KEYS)
    if "user_fading" in config:
        config["user_fading"] = tuple(config["user_fading"])
    return ValidationSpec(**config)
