"""Scenario configs, parameter sweeps and CSV/JSON output.

A config is a single JSON document::

    {
      "preset": "glasgow",
      "base": {
        "P_in_w": 1.7,
        "arms": {"T_loss_ppm": 25},
        "north": {"T_itm_ppm": 710},
        "bs": {"eta": 0.0, "loss_ppm": 1000},
        "readout": {"zeta_rad": 1.5707963267948966, "eta_pd": 0.95},
        "laser": {"L_c": 1, "L_s": 1},
        "model": {"cross": "source", "carrier_reflection": "linear"}
      },
      "grid": {"f_min_hz": 10, "f_max_hz": 1e5, "points": 600, "log_spaced": true},
      "sweep": {"parameter": "arm_loss_ppm", "values": [0, 15, 25, 50, 100]},
      "output_prefix": "out/loss",
      "references": ["sql", "sagnac", "michelson"],
      "zeta_opt": false
    }

Every section is optional except that either ``preset`` or a complete
``base`` must be given. Transmissivities and losses are in ppm, angles in
radians, frequencies in Hz. Keys under ``arms`` apply to both arms before
the per-arm ``north``/``east`` overrides.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .arm_cavity import ArmCavitySpec
from .assembly import InterferometerSpec
from .beamsplitter import BeamSplitterSpec
from .noise import default_slope_band, fit_slope, noise_budget, reference_curves
from .presets import DEFAULT_GRIDS, PRESETS
from .two_photon import DomainError, HomodyneReadout, LaserNoiseSpec

PPM = 1e-6
SWEEP_PARAMETERS = ("arm_loss_ppm", "eta_bs", "delta_T_itm_ppm", "laser_noise_level")
REFERENCE_NAMES = ("sql", "sagnac", "michelson")
ETA_LIMIT = 0.2


class ConfigError(ValueError):
    """Malformed or invalid scenario configuration."""


class ScenarioError(DomainError):
    """Engine failure inside a sweep, tagged with where it happened."""

    def __init__(self, message, parameter=None, value=None, frequency_hz=None):
        super().__init__(message)
        self.parameter = parameter
        self.value = value
        self.frequency_hz = frequency_hz


_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_ARM = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "round_trip_m": _POS,
        "T_itm_ppm": _POS,
        "T_loss_ppm": {"type": "number", "minimum": 0},
        "detuning_rad_s": _NUM,
        "M_itm_kg": _POS,
        "M_etm_kg": _POS,
    },
}
SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "preset": {"type": "string"},
        "base": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "P_in_w": {"type": "number", "minimum": 0},
                "wavelength_m": _POS,
                "arms": _ARM,
                "north": _ARM,
                "east": _ARM,
                "bs": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"eta": _NUM, "loss_ppm": {"type": "number", "minimum": 0}},
                },
                "readout": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"zeta_rad": _NUM, "eta_pd": _NUM},
                },
                "laser": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"L_c": _NUM, "L_s": _NUM},
                },
                "model": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "arm_model": {"enum": ["auto", "general", "resonant"]},
                        "cross": {"enum": ["source", "geometric"]},
                        "carrier_reflection": {"enum": ["linear", "exact"]},
                    },
                },
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "f_min_hz": _NUM,
                "f_max_hz": _NUM,
                "points": {"type": "integer"},
                "log_spaced": {"type": "boolean"},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["parameter", "values"],
            "properties": {
                "parameter": {"enum": list(SWEEP_PARAMETERS)},
                "values": {"type": "array", "items": _NUM, "minItems": 1},
            },
        },
        "output_prefix": {"type": "string", "minLength": 1},
        "references": {
            "type": "array",
            "items": {"enum": list(REFERENCE_NAMES)},
            "uniqueItems": True,
        },
        "zeta_opt": {"type": "boolean"},
    },
}


@dataclass(frozen=True)
class Grid:
    f_min: float
    f_max: float
    points: int
    log_spaced: bool = True

    def __post_init__(self):
        if not self.f_min > 0:
            raise ConfigError("grid.f_min_hz: must be > 0 (the SQL is singular at DC)")
        if not self.f_min < self.f_max:
            raise ConfigError("grid.f_max_hz: must exceed f_min_hz")
        if self.points < 2:
            raise ConfigError("grid.points: need at least 2 points")

    def frequencies(self):
        if self.log_spaced:
            return np.logspace(np.log10(self.f_min), np.log10(self.f_max), self.points)
        return np.linspace(self.f_min, self.f_max, self.points)


@dataclass(frozen=True)
class Sweep:
    parameter: str
    values: tuple


@dataclass(frozen=True)
class ScenarioConfig:
    base: InterferometerSpec
    grid: Grid
    sweep: Sweep | None = None
    output_prefix: str = "speedmeter"
    references: tuple = ()
    zeta_opt: bool = False
    preset: str | None = None

    def __post_init__(self):
        if self.sweep is not None:
            for v in self.sweep.values:
                check_sweep_value(self.base, self.sweep.parameter, v)
        unknown = set(self.references) - set(REFERENCE_NAMES)
        if unknown:
            raise ConfigError(f"references: unknown curve(s) {sorted(unknown)}")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def check_sweep_value(base: InterferometerSpec, parameter, value):
    """Raise ConfigError when a sweep value leaves the supported range."""
    where = f"sweep.values: {parameter}={value}"
    if parameter == "arm_loss_ppm":
        limit = 10 * min(base.north.T_itm, base.east.T_itm) / PPM
        if not 0 <= value < limit:
            raise ConfigError(f"{where} outside [0, {limit:g}) ppm")
    elif parameter == "eta_bs":
        if not abs(value) < ETA_LIMIT:
            raise ConfigError(f"{where} must satisfy |eta| < {ETA_LIMIT}")
    elif parameter == "delta_T_itm_ppm":
        lo = min(base.north.T_itm, base.east.T_itm) / PPM
        if not abs(value) / 2 < lo:
            raise ConfigError(f"{where} would drive an ITM transmission to zero")
    elif parameter == "laser_noise_level":
        if value < 1:
            raise ConfigError(f"{where} must be >= 1 (vacuum)")
    else:
        raise ConfigError(f"sweep.parameter: unknown {parameter!r}")


def apply_sweep(base: InterferometerSpec, parameter, value) -> InterferometerSpec:
    if parameter == "arm_loss_ppm":
        return base.with_arms(T_loss=value * PPM)
    if parameter == "eta_bs":
        return base.replace(bs=dataclasses.replace(base.bs, eta=value))
    if parameter == "delta_T_itm_ppm":
        half = value * PPM / 2
        return base.replace(
            north=dataclasses.replace(base.north, T_itm=base.north.T_itm + half),
            east=dataclasses.replace(base.east, T_itm=base.east.T_itm - half),
        )
    if parameter == "laser_noise_level":
        return base.replace(laser=LaserNoiseSpec(value, value))
    raise ConfigError(f"sweep.parameter: unknown {parameter!r}")


_ARM_KEYS = {
    "round_trip_m": ("L", lambda v: v / 2),
    "T_itm_ppm": ("T_itm", lambda v: v * PPM),
    "T_loss_ppm": ("T_loss", lambda v: v * PPM),
    "detuning_rad_s": ("delta", float),
    "M_itm_kg": ("M_itm", float),
    "M_etm_kg": ("M_etm", float),
}


def _arm_changes(section):
    return {_ARM_KEYS[k][0]: _ARM_KEYS[k][1](v) for k, v in section.items()}


def build_spec(doc) -> InterferometerSpec:
    """Turn the ``preset``/``base`` part of a config document into a spec."""
    base = doc.get("base", {})
    name = doc.get("preset")
    if name is not None:
        if name not in PRESETS:
            raise ConfigError(f"preset: unknown preset {name!r} (choose from {sorted(PRESETS)})")
        spec = PRESETS[name]()
    else:
        missing = [k for k in ("P_in_w", "wavelength_m", "arms") if k not in base]
        if missing:
            raise ConfigError(f"base: without a preset, {', '.join(missing)} must be given")
        arm = _arm_changes(base["arms"])
        needed = {"L", "T_itm", "M_itm", "M_etm"} - set(arm)
        if needed:
            raise ConfigError(f"base.arms: without a preset, fields {sorted(needed)} are required")
        try:
            spec = InterferometerSpec(
                P_in=base["P_in_w"],
                wavelength=base["wavelength_m"],
                north=ArmCavitySpec("N", **arm),
                east=ArmCavitySpec("E", **arm),
            )
        except DomainError as exc:
            raise ConfigError(f"base: {exc}") from exc

    try:
        if "P_in_w" in base:
            spec = spec.replace(P_in=float(base["P_in_w"]))
        if "wavelength_m" in base:
            spec = spec.replace(wavelength=float(base["wavelength_m"]))
        if "arms" in base:
            spec = spec.with_arms(**_arm_changes(base["arms"]))
        for key, attr in (("north", "north"), ("east", "east")):
            if key in base:
                spec = spec.replace(**{attr: dataclasses.replace(
                    getattr(spec, attr), **_arm_changes(base[key]))})
        if "bs" in base:
            bs = base["bs"]
            spec = spec.replace(bs=BeamSplitterSpec(
                eta=bs.get("eta", spec.bs.eta),
                loss=bs["loss_ppm"] * PPM if "loss_ppm" in bs else spec.bs.loss))
        if "readout" in base:
            r = base["readout"]
            spec = spec.replace(readout=HomodyneReadout(
                r.get("zeta_rad", spec.readout.zeta), r.get("eta_pd", spec.readout.eta_pd)))
        if "laser" in base:
            las = base["laser"]
            spec = spec.replace(laser=LaserNoiseSpec(
                las.get("L_c", spec.laser.L_c), las.get("L_s", spec.laser.L_s)))
        if "model" in base:
            spec = spec.replace(**base["model"])
    except DomainError as exc:
        raise ConfigError(f"base: {exc}") from exc
    return spec


def parse_config(doc) -> ScenarioConfig:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{path}: {exc.message}") from None
    spec = build_spec(doc)
    name = doc.get("preset")
    f_lo, f_hi, n = DEFAULT_GRIDS.get(name, DEFAULT_GRIDS["glasgow"])
    g = doc.get("grid", {})
    grid = Grid(g.get("f_min_hz", f_lo), g.get("f_max_hz", f_hi),
                g.get("points", n), g.get("log_spaced", True))
    sweep = None
    if "sweep" in doc:
        sweep = Sweep(doc["sweep"]["parameter"], tuple(float(v) for v in doc["sweep"]["values"]))
    return ScenarioConfig(
        base=spec,
        grid=grid,
        sweep=sweep,
        output_prefix=doc.get("output_prefix", name or "speedmeter"),
        references=tuple(doc.get("references", ())),
        zeta_opt=doc.get("zeta_opt", False),
        preset=name,
    )


def load_config(path) -> ScenarioConfig:
    """Read and validate a JSON scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(doc)


def preset_config(name) -> ScenarioConfig:
    return parse_config({"preset": name})


@dataclass
class RunResult:
    label: str
    value: float | None
    spec: InterferometerSpec
    budget: object
    path: Path | None = None
    slope: float = float("nan")


@dataclass
class ScenarioResult:
    runs: list
    references: dict = field(default_factory=dict)
    summary_path: Path | None = None


def _fmt(x):
    return "%.17g" % x


def write_csv(path, header, columns):
    rows = [",".join(header)]
    rows += [",".join(_fmt(v) for v in row) for row in zip(*columns)]
    _write_lf(path, "\n".join(rows) + "\n")


def _write_lf(path, text):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def budget_columns(budget):
    header = ["frequency_hz", "total_asd_m_rthz", "sql_asd_m_rthz"]
    header += [f"{port}_psd_m2hz" for port in budget.per_port]
    cols = [budget.frequencies, budget.asd, budget.sql_asd, *budget.per_port.values()]
    return header, cols


def _locate_failure(spec, f, zeta_kw):
    for fi in f:
        try:
            noise_budget(spec, np.array([fi]), **zeta_kw)
        except DomainError:
            return float(fi)
    return None


def _evaluate(spec, f, zeta_opt, parameter, value):
    kw = {"optimize": True} if zeta_opt else {}
    try:
        return noise_budget(spec, f, **kw)
    except DomainError as exc:
        bad = _locate_failure(spec, f, kw)
        where = f"sweep {parameter}={value}" if parameter else "base configuration"
        at = f" at f = {bad:.6g} Hz" if bad is not None else ""
        raise ScenarioError(f"{where}{at}: {exc}", parameter, value, bad) from exc


def _label(parameter, value):
    return "base" if parameter is None else f"{parameter}_{value:g}"


def run_scenario(config: ScenarioConfig, write=True) -> ScenarioResult:
    """Evaluate every sweep point and (optionally) write CSVs and the summary sidecar."""
    f = config.grid.frequencies()
    prefix = Path(config.output_prefix)
    if write:
        prefix.parent.mkdir(parents=True, exist_ok=True)

    points = [(None, None)] if config.sweep is None else \
        [(config.sweep.parameter, v) for v in config.sweep.values]
    runs = []
    for parameter, value in points:
        spec = config.base if parameter is None else apply_sweep(config.base, parameter, value)
        budget = _evaluate(spec, f, config.zeta_opt, parameter, value)
        run = RunResult(_label(parameter, value), value, spec, budget)
        run.slope = float(fit_slope(f, budget.asd))
        if write:
            run.path = prefix.parent / f"{prefix.name}_{run.label}.csv"
            write_csv(run.path, *budget_columns(budget))
        runs.append(run)

    refs = {}
    if config.references:
        try:
            curves = reference_curves(config.base, f)
        except DomainError as exc:
            raise ScenarioError(f"reference curves: {exc}") from exc
        sql = curves["sql"]
        for name in config.references:
            refs[name] = curves[name]
            if write:
                write_csv(prefix.parent / f"{prefix.name}_ref_{name}.csv",
                          ["frequency_hz", "total_asd_m_rthz", "sql_asd_m_rthz"],
                          [f, curves[name], sql])

    result = ScenarioResult(runs, refs)
    if write:
        result.summary_path = prefix.parent / f"{prefix.name}_summary.json"
        _write_lf(result.summary_path, json.dumps(summary(config, result), indent=2) + "\n")
    return result


def summary(config: ScenarioConfig, result: ScenarioResult):
    f = config.grid.frequencies()
    lo, hi = default_slope_band(f)
    return {
        "preset": config.preset,
        "grid": dataclasses.asdict(config.grid),
        "sweep_parameter": None if config.sweep is None else config.sweep.parameter,
        "zeta": "optimal" if config.zeta_opt else config.base.readout.zeta,
        "slope_band_hz": [lo, hi],
        "runs": [
            {
                "label": r.label,
                "value": r.value,
                "csv": None if r.path is None else r.path.name,
                "asd_slope_low_band": r.slope,
            }
            for r in result.runs
        ],
        "references": {name: float(fit_slope(f, curve))
                       for name, curve in result.references.items()},
    }
