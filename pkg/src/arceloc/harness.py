"""Scenario files, Monte Carlo RMSE sweeps and CSV output.

Scenario files are YAML with the unit in every field name. The config keeps
the file units verbatim (so a dump/load round trip is exact); SI values are
exposed through properties.
"""
from __future__ import annotations

import csv
import dataclasses
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .arce import arce_estimate
from .baselines import roce_estimate, u_tdoa_estimate
from .crlb import fisher_information, rcrlb
from .geometry import SPEED_OF_LIGHT, BeamCone, SensorNetwork, in_beam, place_target
from .measurement import (
    SnrScenario,
    build_linear_model,
    db_to_linear,
    noise_model_for,
    simulate_delays,
)

logger = logging.getLogger(__name__)

ESTIMATORS = ("arce", "u_tdoa", "roce")
SWEEP_KINDS = ("snr", "elevation", "pointing")
CSV_HEADER = ("sweep_value", "estimator", "rmse_m", "rcrlb_m", "trials", "failures")

BUNDLED_DIR = Path(__file__).parent / "scenarios"


class ConfigError(ValueError):
    """Invalid or unreadable scenario file."""


@dataclass(frozen=True)
class ScenarioConfig:
    receivers_km: tuple
    beamwidth_deg: tuple  # (azimuth, elevation) half-beamwidths
    bandwidth_hz: float
    snr0_db: tuple
    loss_factors_db: tuple
    nominal_point_km: tuple
    target_range_km: float
    target_azimuth_deg: float
    target_elevation_deg: float
    trials: int
    seed: int
    sweep_kind: str = "snr"
    estimators: tuple = ESTIMATORS
    epsilon: float = 1e-9
    boresight_deg: float = 0.0
    elevation_sweep_deg: tuple = ()
    pointing_sweep_deg: tuple = ()
    range_bin_halfwidth_m: float | None = None
    delays_s: tuple | None = None
    name: str = ""

    # SI views
    @property
    def network(self) -> SensorNetwork:
        return SensorNetwork(np.asarray(self.receivers_km, dtype=float) * 1e3)

    @property
    def beam(self) -> BeamCone:
        return BeamCone.from_degrees(*self.beamwidth_deg, self.boresight_deg)

    @property
    def nominal_point_m(self) -> np.ndarray:
        return np.asarray(self.nominal_point_km, dtype=float) * 1e3

    @property
    def loss_factors(self) -> np.ndarray:
        return db_to_linear(self.loss_factors_db)

    @property
    def target_m(self) -> np.ndarray:
        return place_target(
            self.target_range_km * 1e3,
            np.deg2rad(self.target_azimuth_deg),
            np.deg2rad(self.target_elevation_deg),
        )

    @property
    def range_halfwidth(self) -> float:
        if self.range_bin_halfwidth_m is not None:
            return float(self.range_bin_halfwidth_m)
        return SPEED_OF_LIGHT / (4.0 * self.bandwidth_hz)

    def snr_scenario(self, snr0_db: float) -> SnrScenario:
        return SnrScenario(float(db_to_linear(snr0_db)), self.nominal_point_m, self.loss_factors)

    def replace(self, **changes) -> "ScenarioConfig":
        cfg = dataclasses.replace(self, **changes)
        validate(cfg)
        return cfg


_REQUIRED = (
    "receivers_km", "beamwidth_deg", "bandwidth_hz", "snr0_db", "loss_factors_db",
    "nominal_point_km", "target", "trials", "seed",
)


def _floats(value, name, length=None):
    try:
        out = tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"field '{name}': expected a list of numbers, got {value!r}") from None
    if length is not None and len(out) != length:
        raise ConfigError(f"field '{name}': expected {length} values, got {len(out)}")
    return out


def _number(value, name):
    if isinstance(value, bool):
        raise ConfigError(f"field '{name}': expected a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"field '{name}': expected a number, got {value!r}") from None


def _integer(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field '{name}': expected an integer, got {value!r}")
    return value


def config_from_dict(data: dict, name: str = "") -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("scenario file must contain a mapping at the top level")
    missing = [k for k in _REQUIRED if k not in data]
    if missing:
        raise ConfigError(f"missing required field(s): {', '.join(missing)}")
    known = set(_REQUIRED) | {
        "sweep_kind", "estimators", "epsilon", "boresight_deg", "elevation_sweep_deg",
        "pointing_sweep_deg", "range_bin_halfwidth_m", "delays_s", "name",
    }
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")

    receivers = data["receivers_km"]
    if not isinstance(receivers, list) or not receivers:
        raise ConfigError("field 'receivers_km': expected a list of [x, y, z] triples")
    receivers = tuple(_floats(r, f"receivers_km[{i}]", 3) for i, r in enumerate(receivers))
    target = data["target"]
    if not isinstance(target, dict):
        raise ConfigError("field 'target': expected a mapping with range_km, azimuth_deg, elevation_deg")
    for k in ("range_km", "azimuth_deg", "elevation_deg"):
        if k not in target:
            raise ConfigError(f"field 'target.{k}' is missing")
    estimators = data.get("estimators", list(ESTIMATORS))
    if isinstance(estimators, str) or not isinstance(estimators, list):
        raise ConfigError("field 'estimators': expected a list")
    rb = data.get("range_bin_halfwidth_m")
    delays = data.get("delays_s")
    snr = data["snr0_db"]
    if not isinstance(snr, list):
        snr = [snr]
    cfg = ScenarioConfig(
        receivers_km=receivers,
        beamwidth_deg=_floats(data["beamwidth_deg"], "beamwidth_deg", 2),
        bandwidth_hz=_number(data["bandwidth_hz"], "bandwidth_hz"),
        snr0_db=_floats(snr, "snr0_db"),
        loss_factors_db=_floats(data["loss_factors_db"], "loss_factors_db"),
        nominal_point_km=_floats(data["nominal_point_km"], "nominal_point_km", 3),
        target_range_km=_number(target["range_km"], "target.range_km"),
        target_azimuth_deg=_number(target["azimuth_deg"], "target.azimuth_deg"),
        target_elevation_deg=_number(target["elevation_deg"], "target.elevation_deg"),
        trials=_integer(data["trials"], "trials"),
        seed=_integer(data["seed"], "seed"),
        sweep_kind=str(data.get("sweep_kind", "snr")),
        estimators=tuple(str(e) for e in estimators),
        epsilon=_number(data.get("epsilon", 1e-9), "epsilon"),
        boresight_deg=_number(data.get("boresight_deg", 0.0), "boresight_deg"),
        elevation_sweep_deg=_floats(data.get("elevation_sweep_deg", []), "elevation_sweep_deg"),
        pointing_sweep_deg=_floats(data.get("pointing_sweep_deg", []), "pointing_sweep_deg"),
        range_bin_halfwidth_m=None if rb is None else _number(rb, "range_bin_halfwidth_m"),
        delays_s=None if delays is None else _floats(delays, "delays_s"),
        name=str(data.get("name", name)),
    )
    validate(cfg)
    return cfg


def validate(cfg: ScenarioConfig) -> None:
    """Raise :class:`ConfigError` naming the first violated invariant."""
    if cfg.trials < 1:
        raise ConfigError(f"field 'trials' must be >= 1, got {cfg.trials}")
    if not cfg.estimators:
        raise ConfigError("field 'estimators' must not be empty")
    bad = [e for e in cfg.estimators if e not in ESTIMATORS]
    if bad:
        raise ConfigError(f"field 'estimators': unknown estimator(s) {bad}; choose from {list(ESTIMATORS)}")
    if cfg.sweep_kind not in SWEEP_KINDS:
        raise ConfigError(f"field 'sweep_kind' must be one of {list(SWEEP_KINDS)}, got {cfg.sweep_kind!r}")
    if not cfg.bandwidth_hz > 0:
        raise ConfigError("field 'bandwidth_hz' must be positive")
    if not cfg.epsilon > 0:
        raise ConfigError("field 'epsilon' must be positive")
    if not cfg.target_range_km > 0:
        raise ConfigError("field 'target.range_km' must be positive")
    if not cfg.snr0_db:
        raise ConfigError("field 'snr0_db' must not be empty")
    if any(math.isnan(s) for s in cfg.snr0_db):
        raise ConfigError("field 'snr0_db' contains NaN")
    if len(cfg.loss_factors_db) != len(cfg.receivers_km) + 1:
        raise ConfigError(
            f"field 'loss_factors_db' needs {len(cfg.receivers_km) + 1} entries "
            f"(monostatic + one per receiver), got {len(cfg.loss_factors_db)}"
        )
    if any(l < 0 for l in cfg.loss_factors_db):
        raise ConfigError("field 'loss_factors_db': losses must be >= 0 dB")
    if cfg.range_bin_halfwidth_m is not None and cfg.range_bin_halfwidth_m < 0:
        raise ConfigError("field 'range_bin_halfwidth_m' must be >= 0")
    try:
        cfg.network
    except ValueError as exc:
        raise ConfigError(f"field 'receivers_km': {exc}") from None
    try:
        beam = cfg.beam
    except ValueError as exc:
        raise ConfigError(f"field 'beamwidth_deg': {exc}") from None
    if cfg.sweep_kind == "elevation" and not cfg.elevation_sweep_deg:
        raise ConfigError("field 'elevation_sweep_deg' is required for sweep_kind 'elevation'")
    if cfg.sweep_kind == "pointing" and not cfg.pointing_sweep_deg:
        raise ConfigError("field 'pointing_sweep_deg' is required for sweep_kind 'pointing'")
    if cfg.sweep_kind != "snr" and len(cfg.snr0_db) != 1:
        raise ConfigError(f"field 'snr0_db' must hold a single value for sweep_kind {cfg.sweep_kind!r}")
    if cfg.delays_s is not None and len(cfg.delays_s) != len(cfg.receivers_km) + 1:
        raise ConfigError(f"field 'delays_s' needs {len(cfg.receivers_km) + 1} entries")
    for value, target, pt_beam in _targets(cfg, beam):
        if not in_beam(target, pt_beam, tol=1e-9 * np.linalg.norm(target)):
            raise ConfigError(f"target at sweep value {value:g} lies outside the beam cone")


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"{path}: parse error{where}: {getattr(exc, 'problem', exc)}") from None
    try:
        return config_from_dict(data, name=path.stem)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def config_to_dict(cfg: ScenarioConfig) -> dict:
    out = {
        "name": cfg.name,
        "receivers_km": [list(r) for r in cfg.receivers_km],
        "beamwidth_deg": list(cfg.beamwidth_deg),
        "boresight_deg": cfg.boresight_deg,
        "bandwidth_hz": cfg.bandwidth_hz,
        "snr0_db": list(cfg.snr0_db),
        "loss_factors_db": list(cfg.loss_factors_db),
        "nominal_point_km": list(cfg.nominal_point_km),
        "target": {
            "range_km": cfg.target_range_km,
            "azimuth_deg": cfg.target_azimuth_deg,
            "elevation_deg": cfg.target_elevation_deg,
        },
        "trials": cfg.trials,
        "seed": cfg.seed,
        "sweep_kind": cfg.sweep_kind,
        "estimators": list(cfg.estimators),
        "epsilon": cfg.epsilon,
    }
    if cfg.elevation_sweep_deg:
        out["elevation_sweep_deg"] = list(cfg.elevation_sweep_deg)
    if cfg.pointing_sweep_deg:
        out["pointing_sweep_deg"] = list(cfg.pointing_sweep_deg)
    if cfg.range_bin_halfwidth_m is not None:
        out["range_bin_halfwidth_m"] = cfg.range_bin_halfwidth_m
    if cfg.delays_s is not None:
        out["delays_s"] = list(cfg.delays_s)
    return out


def dump_scenario(cfg: ScenarioConfig, path=None) -> str:
    text = yaml.safe_dump(config_to_dict(cfg), sort_keys=False, default_flow_style=None)
    if path is not None:
        Path(path).write_text(text)
    return text


def bundled_scenario(name: str) -> Path:
    return BUNDLED_DIR / f"{name}.scenario"


# --------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class RmseRecord:
    sweep_value: float
    estimator: str
    rmse: float
    rcrlb: float
    trials: int
    failures: int = 0


@dataclass(frozen=True)
class SweepPoint:
    value: float
    target: np.ndarray
    beam: BeamCone
    snr0_db: float


def _targets(cfg: ScenarioConfig, beam: BeamCone):
    r = cfg.target_range_km * 1e3
    az, el = np.deg2rad(cfg.target_azimuth_deg), np.deg2rad(cfg.target_elevation_deg)
    if cfg.sweep_kind == "snr":
        yield 0.0, place_target(r, az, el), beam
    elif cfg.sweep_kind == "elevation":
        for e in cfg.elevation_sweep_deg:
            yield e, place_target(r, az, np.deg2rad(e)), beam
    else:
        for a in cfg.pointing_sweep_deg:
            rot = BeamCone(beam.theta_bar, beam.phi_bar, np.deg2rad(a))
            # target stays at the same offset from the rotated boresight
            yield a, place_target(r, az + rot.boresight_azimuth, el), rot


def sweep_points(cfg: ScenarioConfig) -> list:
    beam = cfg.beam
    if cfg.sweep_kind == "snr":
        _, target, _ = next(_targets(cfg, beam))
        return [SweepPoint(s, target, beam, s) for s in cfg.snr0_db]
    return [SweepPoint(v, t, b, cfg.snr0_db[0]) for v, t, b in _targets(cfg, beam)]


def trial_rng(seed: int, point_index: int, trial_index: int) -> np.random.Generator:
    """Generator for one trial; independent of execution order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point_index, trial_index)))


def _run_estimator(name, delays, cfg, beam, network, range_bin):
    if name == "arce":
        return arce_estimate(delays, network, beam, range_bin, cfg.epsilon).position
    model = build_linear_model(delays, network, range_bin)
    if name == "roce":
        return roce_estimate(model, cfg.epsilon).position
    return u_tdoa_estimate(model).position


def point_rcrlb(cfg: ScenarioConfig, point: SweepPoint, network=None) -> float:
    network = network or cfg.network
    nm = noise_model_for(cfg.snr_scenario(point.snr0_db), point.target, network, cfg.bandwidth_hz)
    if np.all(nm.per_link_sigma == 0):
        return 0.0
    return rcrlb(fisher_information(point.target, network, nm.per_link_sigma))


def simulate_point(cfg: ScenarioConfig, point_index: int, point: SweepPoint, network=None):
    """Yield ``(trial_index, DelaySet)`` for every trial of one sweep point."""
    network = network or cfg.network
    nm = noise_model_for(cfg.snr_scenario(point.snr0_db), point.target, network, cfg.bandwidth_hz)
    for t in range(cfg.trials):
        yield t, simulate_delays(point.target, network, nm, trial_rng(cfg.seed, point_index, t))


def run_monte_carlo(cfg: ScenarioConfig, points=None) -> list:
    """RMSE of every configured estimator at every sweep point.

    All estimators see the same noisy delays in a given trial. Trials where
    an estimator raises are counted in ``failures`` and left out of its RMSE.
    """
    network = cfg.network
    points = sweep_points(cfg) if points is None else points
    records = []
    for k, point in enumerate(points):
        sq = {e: [] for e in cfg.estimators}
        failures = dict.fromkeys(cfg.estimators, 0)
        for _, delays in simulate_point(cfg, k, point, network):
            b0 = SPEED_OF_LIGHT * delays.delays[0] / 2.0
            range_bin = (b0 - cfg.range_halfwidth, b0 + cfg.range_halfwidth)
            for name in cfg.estimators:
                try:
                    est = _run_estimator(name, delays, cfg, point.beam, network, range_bin)
                except (np.linalg.LinAlgError, ValueError) as exc:
                    logger.warning("%s failed at sweep value %g: %s", name, point.value, exc)
                    failures[name] += 1
                    continue
                err = est - point.target
                sq[name].append(float(err @ err))
        bound = point_rcrlb(cfg, point, network)
        for name in cfg.estimators:
            rmse = math.sqrt(math.fsum(sq[name]) / len(sq[name])) if sq[name] else math.nan
            records.append(RmseRecord(float(point.value), name, rmse, bound, cfg.trials, failures[name]))
    return records


def sweep_pointing(cfg: ScenarioConfig) -> list:
    """Monte Carlo over boresight azimuths with the target kept on the beam axis offset."""
    if cfg.sweep_kind != "pointing":
        raise ConfigError("sweep_pointing requires sweep_kind 'pointing'")
    return run_monte_carlo(cfg)


def crlb_curve(cfg: ScenarioConfig) -> list:
    """``(sweep_value, rcrlb_m)`` pairs for the configured sweep."""
    network = cfg.network
    return [(float(p.value), point_rcrlb(cfg, p, network)) for p in sweep_points(cfg)]


# --------------------------------------------------------------------------
# CSV


def _fmt(v) -> str:
    return f"{float(v):.17e}"


def emit_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow([_fmt(r.sweep_value), r.estimator, _fmt(r.rmse), _fmt(r.rcrlb), r.trials, r.failures])


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header")
    return [
        RmseRecord(float(r[0]), r[1], float(r[2]), float(r[3]), int(r[4]), int(r[5]))
        for r in rows[1:]
    ]


def emit_plot_data(records, directory) -> list:
    """One two-column ``sweep_value rmse_m`` file per estimator (plus ``crlb``)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    series = {}
    bound = {}
    for r in records:
        series.setdefault(r.estimator, []).append((r.sweep_value, r.rmse))
        bound[r.sweep_value] = r.rcrlb
    series["crlb"] = sorted(bound.items())
    for name, rows in series.items():
        path = directory / f"{name}.dat"
        path.write_text("".join(f"{_fmt(x)} {_fmt(y)}\n" for x, y in rows))
        written.append(path)
    return written


def emit_crlb_csv(curve, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("sweep_value", "rcrlb_m"))
        for v, b in curve:
            w.writerow([_fmt(v), _fmt(b)])


def emit_delays_csv(cfg: ScenarioConfig, path) -> None:
    """Raw simulated delays and their standard deviations, one row per trial."""
    n = len(cfg.receivers_km) + 1
    network = cfg.network
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["sweep_value", "trial"] + [f"tau_{i}_s" for i in range(n)] + [f"sigma_{i}_s" for i in range(n)]
        )
        for k, point in enumerate(sweep_points(cfg)):
            for t, d in simulate_point(cfg, k, point, network):
                w.writerow([_fmt(point.value), t] + [_fmt(v) for v in d.delays] + [_fmt(v) for v in d.sigmas])
