"""Run configuration: JSON file + ``--set key=value`` overrides.

A config is a single JSON object. Flag overrides use dotted paths into it
(``--set params.V0=3.62053``); values are parsed as JSON literals with a
fallback to plain strings. When ``params.xi`` is absent or null it is derived
as omega * sqrt(Gamma^2 + gamma^2) and the resolved value is echoed into the
output metadata together with the ratio-check result.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidConfig, InvalidGrid, SingularCoupling
from .evolver import EvolveSettings
from .grid import DEFAULT_M, DEFAULT_N, Grid, make_grid
from .params import RATIO_RTOL, PhysicalParams, required_drive_ratio

DEFAULT_SEED = 20240817

_PARAM_FIELDS = ("gamma", "Gamma", "g", "g12", "V0", "Nt", "omega", "xi")


@dataclass(frozen=True)
class SweepSpec:
    """One sweep axis over a PhysicalParams field."""

    axis: str
    start: float
    stop: float
    count: int
    Gamma_values: tuple[float, ...] = ()  # extra curves for region sweeps

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration for one CLI invocation."""

    params: PhysicalParams
    grid: Grid
    evolve: EvolveSettings
    sweep: SweepSpec | None
    output_dir: str
    plot: bool
    seed: int
    mu_override: float | None
    snapshot_every: int
    initial_profile: str | None
    xi_was_derived: bool

    def ratio_check(self) -> dict:
        required = required_drive_ratio(self.params)
        actual = self.params.xi / self.params.omega
        tol = RATIO_RTOL * max(1.0, required)
        return {
            "required": required,
            "actual": actual,
            "ok": abs(actual - required) <= tol,
        }

    def echo(self) -> dict:
        """Resolved-config dictionary written next to every command's output."""
        out = {
            "params": {f: getattr(self.params, f) for f in _PARAM_FIELDS},
            "xi_was_derived": self.xi_was_derived,
            "drive_ratio_check": self.ratio_check(),
            "grid": {"M": self.grid.M, "N": self.grid.N},
            "evolve": {
                "mode": self.evolve.mode,
                "dt": self.evolve.dt,
                "T": self.evolve.T,
                "sample_stride": self.evolve.sample_stride,
                "stroboscopic": self.evolve.stroboscopic,
            },
            "output_dir": self.output_dir,
            "plot": self.plot,
            "seed": self.seed,
            "mu_override": self.mu_override,
            "snapshot_every": self.snapshot_every,
            "initial_profile": self.initial_profile,
        }
        if self.sweep is not None:
            out["sweep"] = {
                "axis": self.sweep.axis,
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "count": self.sweep.count,
                "Gamma_values": list(self.sweep.Gamma_values),
            }
        return out


def _parse_set(item: str) -> tuple[str, object]:
    if "=" not in item:
        raise InvalidConfig(f"--set expects key=value, got {item!r}")
    key, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def apply_overrides(doc: dict, sets: list[str]) -> dict:
    """Apply dotted-path overrides onto a config dictionary (flags win)."""
    doc = copy.deepcopy(doc)
    for item in sets:
        key, value = _parse_set(item)
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise InvalidConfig(f"--set path {key!r} crosses a non-object value")
        node[parts[-1]] = value
    return doc


def load_config(path: str | Path, sets: list[str] | None = None) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InvalidConfig(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidConfig("config root must be a JSON object")
    return apply_overrides(doc, sets or [])


def _require_number(section: dict, name: str, where: str) -> float:
    if name not in section or section[name] is None:
        raise InvalidConfig(f"missing required key {where}.{name}")
    value = section[name]
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise InvalidConfig(f"{where}.{name} must be a number, got {value!r}")
    return float(value)


def resolve_config(doc: dict) -> RunConfig:
    """Validate a config dictionary and build the typed RunConfig."""
    if "params" not in doc or not isinstance(doc["params"], dict):
        raise InvalidConfig("config must contain a 'params' object")
    praw = doc["params"]
    unknown = set(praw) - set(_PARAM_FIELDS)
    if unknown:
        raise InvalidConfig(f"unknown params keys: {sorted(unknown)}")
    values = {f: _require_number(praw, f, "params") for f in _PARAM_FIELDS if f != "xi"}

    xi_was_derived = praw.get("xi") is None
    try:
        if xi_was_derived:
            probe = PhysicalParams(xi=0.0, **values)
            values["xi"] = probe.omega * required_drive_ratio(probe)
        else:
            values["xi"] = _require_number(praw, "xi", "params")
        params = PhysicalParams(**values)
    except (ValueError, SingularCoupling) as exc:
        raise InvalidConfig(f"invalid params: {exc}") from exc

    graw = doc.get("grid", {})
    try:
        grid = make_grid(int(graw.get("M", DEFAULT_M)), int(graw.get("N", DEFAULT_N)))
    except (TypeError, ValueError, InvalidGrid) as exc:
        raise InvalidConfig(f"invalid grid: {exc}") from exc

    eraw = doc.get("evolve", {})
    snapshot_every = int(eraw.get("snapshot_every", 0))
    initial_profile = eraw.get("initial_profile")
    try:
        evolve_settings = EvolveSettings(
            mode=eraw.get("mode", "rwa"),
            dt=eraw.get("dt"),
            T=float(eraw.get("T", 10.0)),
            sample_stride=int(eraw.get("sample_stride", 100)),
            stroboscopic=bool(eraw.get("stroboscopic", True)),
            keep_fields=snapshot_every > 0,
        ).validated(params)
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(f"invalid evolve settings: {exc}") from exc

    sweep = None
    if "sweep" in doc and doc["sweep"] is not None:
        sraw = doc["sweep"]
        axis = sraw.get("axis")
        if axis not in _PARAM_FIELDS:
            raise InvalidConfig(f"sweep.axis must name a params field, got {axis!r}")
        count = int(sraw.get("count", 0))
        if count < 2:
            raise InvalidConfig(f"sweep.count must be >= 2, got {count}")
        sweep = SweepSpec(
            axis=axis,
            start=_require_number(sraw, "start", "sweep"),
            stop=_require_number(sraw, "stop", "sweep"),
            count=count,
            Gamma_values=tuple(float(v) for v in sraw.get("Gamma_values", [])),
        )

    mu_override = doc.get("mu_override")
    if mu_override is not None:
        mu_override = float(mu_override)

    return RunConfig(
        params=params,
        grid=grid,
        evolve=evolve_settings,
        sweep=sweep,
        output_dir=str(doc.get("output_dir", "socbloch_out")),
        plot=bool(doc.get("plot", True)),
        seed=int(doc.get("seed", DEFAULT_SEED)),
        mu_override=mu_override,
        snapshot_every=snapshot_every,
        initial_profile=initial_profile,
        xi_was_derived=xi_was_derived,
    )
