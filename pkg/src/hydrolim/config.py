"""JSON run and sweep configurations.

Configs are plain JSON (human-diffable); validation errors name the offending
field. Serialization round-trips exactly, and a stable hash of the canonical
JSON identifies a configuration in exported reports.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .diagnostics import Coupling
from .initdata import InitSpec
from .solvers import Integrator, ProbeConfig, SolverConfig, SystemKind, SystemSpec
from .spectral import Grid

__all__ = ["ConfigError", "RunConfig", "SweepConfig", "load_run_config", "load_sweep_config"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the field."""


def _require(mapping, key, kind, where):
    if key not in mapping:
        raise ConfigError(f"{where}.{key} is required")
    val = mapping[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ConfigError(f"{where}.{key} must be of type {kind.__name__}")
    return val


def _optional(mapping, key, kind, where, default=None):
    if key not in mapping or mapping[key] is None:
        return default
    return _require(mapping, key, kind, where)


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs: grid, solver, data, system, probes, output."""

    grid: Grid
    solver: SolverConfig  # dt may be None: resolved by the advisory CFL at run time
    init: InitSpec
    system: SystemSpec
    probes: ProbeConfig
    output_dir: str

    def to_json_dict(self) -> dict:
        solver = {
            "dt": self.solver.dt,
            "t_final": self.solver.t_final,
            "integrator": self.solver.integrator.value,
            "dealias": self.solver.dealias,
            "galerkin_n": self.solver.galerkin_n,
            "linear_only": self.solver.linear_only,
        }
        system = {"name": self.system.kind.value}
        if self.system.epsilon is not None:
            system["epsilon"] = self.system.epsilon
        return {
            "grid": {"nh": self.grid.nh, "nz": self.grid.nz},
            "solver": solver,
            "init": {
                "kind": self.init.kind,
                "seed": self.init.seed,
                "alpha": self.init.alpha,
                "spectral_decay": self.init.spectral_decay,
            },
            "system": system,
            "probes": {
                "cadence": self.probes.cadence,
                "snapshot_every": self.probes.snapshot_every,
            },
            "output_dir": self.output_dir,
        }

    def config_hash(self) -> str:
        canon = json.dumps(self.to_json_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _parse_grid(d) -> Grid:
    nh = _require(d, "nh", int, "grid")
    nz = _require(d, "nz", int, "grid")
    try:
        return Grid(nh, nz)
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc


def _parse_solver(d) -> SolverConfig:
    integ_name = _optional(d, "integrator", str, "solver", Integrator.EXP_EULER.value)
    try:
        integrator = Integrator(integ_name)
    except ValueError:
        raise ConfigError(
            f"solver.integrator must be one of {[i.value for i in Integrator]}"
        ) from None
    try:
        return SolverConfig(
            dt=_optional(d, "dt", float, "solver"),
            t_final=_require(d, "t_final", float, "solver"),
            integrator=integrator,
            dealias=_optional(d, "dealias", bool, "solver", True),
            galerkin_n=_optional(d, "galerkin_n", int, "solver"),
            linear_only=_optional(d, "linear_only", bool, "solver", False),
        )
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from exc


def _parse_init(d) -> InitSpec:
    try:
        return InitSpec(
            kind=_optional(d, "kind", str, "init", "random"),
            seed=_optional(d, "seed", int, "init", 0),
            alpha=_optional(d, "alpha", float, "init", 0.01),
            spectral_decay=_optional(d, "spectral_decay", float, "init", 0.7),
        )
    except ValueError as exc:
        raise ConfigError(f"init: {exc}") from exc


def _parse_system(d) -> SystemSpec:
    name = _require(d, "name", str, "system")
    if name == SystemKind.PRIMITIVE.value:
        if "epsilon" in d and d["epsilon"] is not None:
            raise ConfigError("system.epsilon is only valid when system.name is 'ans'")
        return SystemSpec(SystemKind.PRIMITIVE)
    if name == SystemKind.ANS.value:
        eps = _optional(d, "epsilon", float, "system")
        if eps is None:
            raise ConfigError("system.epsilon is required when system.name is 'ans'")
        try:
            return SystemSpec(SystemKind.ANS, eps)
        except ValueError as exc:
            raise ConfigError(f"system: {exc}") from exc
    raise ConfigError("system.name must be 'primitive' or 'ans'")


def _parse_probes(d) -> ProbeConfig:
    try:
        return ProbeConfig(
            cadence=_optional(d, "cadence", int, "probes", 10),
            snapshot_every=_optional(d, "snapshot_every", int, "probes"),
        )
    except ValueError as exc:
        raise ConfigError(f"probes: {exc}") from exc


def parse_run_config(doc: dict, *, default_system: SystemSpec | None = None) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("top-level config must be a JSON object")
    grid = _parse_grid(_require(doc, "grid", dict, "config"))
    solver = _parse_solver(_require(doc, "solver", dict, "config"))
    init = _parse_init(_optional(doc, "init", dict, "config", {}))
    if "system" in doc and doc["system"] is not None:
        system = _parse_system(_require(doc, "system", dict, "config"))
    elif default_system is not None:
        system = default_system
    else:
        raise ConfigError("config.system is required")
    probes = _parse_probes(_optional(doc, "probes", dict, "config", {}))
    output_dir = _require(doc, "output_dir", str, "config")
    return RunConfig(
        grid=grid,
        solver=solver,
        init=init,
        system=system,
        probes=probes,
        output_dir=output_dir,
    )


@dataclass(frozen=True)
class SweepConfig:
    """A convergence sweep: one base run specification plus the epsilon list."""

    base: RunConfig
    epsilons: list
    coupling: Coupling
    workers: int

    def to_json_dict(self) -> dict:
        base = self.base.to_json_dict()
        base.pop("system", None)
        return {
            "base": base,
            "epsilons": list(self.epsilons),
            "coupling": self.coupling.value,
            "workers": self.workers,
        }

    def config_hash(self) -> str:
        canon = json.dumps(self.to_json_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def parse_sweep_config(doc: dict) -> SweepConfig:
    if not isinstance(doc, dict):
        raise ConfigError("top-level config must be a JSON object")
    base_doc = _require(doc, "base", dict, "sweep")
    base = parse_run_config(base_doc, default_system=SystemSpec(SystemKind.PRIMITIVE))
    eps = _require(doc, "epsilons", list, "sweep")
    if not eps or not all(isinstance(e, (int, float)) and e > 0 for e in eps):
        raise ConfigError("sweep.epsilons must be a non-empty list of positive numbers")
    eps = [float(e) for e in eps]
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ConfigError("sweep.epsilons must be strictly decreasing")
    coupling_name = _optional(doc, "coupling", str, "sweep", Coupling.SAME_DATA.value)
    try:
        coupling = Coupling(coupling_name)
    except ValueError:
        raise ConfigError(
            f"sweep.coupling must be one of {[c.value for c in Coupling]}"
        ) from None
    workers = _optional(doc, "workers", int, "sweep", 1)
    if workers < 1:
        raise ConfigError("sweep.workers must be >= 1")
    return SweepConfig(base=base, epsilons=eps, coupling=coupling, workers=workers)


def _load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def load_run_config(path) -> RunConfig:
    return parse_run_config(_load_json(path))


def load_sweep_config(path) -> SweepConfig:
    return parse_sweep_config(_load_json(path))
