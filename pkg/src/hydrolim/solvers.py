"""Time integration of the thin-layer systems as Galerkin spectral dynamics.

Both systems advance with an exponential integrating factor on the full
Laplacian, so the heat semigroup is represented exactly and linear runs are
machine-precision, plus an explicit nonlinear stage (Euler or Heun). The
hydrostatic system evolves (v1, v2), removes the pressure gradient by
projecting the barotropic part of the advection term, and re-diagnoses w
each stage. The rescaled anisotropic system evolves (v1, v2, eps*w) with the
anisotropic Leray projector applied to the advection vector, which keeps the
scaled divergence at zero up to rounding.

Runs abort with :class:`DivergedError` on the first non-finite coefficient
rather than adapting the step; sweeps stay deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    _advect_physical,
    _state_physical,
    d_z,
    div_h,
    diagnose_w,
    hydrostatic_project,
    leray_aniso,
)
from .spectral import (
    Parity,
    SpectralScalar,
    VelocityState,
    WRole,
    galerkin_truncate,
    to_physical,
)

__all__ = [
    "Integrator",
    "SystemKind",
    "SystemSpec",
    "SolverConfig",
    "ProbeConfig",
    "Trajectory",
    "DivergedError",
    "InadmissibleDataError",
    "advisory_dt",
    "step_primitive",
    "step_ans",
    "run",
]


class DivergedError(RuntimeError):
    """A run produced non-finite coefficients; names the offending step."""

    def __init__(self, step: int, t: float, label: str = ""):
        where = f" [{label}]" if label else ""
        super().__init__(f"run diverged at step {step} (t = {t:.6g}){where}")
        self.step = step
        self.t = t
        self.label = label


class InadmissibleDataError(ValueError):
    """Initial data violates a run precondition."""


class Integrator(enum.Enum):
    EXP_EULER = "exp_euler"
    EXP_RK2 = "exp_rk2"


class SystemKind(enum.Enum):
    PRIMITIVE = "primitive"
    ANS = "ans"


@dataclass(frozen=True)
class SystemSpec:
    """Which system to integrate; the anisotropic one carries its aspect ratio."""

    kind: SystemKind
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.kind is SystemKind.ANS:
            if self.epsilon is None or not self.epsilon > 0:
                raise ValueError("the anisotropic system requires epsilon > 0")
        elif self.epsilon is not None:
            raise ValueError("epsilon is only meaningful for the anisotropic system")


@dataclass(frozen=True)
class SolverConfig:
    """dt = None defers to the advisory CFL step, resolved when a run starts."""

    dt: float | None
    t_final: float
    integrator: Integrator = Integrator.EXP_EULER
    dealias: bool = True
    galerkin_n: int | None = None
    linear_only: bool = False

    def __post_init__(self) -> None:
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_final < 0:
            raise ValueError("t_final must be nonnegative")
        if (
            self.dt is not None
            and self.t_final > 0
            and self.dt > self.t_final * (1 + 1e-12)
        ):
            raise ValueError("dt must not exceed t_final")


@dataclass(frozen=True)
class ProbeConfig:
    cadence: int = 10
    snapshot_every: int | None = None

    def __post_init__(self) -> None:
        if self.cadence < 1:
            raise ValueError("probe cadence must be >= 1")


@dataclass
class Trajectory:
    """Probe-time record of a run: states, diagnostics and pressures."""

    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    pressure_series: list = field(default_factory=list)

    def validate(self) -> None:
        n = len(self.times)
        if not (len(self.states) == len(self.diagnostics) == len(self.pressure_series) == n):
            raise ValueError("trajectory record lengths differ")
        if n and self.times[0] != 0.0:
            raise ValueError("trajectories start at t = 0")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("probe times must increase")


def advisory_dt(state: VelocityState) -> float:
    """Advisory CFL step: min(1e-3, 0.25 dx / max(1, |u|_inf))."""
    umax = max(
        np.max(np.abs(to_physical(state.v1))),
        np.max(np.abs(to_physical(state.v2))),
        np.max(np.abs(to_physical(state.w))),
    )
    dx = 2.0 / state.grid.nh
    return min(1e-3, 0.25 * dx / max(1.0, float(umax)))


# -- steppers -----------------------------------------------------------------


class _PrimitiveStepper:
    """Integrating-factor stepper for the hydrostatic system."""

    def __init__(self, grid, cfg: SolverConfig):
        self.cfg = cfg
        self.heat = np.exp(-grid.xi_sq * cfg.dt)

    def _rhs(self, state: VelocityState):
        cfg = self.cfg
        if cfg.linear_only:
            return None
        phys = _state_physical(state)
        n1 = _advect_physical(phys, state.v1, dealias=cfg.dealias)
        n2 = _advect_physical(phys, state.v2, dealias=cfg.dealias)
        if cfg.galerkin_n is not None:
            n1 = galerkin_truncate(n1, cfg.galerkin_n)
            n2 = galerkin_truncate(n2, cfg.galerkin_n)
        h1, h2 = hydrostatic_project(n1, n2)
        return (-1.0 * h1, -1.0 * h2)

    def step(self, state: VelocityState) -> VelocityState:
        cfg = self.cfg
        heat = self.heat
        r = self._rhs(state)
        if r is None:
            v1 = state.v1.apply_multiplier(heat)
            v2 = state.v2.apply_multiplier(heat)
        elif cfg.integrator is Integrator.EXP_EULER:
            v1 = (state.v1 + cfg.dt * r[0]).apply_multiplier(heat)
            v2 = (state.v2 + cfg.dt * r[1]).apply_multiplier(heat)
        else:
            s1 = (state.v1 + cfg.dt * r[0]).apply_multiplier(heat)
            s2 = (state.v2 + cfg.dt * r[1]).apply_multiplier(heat)
            rs = self._rhs(VelocityState(s1, s2, diagnose_w(s1, s2)))
            half = 0.5 * cfg.dt
            v1 = state.v1.apply_multiplier(heat) + half * (
                r[0].apply_multiplier(heat) + rs[0]
            )
            v2 = state.v2.apply_multiplier(heat) + half * (
                r[1].apply_multiplier(heat) + rs[1]
            )
        return VelocityState(v1, v2, diagnose_w(v1, v2))


class _AnsStepper:
    """Integrating-factor stepper for the rescaled anisotropic system."""

    def __init__(self, grid, cfg: SolverConfig, eps: float):
        self.cfg = cfg
        self.eps = eps
        self.heat = np.exp(-grid.xi_sq * cfg.dt)

    def _rhs(self, v1, v2, w_scaled, w):
        cfg = self.cfg
        if cfg.linear_only:
            return None
        phys = (to_physical(v1), to_physical(v2), to_physical(w))
        n1 = _advect_physical(phys, v1, dealias=cfg.dealias)
        n2 = _advect_physical(phys, v2, dealias=cfg.dealias)
        n3 = _advect_physical(phys, w_scaled, dealias=cfg.dealias)
        if cfg.galerkin_n is not None:
            n1 = galerkin_truncate(n1, cfg.galerkin_n)
            n2 = galerkin_truncate(n2, cfg.galerkin_n)
            n3 = galerkin_truncate(n3, cfg.galerkin_n)
        p1, p2, p3 = leray_aniso(n1, n2, n3, self.eps)
        return (-1.0 * p1, -1.0 * p2, -1.0 * p3)

    def step(self, state: VelocityState) -> VelocityState:
        cfg = self.cfg
        heat = self.heat
        eps = self.eps
        ws = eps * state.w
        triple = (state.v1, state.v2, ws)
        r = self._rhs(state.v1, state.v2, ws, state.w)
        if r is None:
            new = [f.apply_multiplier(heat) for f in triple]
        elif cfg.integrator is Integrator.EXP_EULER:
            new = [
                (f + cfg.dt * rf).apply_multiplier(heat) for f, rf in zip(triple, r)
            ]
        else:
            stage = [
                (f + cfg.dt * rf).apply_multiplier(heat) for f, rf in zip(triple, r)
            ]
            rs = self._rhs(stage[0], stage[1], stage[2], (1.0 / eps) * stage[2])
            half = 0.5 * cfg.dt
            new = [
                f.apply_multiplier(heat) + half * (rf.apply_multiplier(heat) + rsf)
                for f, rf, rsf in zip(triple, r, rs)
            ]
        return VelocityState(
            new[0], new[1], (1.0 / eps) * new[2], WRole.EVOLVED_SCALED, eps
        )


def step_primitive(state: VelocityState, cfg: SolverConfig) -> VelocityState:
    """Advance the hydrostatic system by one step of cfg.dt."""
    if state.w_role is not WRole.DIAGNOSED:
        raise InadmissibleDataError("hydrostatic stepping needs a diagnosed w")
    return _PrimitiveStepper(state.grid, cfg).step(state)


def step_ans(state: VelocityState, eps: float, cfg: SolverConfig) -> VelocityState:
    """Advance the rescaled anisotropic system by one step of cfg.dt."""
    if state.w_role is not WRole.EVOLVED_SCALED or state.epsilon != eps:
        raise InadmissibleDataError(
            "anisotropic stepping needs a state tagged evolved-scaled with the same epsilon"
        )
    return _AnsStepper(state.grid, cfg, eps).step(state)


# -- run orchestration ---------------------------------------------------------


def _check_initial(state: VelocityState, alpha_limit: float | None) -> None:
    scale = max(1.0, state.v1.max_abs(), state.v2.max_abs())
    for f in (state.v1, state.v2):
        if abs(f.mean_coefficient) > 1e-12 * scale:
            raise InadmissibleDataError("initial horizontal velocity must have zero mean")
    resid = (div_h(state.v1, state.v2) + d_z(state.w)).l2_norm()
    if resid > 1e-8 * scale:
        raise InadmissibleDataError(
            f"initial data violates the divergence constraint (residual {resid:.3e})"
        )
    if alpha_limit is not None:
        from .lp import besov_pair

        a0, _ = besov_pair((state.v1, state.v2))
        if a0 > alpha_limit * (1 + 1e-9):
            raise InadmissibleDataError(
                f"initial data too large: functional {a0:.6g} exceeds limit {alpha_limit:.6g}"
            )


def run(
    initial: VelocityState,
    system: SystemSpec,
    cfg: SolverConfig,
    probes: ProbeConfig | None = None,
    *,
    alpha_limit: float | None = None,
    snapshot_sink=None,
) -> Trajectory:
    """Integrate to t_final, sampling diagnostics at the probe cadence.

    The pressure of the matching system is recovered at every probe.
    ``snapshot_sink(step, state)`` is invoked every ``snapshot_every`` steps
    when configured. Raises :class:`DivergedError` on non-finite states and
    :class:`InadmissibleDataError` on bad initial data.
    """
    from . import diagnostics as _diag  # local import: diagnostics drives runs too

    probes = probes or ProbeConfig()
    _check_initial(initial, alpha_limit)
    if cfg.dt is None:
        import dataclasses

        cfg = dataclasses.replace(cfg, dt=advisory_dt(initial))

    state = initial
    if cfg.galerkin_n is not None:
        v1 = galerkin_truncate(state.v1, cfg.galerkin_n)
        v2 = galerkin_truncate(state.v2, cfg.galerkin_n)
        state = VelocityState(v1, v2, diagnose_w(v1, v2))

    eps = None
    if system.kind is SystemKind.ANS:
        eps = system.epsilon
        state = state.retag(WRole.EVOLVED_SCALED, eps)
        stepper = _AnsStepper(state.grid, cfg, eps)
    else:
        state = state.retag(WRole.DIAGNOSED)
        stepper = _PrimitiveStepper(state.grid, cfg)

    n_steps = 0 if cfg.t_final == 0 else int(round(cfg.t_final / cfg.dt))
    if cfg.t_final > 0 and abs(n_steps * cfg.dt - cfg.t_final) > 1e-9 * cfg.t_final:
        n_steps = int(np.ceil(cfg.t_final / cfg.dt))

    traj = Trajectory()

    def probe(t: float, st: VelocityState) -> None:
        prev = traj.diagnostics[-1] if traj.diagnostics else None
        rec, pressure = _diag.record_with_pressure(st, t, prev=prev, epsilon=eps)
        traj.times.append(t)
        traj.states.append(st)
        traj.diagnostics.append(rec)
        traj.pressure_series.append(pressure)

    probe(0.0, state)
    if snapshot_sink is not None and probes.snapshot_every:
        snapshot_sink(0, state)

    for k in range(1, n_steps + 1):
        # blow-up is detected by the finiteness check, not by FP warnings
        with np.errstate(over="ignore", invalid="ignore"):
            state = stepper.step(state)
        if not state.is_finite() or state.v1.max_abs() > 1e100 or state.v2.max_abs() > 1e100:
            raise DivergedError(step=k, t=k * cfg.dt)
        if k == n_steps or k % probes.cadence == 0:
            probe(k * cfg.dt, state)
        if snapshot_sink is not None and probes.snapshot_every and k % probes.snapshot_every == 0:
            snapshot_sink(k, state)

    traj.validate()
    return traj
