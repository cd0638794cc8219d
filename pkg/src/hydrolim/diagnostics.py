"""Quantitative functionals over trajectories and the thin-layer limit study.

The per-probe record tracks the low functional A = ||v||_{1/2} + ||v||_{3/2},
the high functional B = ||v||_{5/2} + ||v||_{7/2}, their running time
integrals (trapezoid over probe times), the divergence residual and pressure
norms. The convergence study runs the hydrostatic system once and the
anisotropic system per aspect ratio from data at a controlled distance, then
fits the decay rate of

    E(eps) = sup_t ||v_eps - v||_low + int_0^T ||v_eps - v||_high dt

against eps on a log-log line.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .initdata import InitSpec, make_initial, perturb_initial, random_scalar
from .lp import DEFAULT_PARTITION, DyadicPartition, besov_norm, besov_pair
from .operators import (
    PressureField,
    PressureKind,
    ans_pressure,
    d_z,
    div_h,
    grad_h,
    primitive_pressure,
)
from .spectral import Parity, SpectralScalar, VelocityState, pointwise_product
from . import solvers

__all__ = [
    "DiagnosticsRecord",
    "AprioriResult",
    "Coupling",
    "ConvergenceReport",
    "ProductLawReport",
    "record",
    "record_with_pressure",
    "apriori_check",
    "convergence_study",
    "product_law_probe",
]


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Scalar observables at one probe time."""

    t: float
    A: float
    B: float
    intB: float
    l2: float
    div_residual: float
    p_gradH_norm: float
    p_dz_norm: float
    intP: float

    def __post_init__(self) -> None:
        vals = (
            self.t,
            self.A,
            self.B,
            self.intB,
            self.l2,
            self.div_residual,
            self.p_gradH_norm,
            self.p_dz_norm,
            self.intP,
        )
        if not all(np.isfinite(v) and v >= 0 for v in vals):
            raise ValueError("diagnostics must be finite and nonnegative")

    CSV_COLUMNS = (
        "t",
        "A",
        "B",
        "intB",
        "l2",
        "div_residual",
        "p_gradH_norm",
        "p_dz_norm",
        "intP",
    )

    def csv_row(self) -> str:
        return ",".join(repr(getattr(self, c)) for c in self.CSV_COLUMNS)


def record_with_pressure(
    state: VelocityState,
    t: float,
    *,
    prev: DiagnosticsRecord | None = None,
    epsilon: float | None = None,
    partition: DyadicPartition = DEFAULT_PARTITION,
) -> tuple[DiagnosticsRecord, PressureField]:
    """Record plus the recovered pressure (hydrostatic or anisotropic path)."""
    a, b = besov_pair((state.v1, state.v2), partition)
    l2 = float(np.sqrt(state.v1.l2_norm() ** 2 + state.v2.l2_norm() ** 2))
    div_residual = (div_h(state.v1, state.v2) + d_z(state.w)).l2_norm()

    if epsilon is None:
        pressure = primitive_pressure(state)
        p_dz = 0.0
    else:
        pressure = ans_pressure(state, epsilon)
        p_dz = besov_norm(d_z(pressure.field), 0.5, partition).value
    gpx, gpy = grad_h(pressure.field)
    p_grad, _ = besov_pair((gpx, gpy), partition)

    if prev is None:
        int_b = 0.0
        int_p = 0.0
    else:
        dt = t - prev.t
        int_b = prev.intB + 0.5 * (prev.B + b) * dt
        int_p = prev.intP + 0.5 * (prev.p_gradH_norm + p_grad) * dt

    rec = DiagnosticsRecord(
        t=t,
        A=a,
        B=b,
        intB=int_b,
        l2=l2,
        div_residual=div_residual,
        p_gradH_norm=p_grad,
        p_dz_norm=p_dz,
        intP=int_p,
    )
    return rec, pressure


def record(
    state: VelocityState,
    t: float = 0.0,
    *,
    prev: DiagnosticsRecord | None = None,
    epsilon: float | None = None,
    partition: DyadicPartition = DEFAULT_PARTITION,
) -> DiagnosticsRecord:
    """Scalar observables of a state; epsilon selects the pressure path."""
    rec, _ = record_with_pressure(
        state, t, prev=prev, epsilon=epsilon, partition=partition
    )
    return rec


# -- a priori estimate shadow ---------------------------------------------------


@dataclass(frozen=True)
class AprioriResult:
    """Outcome of the boundedness check A(t) <= A(0)(1 + tol)."""

    passed: bool
    a0: float
    max_ratio: float
    first_violation: float | None
    c_eff: float
    int_b: float


def apriori_check(traj: solvers.Trajectory, alpha: float, *, tol: float = 1e-2) -> AprioriResult:
    """Check the discrete shadow of the small-data energy estimate.

    Asserts A(t) <= A(0)(1 + tol) at every probe and reports the fitted
    absorption constant c_eff = 2 (A(0) - A(T)) / intB(T); the continuous
    theory guarantees only positivity, which is what callers should assert.
    """
    recs = traj.diagnostics
    a0 = recs[0].A
    if a0 == 0.0:
        return AprioriResult(True, 0.0, 0.0, None, 0.0, recs[-1].intB)
    bound = a0 * (1.0 + tol)
    max_ratio = 0.0
    first_violation = None
    for r in recs:
        max_ratio = max(max_ratio, r.A / a0)
        if r.A > bound and first_violation is None:
            first_violation = r.t
    int_b = recs[-1].intB
    c_eff = 2.0 * (a0 - recs[-1].A) / int_b if int_b > 0 else 0.0
    return AprioriResult(
        passed=first_violation is None,
        a0=a0,
        max_ratio=max_ratio,
        first_violation=first_violation,
        c_eff=c_eff,
        int_b=int_b,
    )


# -- convergence study -----------------------------------------------------------


class Coupling(enum.Enum):
    SAME_DATA = "same_data"
    EPS_PERTURBED = "eps_perturbed"


@dataclass(frozen=True)
class ConvergenceReport:
    """Measured thin-layer-limit errors and fitted log-log slopes."""

    epsilons: list
    errors: list
    sup_part: list
    int_part: list
    p_dz: list
    slope: float
    slope_pdz: float
    w_chain: list
    coupling: str
    config_hash: str = ""

    def __post_init__(self) -> None:
        eps = np.asarray(self.epsilons)
        if len(eps) == 0 or np.any(np.diff(eps) >= 0):
            raise ValueError("epsilons must be strictly decreasing")
        if any(not e > 0 for e in self.errors):
            raise ValueError("errors must be positive")

    def to_json_dict(self) -> dict:
        return {
            "epsilons": list(self.epsilons),
            "errors": list(self.errors),
            "sup_part": list(self.sup_part),
            "int_part": list(self.int_part),
            "p_dz": list(self.p_dz),
            "slope": self.slope,
            "slope_pdz": self.slope_pdz,
            "w_chain": list(self.w_chain),
            "coupling": self.coupling,
            "config_hash": self.config_hash,
        }


def _fit_slope(eps, values) -> float:
    vals = np.asarray(values, dtype=float)
    if np.any(vals <= 0):
        return float("nan")
    return float(np.polyfit(np.log(np.asarray(eps)), np.log(vals), 1)[0])


def _difference_profile(traj_eps: solvers.Trajectory, traj_ref: solvers.Trajectory):
    """Per-probe low/high functionals of v_eps - v and the w comparison chain."""
    lows, highs = [], []
    w_lhs_max = 0.0
    w_mid_max = 0.0
    for se, sr in zip(traj_eps.states, traj_ref.states):
        d1 = se.v1 - sr.v1
        d2 = se.v2 - sr.v2
        dw = se.w - sr.w
        low, high = besov_pair((d1, d2))
        lows.append(low)
        highs.append(high)
        w_lhs_max = max(w_lhs_max, besov_norm(dw, 0.5).value)
        w_mid_max = max(w_mid_max, besov_norm(div_h(d1, d2), 0.5).value)
    return np.asarray(lows), np.asarray(highs), w_lhs_max, w_mid_max


def convergence_study(
    grid,
    init_spec: InitSpec,
    solver_cfg: solvers.SolverConfig,
    epsilons,
    coupling: Coupling = Coupling.SAME_DATA,
    *,
    probes: solvers.ProbeConfig | None = None,
    run_hook=None,
    workers: int = 1,
) -> ConvergenceReport:
    """Run the hydrostatic system once and the anisotropic system per epsilon.

    All runs share the grid, step size and probe cadence, so states line up
    at probe times. ``run_hook(label, trajectory)`` is called after each run
    (the sweep command uses it to export per-run outputs). With workers > 1
    the per-epsilon runs execute concurrently; results are assembled in
    epsilon order so the report is deterministic either way.
    """
    epsilons = [float(e) for e in epsilons]
    if len(epsilons) < 3:
        raise ValueError("need at least 3 epsilon values to fit a slope")
    if any(e2 >= e1 for e1, e2 in zip(epsilons, epsilons[1:])):
        raise ValueError("epsilons must be strictly decreasing")

    probes = probes or solvers.ProbeConfig()
    base_state = make_initial(init_spec, grid)
    alpha = init_spec.alpha

    ref = solvers.run(
        base_state,
        solvers.SystemSpec(solvers.SystemKind.PRIMITIVE),
        solver_cfg,
        probes,
        alpha_limit=alpha,
    )
    if run_hook is not None:
        run_hook("primitive", ref)

    def study_one(idx: int, eps: float):
        if coupling is Coupling.SAME_DATA:
            data = base_state
            limit = alpha
        else:
            data = perturb_initial(base_state, alpha * eps, seed=init_spec.seed + 1000 + idx)
            limit = alpha * (1.0 + eps)
        try:
            traj = solvers.run(
                data,
                solvers.SystemSpec(solvers.SystemKind.ANS, eps),
                solver_cfg,
                probes,
                alpha_limit=limit,
            )
        except solvers.DivergedError as exc:
            raise solvers.DivergedError(exc.step, exc.t, label=f"eps = {eps:g}") from exc
        if run_hook is not None:
            run_hook(f"eps_{eps:g}", traj)
        lows, highs, w_lhs, w_mid = _difference_profile(traj, ref)
        times = np.asarray(ref.times)
        sup_part = float(np.max(lows))
        int_part = float(np.trapezoid(highs, times))
        p_dz_int = float(np.trapezoid([r.p_dz_norm for r in traj.diagnostics], times))
        return sup_part, int_part, p_dz_int, {"w_diff": w_lhs, "div_diff": w_mid}

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(study_one, range(len(epsilons)), epsilons))
    else:
        results = [study_one(i, e) for i, e in enumerate(epsilons)]

    sup_parts = [r[0] for r in results]
    int_parts = [r[1] for r in results]
    p_dz_ints = [r[2] for r in results]
    w_chain = [r[3] for r in results]
    errors = [s + i for s, i in zip(sup_parts, int_parts)]

    return ConvergenceReport(
        epsilons=epsilons,
        errors=errors,
        sup_part=sup_parts,
        int_part=int_parts,
        p_dz=p_dz_ints,
        slope=_fit_slope(epsilons, errors),
        slope_pdz=_fit_slope(epsilons, p_dz_ints),
        w_chain=w_chain,
        coupling=coupling.value,
    )


# -- product law probe -----------------------------------------------------------


@dataclass(frozen=True)
class ProductLawReport:
    """Empirical product-law ratios over a random ensemble (report only)."""

    algebra_ratios: list
    bilinear_ratios: list

    @property
    def max_algebra(self) -> float:
        return max(self.algebra_ratios)

    @property
    def max_bilinear(self) -> float:
        return max(self.bilinear_ratios)


def _zero_mean_product(u: SpectralScalar, v: SpectralScalar) -> SpectralScalar:
    prod = pointwise_product(u, v)
    c = prod.coeffs.copy()
    c[0, 0, 0] = 0.0  # homogeneous norms carry no constant-mode content
    return prod._like(c)


def product_law_probe(ensemble_size: int, seed: int, grid=None) -> ProductLawReport:
    """Measure ||uv||_{3/2} / (||u||_{3/2} ||v||_{3/2}) and the 5/2 bilinear
    form ||uv||_{5/2} / (||u||_{3/2}||v||_{5/2} + ||u||_{5/2}||v||_{3/2}) over
    seeded random pairs. Constants are not asserted, only reported.
    """
    from .spectral import Grid

    if ensemble_size < 10:
        raise ValueError("ensemble_size must be >= 10")
    grid = grid or Grid(16, 8)
    rng = np.random.default_rng(seed)
    algebra, bilinear = [], []
    for _ in range(ensemble_size):
        u = random_scalar(rng, grid, Parity.EVEN_Z, decay=0.5)
        v = random_scalar(rng, grid, Parity.EVEN_Z, decay=0.5)
        uv = _zero_mean_product(u, v)
        u32 = besov_norm(u, 1.5).value
        v32 = besov_norm(v, 1.5).value
        u52 = besov_norm(u, 2.5).value
        v52 = besov_norm(v, 2.5).value
        algebra.append(besov_norm(uv, 1.5).value / (u32 * v32))
        bilinear.append(besov_norm(uv, 2.5).value / (u32 * v52 + u52 * v32))
    return ProductLawReport(algebra_ratios=algebra, bilinear_ratios=bilinear)
