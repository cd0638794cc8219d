"""Self-contained invariant battery behind the `check` CLI command.

Each check measures a residual against its documented tolerance and reports
pass/fail; the Littlewood-Paley checks accept an injected partition so a
broken profile is caught by the reconstruction and gradient-band checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .initdata import InitSpec, make_initial, random_scalar
from .lp import DEFAULT_PARTITION, besov_pair, dyadic_block
from .operators import (
    _advect_physical,
    _state_physical,
    advection,
    ans_pressure,
    d_z,
    div_eps,
    div_h,
    grad_eps,
    grad_h,
    hydrostatic_project,
    laplacian,
    laplacian_eps,
    leray_aniso,
    primitive_pressure,
)
from .snapshot import read_snapshot, write_snapshot
from .solvers import ProbeConfig, SolverConfig, SystemKind, SystemSpec, run
from .spectral import (
    Grid,
    Parity,
    from_modes,
    to_physical,
    to_spectral,
    zeros,
)

__all__ = ["CheckResult", "run_all_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""


def _vel_fields(rng, grid):
    return (
        random_scalar(rng, grid, Parity.EVEN_Z, decay=0.4),
        random_scalar(rng, grid, Parity.EVEN_Z, decay=0.4),
        random_scalar(rng, grid, Parity.ODD_Z, decay=0.4),
    )


def check_transform_round_trip(grid, rng, partition) -> CheckResult:
    worst = 0.0
    for parity in (Parity.EVEN_Z, Parity.ODD_Z):
        f = random_scalar(rng, grid, parity, decay=0.4)
        back = to_spectral(to_physical(f), parity, grid)
        worst = max(worst, np.max(np.abs(back.coeffs - f.coeffs)) / f.max_abs())
    return CheckResult("transform round trip", worst <= 1e-12, worst, 1e-12)


def check_parseval(grid, rng, partition) -> CheckResult:
    f = random_scalar(rng, grid, Parity.EVEN_Z, decay=0.4)
    quad = float(np.mean(to_physical(f) ** 2) * 8.0)
    rel = abs(quad - f.l2_norm() ** 2) / quad
    return CheckResult("Parseval identity", rel <= 1e-12, rel, 1e-12)


def check_partition_telescoping(grid, rng, partition) -> CheckResult:
    r = np.logspace(-3, 3, 500)
    total = np.zeros_like(r)
    for j in range(-15, 16):
        total += partition.phi(r * 2.0 ** (-j))
    worst = float(np.max(np.abs(total - 1.0)))
    return CheckResult("partition telescopes to 1", worst <= 1e-12, worst, 1e-12)


def check_lp_reconstruction(grid, rng, partition) -> CheckResult:
    f = random_scalar(rng, grid, Parity.EVEN_Z, decay=0.4)
    j_min, j_max = partition.block_range(grid)
    total = zeros(grid, Parity.EVEN_Z)
    for j in range(j_min, j_max + 1):
        total = total + dyadic_block(f, j, partition)
    rel = (total - f).l2_norm() / f.l2_norm()
    return CheckResult("block-sum reconstruction", rel <= 1e-10, rel, 1e-10)


def check_lp_almost_orthogonality(grid, rng, partition) -> CheckResult:
    f = random_scalar(rng, grid, Parity.ODD_Z, decay=0.4)
    j_min, j_max = partition.block_range(grid)
    worst = 0.0
    for j in range(j_min, j_max + 1):
        for jp in range(j_min, j_max + 1):
            if abs(j - jp) >= 3:
                worst = max(
                    worst, dyadic_block(dyadic_block(f, j, partition), jp, partition).max_abs()
                )
    return CheckResult("blocks |j-j'|>=3 annihilate", worst == 0.0, worst, 0.0)


def check_bernstein_band(grid, rng, partition) -> CheckResult:
    f = random_scalar(rng, grid, Parity.EVEN_Z, decay=0.4)
    j_min, j_max = partition.block_range(grid)
    worst = 0.0
    for j in range(j_min, j_max + 1):
        bj = dyadic_block(f, j, partition)
        nb = bj.l2_norm()
        if nb == 0.0:
            continue
        gx, gy = grad_h(bj)
        gz = d_z(bj)
        ratio = np.sqrt(gx.l2_norm() ** 2 + gy.l2_norm() ** 2 + gz.l2_norm() ** 2) / nb
        lo, hi = 1.1 * 2.0**j, (8.0 / 3.0) * 2.0**j
        violation = max(0.0, (lo - ratio) / lo, (ratio - hi) / hi)
        worst = max(worst, violation)
    return CheckResult(
        "gradient band on blocks", worst == 0.0, worst, 0.0,
        "relative excursion outside [1.1*2^j, (8/3)*2^j]",
    )


def check_poincare_odd(grid, rng, partition) -> CheckResult:
    worst = 0.0
    for _ in range(100):
        f = random_scalar(rng, grid, Parity.ODD_Z, decay=0.3)
        ratio = f.l2_norm() / d_z(f).l2_norm()
        worst = max(worst, ratio)
    return CheckResult(
        "odd-field vertical Poincare", worst <= 1.0 / np.pi * (1 + 1e-13), worst,
        1.0 / np.pi, "measured sup ||f|| / ||df/dz|| (bounds 1/pi and 2)",
    )


def check_leray_projector(grid, rng, partition) -> CheckResult:
    worst = 0.0
    for eps in (1.0, 0.1, 0.01):
        for _ in range(4):
            u = _vel_fields(rng, grid)
            p = leray_aniso(*u, eps)
            pp = leray_aniso(*p, eps)
            scale = max(f.max_abs() for f in p) or 1.0
            worst = max(worst, max(np.max(np.abs(a.coeffs - b.coeffs)) for a, b in zip(p, pp)) / scale)
            dscale = max(f.max_abs() for f in u) / eps
            worst = max(worst, div_eps(*p, eps).max_abs() / dscale)
            nin = np.sqrt(sum(f.l2_norm() ** 2 for f in u))
            nout = np.sqrt(sum(f.l2_norm() ** 2 for f in p))
            worst = max(worst, (nout - nin) / nin)
    return CheckResult(
        "anisotropic projector laws", worst <= 1e-12, worst, 1e-12,
        "idempotence, div_eps annihilation, nonexpansiveness",
    )


def check_leray_single_mode(grid, rng, partition) -> CheckResult:
    u1 = from_modes(grid, Parity.EVEN_Z, {(1, 0, 1): 0.5, (-1, 0, 1): 0.5})
    p1, p2, p3 = leray_aniso(u1, zeros(grid, Parity.EVEN_Z), zeros(grid, Parity.ODD_Z), 1.0)
    # expected: (cos cos, 0, 0) -> (cos cos / 2, 0, sin sin / 2), the
    # coefficient form of the mode map (1, 0, 0) -> (1/2, 0, -1/2)
    e1 = from_modes(grid, Parity.EVEN_Z, {(1, 0, 1): 0.25, (-1, 0, 1): 0.25})
    e3 = from_modes(grid, Parity.ODD_Z, {(1, 0, 1): -0.25j, (-1, 0, 1): 0.25j})
    worst = max(
        np.max(np.abs(p1.coeffs - e1.coeffs)),
        np.max(np.abs(p2.coeffs)),
        np.max(np.abs(p3.coeffs - e3.coeffs)),
    )
    return CheckResult("projector single-mode value", worst <= 1e-14, float(worst), 1e-14)


def check_pressure_equivalence(grid, rng, partition) -> CheckResult:
    worst = 0.0
    for seed in range(20):
        state = make_initial(InitSpec(kind="random", seed=seed, alpha=0.5), grid)
        phys = _state_physical(state)
        n1 = _advect_physical(phys, state.v1)
        n2 = _advect_physical(phys, state.v2)
        p = primitive_pressure(state)
        gpx, gpy = grad_h(p.field)
        h1, h2 = hydrostatic_project(n1, n2)
        scale = max(n1.max_abs(), n2.max_abs(), 1e-30)
        worst = max(
            worst,
            np.max(np.abs(h1.coeffs - (n1 + gpx).coeffs)) / scale,
            np.max(np.abs(h2.coeffs - (n2 + gpy).coeffs)) / scale,
        )
    return CheckResult(
        "pressure path equivalence", worst <= 1e-10, worst, 1e-10,
        "explicit formula vs barotropic projection",
    )


def check_pressure_analytic(grid, rng, partition) -> CheckResult:
    v1 = from_modes(grid, Parity.EVEN_Z, {(0, 1, 1): -0.5j, (0, -1, 1): 0.5j})
    v2 = from_modes(grid, Parity.EVEN_Z, {(1, 0, 1): -0.5j, (-1, 0, 1): 0.5j})
    from .operators import diagnose_w
    from .spectral import VelocityState

    state = VelocityState(v1, v2, diagnose_w(v1, v2))
    p = primitive_pressure(state)
    expected = from_modes(
        grid, Parity.EVEN_Z,
        {(1, 1, 0): 0.125, (1, -1, 0): 0.125, (-1, 1, 0): 0.125, (-1, -1, 0): 0.125},
    )
    worst = float(np.max(np.abs(p.field.coeffs - expected.coeffs)))
    return CheckResult(
        "analytic pressure value", worst <= 1e-12, worst, 1e-12,
        "vortex pair gives cos(pi x) cos(pi y) / 2",
    )


def check_helmholtz_consistency(grid, rng, partition) -> CheckResult:
    state = make_initial(InitSpec(kind="random", seed=8, alpha=0.5), grid)
    worst = 0.0
    for eps in (1.0, 0.2):
        phys = _state_physical(state)
        n = (
            _advect_physical(phys, state.v1),
            _advect_physical(phys, state.v2),
            _advect_physical(phys, eps * state.w),
        )
        p = ans_pressure(state, eps)
        q = leray_aniso(*n, eps)
        g = grad_eps(p.field, eps)
        scale = max(f.max_abs() for f in n) / eps
        worst = max(
            worst,
            max(
                np.max(np.abs((nc + gc).coeffs - qc.coeffs))
                for nc, gc, qc in zip(n, g, q)
            )
            / scale,
        )
    return CheckResult(
        "Helmholtz consistency", worst <= 1e-10, worst, 1e-10,
        "leray(N) = N + grad_eps(pressure)",
    )


def check_heat_kernel(grid, rng, partition) -> CheckResult:
    v1 = from_modes(grid, Parity.EVEN_Z, {(0, 1, 1): -0.5j, (0, -1, 1): 0.5j})
    from .operators import diagnose_w
    from .spectral import VelocityState

    state = VelocityState(v1, zeros(grid, Parity.EVEN_Z), diagnose_w(v1, zeros(grid, Parity.EVEN_Z)))
    cfg = SolverConfig(dt=1e-3, t_final=1.0, linear_only=True)
    traj = run(state, SystemSpec(SystemKind.PRIMITIVE), cfg, ProbeConfig(cadence=1000))
    final = traj.states[-1]
    exact = v1.apply_multiplier(np.exp(-grid.xi_sq * 1.0))
    rel = np.max(np.abs(final.v1.coeffs - exact.coeffs)) / exact.max_abs()
    return CheckResult("heat kernel exactness", rel <= 1e-12, rel, 1e-12)


def check_operator_composition(grid, rng, partition) -> CheckResult:
    f = random_scalar(rng, grid, Parity.EVEN_Z, decay=0.4)
    gx, gy = grad_h(f)
    r1 = ((div_h(gx, gy) + d_z(d_z(f))) - laplacian(f)).max_abs() / laplacian(f).max_abs()
    ex, ey, ez = grad_eps(f, 0.3)
    r2 = (div_eps(ex, ey, ez, 0.3) - laplacian_eps(f, 0.3)).max_abs() / laplacian_eps(f, 0.3).max_abs()
    worst = max(r1, r2)
    return CheckResult("operator compositions", worst <= 1e-12, worst, 1e-12)


def check_skew_symmetry(grid, rng, partition) -> CheckResult:
    state = make_initial(InitSpec(kind="random", seed=12, alpha=0.5), grid)
    f = random_scalar(rng, grid, Parity.EVEN_Z, decay=0.4)
    adv = advection(state, f, dealias=False)
    integral = float(np.mean(to_physical(adv) * to_physical(f)) * 8.0)
    scale = f.l2_norm() ** 2
    rel = abs(integral) / scale
    return CheckResult(
        "advection skew-symmetry", rel <= 1e-10, rel, 1e-10,
        "int (u . grad f) f dX = 0",
    )


def check_conservation(grid, rng, partition) -> CheckResult:
    state = make_initial(InitSpec(kind="random", seed=4, alpha=0.02), grid)
    cfg = SolverConfig(dt=1e-3, t_final=0.05)
    worst = 0.0
    for system in (SystemSpec(SystemKind.PRIMITIVE), SystemSpec(SystemKind.ANS, 0.1)):
        traj = run(state, system, cfg, ProbeConfig(cadence=10))
        last = traj.states[-1]
        worst = max(worst, abs(last.v1.mean_coefficient) / (1e-13 * len(traj.times) * 10))
        worst = max(worst, max(r.div_residual for r in traj.diagnostics) / 1e-8)
        if last.v1.parity is not Parity.EVEN_Z or last.w.parity is not Parity.ODD_Z:
            worst = np.inf
    return CheckResult(
        "mean/parity/divergence conservation", worst <= 1.0, worst, 1.0,
        "worst ratio against per-invariant budgets",
    )


def check_snapshot_round_trip(grid, rng, partition) -> CheckResult:
    import tempfile
    from pathlib import Path

    f = random_scalar(rng, grid, Parity.ODD_Z, decay=0.4)
    with tempfile.TemporaryDirectory() as td:
        path = Path(td) / "field.peqs"
        write_snapshot(path, f)
        back = read_snapshot(path)
    worst = float(np.max(np.abs(back.coeffs - f.coeffs)))
    return CheckResult("snapshot round trip", worst == 0.0, worst, 0.0)


_ALL_CHECKS = [
    check_transform_round_trip,
    check_parseval,
    check_partition_telescoping,
    check_lp_reconstruction,
    check_lp_almost_orthogonality,
    check_bernstein_band,
    check_poincare_odd,
    check_leray_projector,
    check_leray_single_mode,
    check_pressure_equivalence,
    check_pressure_analytic,
    check_helmholtz_consistency,
    check_heat_kernel,
    check_operator_composition,
    check_skew_symmetry,
    check_conservation,
    check_snapshot_round_trip,
]


def run_all_checks(grid: Grid | None = None, *, seed: int = 0, partition=None) -> list[CheckResult]:
    """Run the whole battery; a custom partition feeds the LP checks."""
    grid = grid or Grid(16, 8)
    partition = partition or DEFAULT_PARTITION
    results = []
    for fn in _ALL_CHECKS:
        rng = np.random.default_rng(seed)
        results.append(fn(grid, rng, partition))
    return results
