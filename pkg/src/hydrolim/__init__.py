"""Pseudo-spectral solver and Besov diagnostics for thin-layer fluid systems.

Simulates the primitive (hydrostatic) equations and the rescaled anisotropic
Navier-Stokes system on the periodic box (-1, 1)^3 and measures the
dyadic-block functionals that control them, including the thin-layer limit
convergence study.
"""

from .diagnostics import (
    ConvergenceReport,
    Coupling,
    DiagnosticsRecord,
    apriori_check,
    convergence_study,
    product_law_probe,
    record,
)
from .initdata import InitSpec, make_initial, perturb_initial
from .lp import (
    DEFAULT_PARTITION,
    BesovNormRecord,
    DyadicPartition,
    besov_norm,
    besov_pair,
    dyadic_block,
)
from .operators import (
    PressureField,
    PressureKind,
    ans_pressure,
    d_z,
    diagnose_w,
    div_eps,
    div_h,
    grad_eps,
    grad_h,
    laplacian,
    laplacian_eps,
    leray_aniso,
    nonlinear_term,
    primitive_pressure,
)
from .snapshot import read_snapshot, write_snapshot
from .solvers import (
    DivergedError,
    Integrator,
    ProbeConfig,
    SolverConfig,
    SystemKind,
    SystemSpec,
    Trajectory,
    advisory_dt,
    run,
    step_ans,
    step_primitive,
)
from .spectral import (
    Grid,
    Parity,
    ParityMismatchError,
    SpectralScalar,
    VelocityState,
    WRole,
    from_modes,
    galerkin_truncate,
    pointwise_product,
    to_physical,
    to_spectral,
    zeros,
)

__version__ = "0.1.0"
