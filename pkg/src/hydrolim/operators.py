"""Spectral differential operators, the anisotropic Leray projector,
pressure recovery and vertical-velocity diagnosis.

All operators are exact mode-wise multipliers. The vertical derivative flips
parity: d/dz maps cos(pi m z) to -pi*m*sin(pi m z) and sin(pi m z) to
+pi*m*cos(pi m z). Anisotropic variants carry the aspect ratio eps of the
thin layer: the vertical entry of every frequency vector is scaled by 1/eps.

Sign conventions (pinned by the tests): momentum form
d/dt U + N + grad p - Lap U = 0, so pressures solve Lap p = -div N and the
Helmholtz split reads leray(N) = N + grad(pressure(N)).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .spectral import (
    Parity,
    SpectralScalar,
    VelocityState,
    pointwise_product,
    to_physical,
    to_spectral,
)

__all__ = [
    "PressureKind",
    "PressureField",
    "IncompatibleDataError",
    "grad_h",
    "div_h",
    "d_z",
    "laplacian",
    "grad_eps",
    "div_eps",
    "laplacian_eps",
    "inv_neg_laplacian_eps",
    "leray_aniso",
    "diagnose_w",
    "hydrostatic_project",
    "primitive_pressure",
    "ans_pressure",
    "nonlinear_term",
    "advection",
]


class IncompatibleDataError(ValueError):
    """The barotropic divergence does not vanish: no odd periodic w exists."""


class PressureKind(Enum):
    HYDROSTATIC = "hydrostatic"  # z-independent (m = 0 only)
    FULL_3D = "full_3d"


@dataclass(frozen=True)
class PressureField:
    """Mean-free pressure, tagged hydrostatic (z-independent) or fully 3-D."""

    field: SpectralScalar
    kind: PressureKind

    def __post_init__(self) -> None:
        if self.field.parity is not Parity.EVEN_Z:
            raise ValueError("pressure must be even in z")
        if abs(self.field.coeffs[0, 0, 0]) != 0.0:
            raise ValueError("pressure gauge requires zero mean")
        if self.kind is PressureKind.HYDROSTATIC and np.any(
            self.field.coeffs[:, :, 1:] != 0
        ):
            raise ValueError("hydrostatic pressure must be z-independent")


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not eps > 0:
        raise ValueError(f"anisotropy parameter must be positive, got {eps}")
    return eps


# -- isotropic first-order operators ------------------------------------------


def grad_h(f: SpectralScalar) -> tuple[SpectralScalar, SpectralScalar]:
    g = f.grid
    return (
        f.apply_multiplier(1j * np.pi * g.kx),
        f.apply_multiplier(1j * np.pi * g.ky),
    )


def div_h(f1: SpectralScalar, f2: SpectralScalar) -> SpectralScalar:
    g = f1.grid
    return f1.apply_multiplier(1j * np.pi * g.kx) + f2.apply_multiplier(1j * np.pi * g.ky)


def d_z(f: SpectralScalar) -> SpectralScalar:
    """Vertical derivative; flips the parity tag."""
    g = f.grid
    c = f.coeffs * (np.pi * g.mz)
    if f.parity is Parity.EVEN_Z:
        return SpectralScalar(g, Parity.ODD_Z, -c)
    out = c.copy()
    out[:, :, 0] = 0.0
    return SpectralScalar(g, Parity.EVEN_Z, out)


def laplacian(f: SpectralScalar) -> SpectralScalar:
    return f.apply_multiplier(-f.grid.xi_sq)


# -- anisotropic operators -----------------------------------------------------


def grad_eps(f: SpectralScalar, eps: float):
    """(d/dx, d/dy, eps^-1 d/dz) of a scalar."""
    eps = _check_eps(eps)
    gx, gy = grad_h(f)
    return gx, gy, (1.0 / eps) * d_z(f)


def div_eps(u1: SpectralScalar, u2: SpectralScalar, u3: SpectralScalar, eps: float) -> SpectralScalar:
    """div_H(u1, u2) + eps^-1 d/dz u3."""
    eps = _check_eps(eps)
    return div_h(u1, u2) + (1.0 / eps) * d_z(u3)


def _aniso_sq(grid, eps: float) -> np.ndarray:
    return np.pi**2 * (
        grid.kx.astype(np.float64) ** 2
        + grid.ky.astype(np.float64) ** 2
        + grid.mz.astype(np.float64) ** 2 / eps**2
    )


def laplacian_eps(f: SpectralScalar, eps: float) -> SpectralScalar:
    eps = _check_eps(eps)
    return f.apply_multiplier(-_aniso_sq(f.grid, eps))


def inv_neg_laplacian_eps(f: SpectralScalar, eps: float) -> SpectralScalar:
    """Solve (-Lap_eps) p = f with zero-mode gauge p(0) = 0."""
    eps = _check_eps(eps)
    sq = _aniso_sq(f.grid, eps)
    inv = np.zeros_like(sq)
    nonzero = sq > 0
    inv[nonzero] = 1.0 / sq[nonzero]
    return f.apply_multiplier(inv)


def leray_aniso(
    u1: SpectralScalar, u2: SpectralScalar, u3: SpectralScalar, eps: float
):
    """Orthogonal L2 projection onto eps-scaled divergence-free fields.

    Identity plus grad_eps (-Lap_eps)^-1 div_eps; the zero-frequency mode maps
    to itself and div_eps of the result vanishes identically.
    """
    eps = _check_eps(eps)
    phi = inv_neg_laplacian_eps(div_eps(u1, u2, u3, eps), eps)
    gx, gy, gz = grad_eps(phi, eps)
    return u1 + gx, u2 + gy, u3 + gz


# -- vertical velocity and pressures ------------------------------------------


def diagnose_w(v1: SpectralScalar, v2: SpectralScalar, *, tol: float = 1e-10) -> SpectralScalar:
    """Recover the odd vertical velocity from div_H v + dw/dz = 0.

    w = -int_{-1}^z div_H v dz'; solvable when the z-mean (m = 0 part) of
    div_H v vanishes, which holds structurally for a divergence-free
    barotropic part. The result satisfies the divergence constraint exactly.
    """
    d = div_h(v1, v2)
    scale = max(1.0, v1.max_abs(), v2.max_abs())
    barotropic = np.max(np.abs(d.coeffs[:, :, 0]))
    if barotropic > tol * scale:
        raise IncompatibleDataError(
            "barotropic divergence does not vanish "
            f"(max |m=0 coefficient| = {barotropic:.3e}); no odd periodic "
            "antiderivative exists"
        )
    g = v1.grid
    c = np.zeros(g.spectral_shape, dtype=np.complex128)
    m = np.arange(1, g.nz + 1)
    c[:, :, 1:] = -d.coeffs[:, :, 1:] / (np.pi * m)
    return SpectralScalar(g, Parity.ODD_Z, c)


def advection(state: VelocityState, f: SpectralScalar, *, dealias: bool = True) -> SpectralScalar:
    """Dealiased pseudo-spectral u . grad f with u = (v1, v2, w)."""
    phys = _state_physical(state)
    return _advect_physical(phys, f, dealias=dealias)


def _state_physical(state: VelocityState):
    return (to_physical(state.v1), to_physical(state.v2), to_physical(state.w))


def _advect_physical(phys, f: SpectralScalar, *, dealias: bool = True) -> SpectralScalar:
    v1p, v2p, wp = phys
    gx, gy = grad_h(f)
    gz = d_z(f)
    samples = v1p * to_physical(gx) + v2p * to_physical(gy) + wp * to_physical(gz)
    out = to_spectral(samples, f.parity, f.grid, check_parity=False)
    if dealias:
        out = out.apply_multiplier(f.grid.dealias_mask)
    return out


def nonlinear_term(state: VelocityState, f: SpectralScalar) -> SpectralScalar:
    """Advection of a scalar by the velocity state (v . grad_H f + w df/dz)."""
    if f.grid.nh != state.grid.nh or f.grid.nz != state.grid.nz:
        raise ValueError("state and field live on different grids")
    return advection(state, f)


def hydrostatic_project(n1: SpectralScalar, n2: SpectralScalar):
    """Remove the hydrostatic pressure gradient from a horizontal vector.

    Applies the 2-D Leray projector to the barotropic (z-mean) part and
    leaves the baroclinic part untouched; equals N + grad_H p with p the
    explicit z-integrated pressure. Preserves the horizontal mean.
    """
    g = n1.grid
    kx = g.kx[:, :, 0].astype(np.float64)
    ky = g.ky[:, :, 0].astype(np.float64)
    ksq = kx**2 + ky**2
    inv = np.zeros_like(ksq)
    inv[ksq > 0] = 1.0 / ksq[ksq > 0]
    dot = (kx * n1.coeffs[:, :, 0] + ky * n2.coeffs[:, :, 0]) * inv
    c1 = n1.coeffs.copy()
    c2 = n2.coeffs.copy()
    c1[:, :, 0] -= kx * dot
    c2[:, :, 0] -= ky * dot
    return n1._like(c1), n2._like(c2)


def primitive_pressure(state: VelocityState) -> PressureField:
    """Hydrostatic pressure of the thin-layer limit system.

    z-independent solution of 2 Lap_H p = -int_{-1}^{1} div_H(u . grad v) dz,
    gauged to zero horizontal mean. In coefficients the z-integral extracts
    the m = 0 plane (with weight 2), so no quadrature is involved.
    """
    n1 = advection(state, state.v1)
    n2 = advection(state, state.v2)
    d = div_h(n1, n2)
    g = state.grid
    kx = g.kx[:, :, 0].astype(np.float64)
    ky = g.ky[:, :, 0].astype(np.float64)
    ksq = np.pi**2 * (kx**2 + ky**2)
    c = np.zeros(g.spectral_shape, dtype=np.complex128)
    nonzero = ksq > 0
    c[:, :, 0][nonzero] = d.coeffs[:, :, 0][nonzero] / ksq[nonzero]
    return PressureField(SpectralScalar(g, Parity.EVEN_Z, c), PressureKind.HYDROSTATIC)


def ans_pressure(state: VelocityState, eps: float) -> PressureField:
    """Pressure of the rescaled anisotropic system: Lap_eps p = -div_eps N.

    N = (u . grad v1, u . grad v2, u . grad(eps w)); the zero mode is gauged
    to zero. Satisfies leray(N) = N + grad_eps p (Helmholtz consistency).
    """
    eps = _check_eps(eps)
    phys = _state_physical(state)
    n1 = _advect_physical(phys, state.v1)
    n2 = _advect_physical(phys, state.v2)
    n3 = _advect_physical(phys, eps * state.w)
    p = inv_neg_laplacian_eps(div_eps(n1, n2, n3, eps), eps)
    return PressureField(p, PressureKind.FULL_3D)
