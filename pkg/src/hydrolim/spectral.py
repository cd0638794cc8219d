"""Parity-aware spectral fields on the periodic box (-1, 1)^3.

Real scalar fields are stored as complex coefficients over horizontal
wavenumbers pi*(kx, ky) (FFT index ordering, kx, ky in {-nh/2, ..., nh/2-1})
and a half-range vertical basis: cos(pi*m*z) for fields even in z,
sin(pi*m*z) for fields odd in z, m in {0..nz} resp. {1..nz}. Parity is part
of the type, so the symmetry constraints of the thin-layer systems hold by
construction instead of by runtime bookkeeping.

Normalization convention (pinned by the Parseval test): coefficients are the
amplitudes in

    f(x, y, z) = sum_{kx,ky,m} c[kx, ky, m] * exp(i*pi*(kx*x + ky*y)) * b_m(z)

with b_m(z) = cos(pi*m*z) or sin(pi*m*z), so that a pure basis mode has
coefficient exactly 1. The L2 norm uses the true measure of the box (volume
8): ||f||^2 = sum |c|^2 * w_m with w_m = 8 for the m = 0 cosine and 4 for
every other mode.

The physical collocation grid has nh points per horizontal direction and
2*(nz + 1) vertical points, so sine and cosine modes up to m = nz are both
exactly representable and transforms round-trip at machine precision on
band-limited data.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np
from scipy import fft as _sfft

__all__ = [
    "Parity",
    "Grid",
    "SpectralScalar",
    "VelocityState",
    "WRole",
    "ParityMismatchError",
    "fft_workers",
    "to_physical",
    "to_spectral",
    "pointwise_product",
    "galerkin_truncate",
    "zeros",
    "from_modes",
]


class ParityMismatchError(ValueError):
    """Samples do not have the vertical symmetry they were declared with."""


def fft_workers() -> int:
    """Worker count for FFT kernels; capped by the HYDROLIM_THREADS env var."""
    try:
        return max(1, int(os.environ.get("HYDROLIM_THREADS", "1")))
    except ValueError:
        return 1


class Parity(enum.Enum):
    """Vertical symmetry tag: even (cosine series) or odd (sine series)."""

    EVEN_Z = "even"
    ODD_Z = "odd"

    def flipped(self) -> "Parity":
        return Parity.ODD_Z if self is Parity.EVEN_Z else Parity.EVEN_Z


@dataclass(frozen=True)
class Grid:
    """Spectral resolution: nh x nh horizontal modes, vertical modes 0..nz.

    Precomputes wavenumber meshes, the squared frequency modulus
    |xi|^2 = pi^2 (kx^2 + ky^2 + m^2), L2 weights, the 2/3-rule dealiasing
    mask and the phase fold that maps FFT output to the box (-1, 1)^3.
    """

    nh: int
    nz: int

    def __post_init__(self) -> None:
        if self.nh % 2 != 0 or self.nh < 8:
            raise ValueError(f"nh must be even and >= 8, got {self.nh}")
        if self.nz < 4:
            raise ValueError(f"nz must be >= 4, got {self.nz}")
        nh, nz = self.nh, self.nz
        nz_phys = 2 * (nz + 1)

        kh = np.fft.fftfreq(nh, d=1.0 / nh).astype(np.int64)
        m = np.arange(nz + 1, dtype=np.int64)
        kx = kh[:, None, None]
        ky = kh[None, :, None]
        mz = m[None, None, :]

        xi_sq = np.pi**2 * (kx**2 + ky**2 + mz**2).astype(np.float64)
        weights = np.full((1, 1, nz + 1), 4.0)
        weights[0, 0, 0] = 8.0

        kh_cut = nh // 3
        mz_cut = nz_phys // 3
        dealias = (
            (np.abs(kx) <= kh_cut) & (np.abs(ky) <= kh_cut) & (mz <= mz_cut)
        )

        # exp(i*pi*k*x_l) = (-1)^k exp(2i*pi*k*l/N) on x_l = -1 + 2l/N;
        # the (-1)^k fold equals (-1)^l on the FFT index for even N.
        sign_h = 1.0 - 2.0 * (np.arange(nh) & 1)
        sign_z = 1.0 - 2.0 * (np.arange(nz_phys) & 1)
        phase = sign_h[:, None, None] * sign_h[None, :, None] * sign_z[None, None, :]

        object.__setattr__(self, "nz_phys", nz_phys)
        object.__setattr__(self, "spectral_shape", (nh, nh, nz + 1))
        object.__setattr__(self, "physical_shape", (nh, nh, nz_phys))
        object.__setattr__(self, "kx", kx)
        object.__setattr__(self, "ky", ky)
        object.__setattr__(self, "mz", mz)
        object.__setattr__(self, "xi_sq", xi_sq)
        object.__setattr__(self, "xi_abs", np.sqrt(xi_sq))
        object.__setattr__(self, "l2_weights", weights)
        object.__setattr__(self, "dealias_mask", dealias)
        object.__setattr__(self, "phase", phase)
        # FFT z-indices of the modes -1..-nz, aligned with m = 1..nz.
        object.__setattr__(self, "neg_z_idx", nz_phys - np.arange(1, nz + 1))
        object.__setattr__(self, "x", -1.0 + 2.0 * np.arange(nh) / nh)
        object.__setattr__(self, "z", -1.0 + 2.0 * np.arange(nz_phys) / nz_phys)

    def meshgrid(self):
        """Physical coordinates X, Y, Z shaped like physical samples."""
        return np.meshgrid(self.x, self.x, self.z, indexing="ij")


@dataclass(frozen=True)
class SpectralScalar:
    """A real scalar field as parity-tagged spectral coefficients.

    The coefficient array is adopted and frozen (made read-only); operations
    return new instances. Odd fields must have an exactly zero m = 0 slice.
    """

    grid: Grid
    parity: Parity
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != self.grid.spectral_shape:
            raise ValueError(
                f"coefficient shape {c.shape} does not match grid shape "
                f"{self.grid.spectral_shape}"
            )
        if not c.flags.c_contiguous:
            c = np.ascontiguousarray(c)
        if self.parity is Parity.ODD_Z and np.any(c[:, :, 0] != 0):
            raise ValueError("odd fields must have no m = 0 coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- arithmetic ---------------------------------------------------------

    def _like(self, coeffs: np.ndarray, parity: Parity | None = None) -> "SpectralScalar":
        return SpectralScalar(self.grid, parity or self.parity, coeffs)

    def _check_compatible(self, other: "SpectralScalar") -> None:
        if self.grid is not other.grid and (
            self.grid.nh != other.grid.nh or self.grid.nz != other.grid.nz
        ):
            raise ValueError("fields live on different grids")
        if self.parity is not other.parity:
            raise ValueError("fields have different parities")

    def __add__(self, other: "SpectralScalar") -> "SpectralScalar":
        self._check_compatible(other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralScalar") -> "SpectralScalar":
        self._check_compatible(other)
        return self._like(self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "SpectralScalar":
        return self._like(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralScalar":
        return self._like(-self.coeffs)

    def apply_multiplier(self, mult: np.ndarray, parity: Parity | None = None) -> "SpectralScalar":
        """Mode-wise multiplier; optionally retag parity (for d/dz-like maps)."""
        return self._like(self.coeffs * mult, parity)

    # -- scalar observables --------------------------------------------------

    def l2_norm(self) -> float:
        """L2 norm over the box (-1,1)^3 with the true measure (volume 8)."""
        return float(
            np.sqrt(np.sum((self.coeffs.real**2 + self.coeffs.imag**2) * self.grid.l2_weights))
        )

    def inner(self, other: "SpectralScalar") -> float:
        """L2 inner product over the box; parities may differ (then it is 0)."""
        if self.parity is not other.parity:
            return 0.0
        return float(
            np.sum((np.conj(self.coeffs) * other.coeffs).real * self.grid.l2_weights)
        )

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    @property
    def mean_coefficient(self) -> complex:
        """Coefficient of the constant mode (always 0 for odd fields)."""
        if self.parity is Parity.ODD_Z:
            return 0j
        return complex(self.coeffs[0, 0, 0])

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs)))


class WRole(enum.Enum):
    """How the vertical velocity is maintained during a run."""

    DIAGNOSED = "diagnosed"
    EVOLVED_SCALED = "evolved_scaled"


@dataclass(frozen=True)
class VelocityState:
    """Velocity triple: horizontal pair (even in z) plus vertical (odd in z).

    ``w`` always stores the physical (unscaled) vertical component; for the
    rescaled anisotropic system the evolved unknown is eps*w, recorded via
    ``w_role`` and ``epsilon``.
    """

    v1: SpectralScalar
    v2: SpectralScalar
    w: SpectralScalar
    w_role: WRole = WRole.DIAGNOSED
    epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.v1.parity is not Parity.EVEN_Z or self.v2.parity is not Parity.EVEN_Z:
            raise ValueError("horizontal components must be even in z")
        if self.w.parity is not Parity.ODD_Z:
            raise ValueError("vertical component must be odd in z")
        g = self.v1.grid
        for f in (self.v2, self.w):
            if f.grid.nh != g.nh or f.grid.nz != g.nz:
                raise ValueError("velocity components live on different grids")
        if self.w_role is WRole.EVOLVED_SCALED:
            if self.epsilon is None or not self.epsilon > 0:
                raise ValueError("evolved-scaled states need epsilon > 0")
        elif self.epsilon is not None:
            raise ValueError("diagnosed states must not carry epsilon")

    @property
    def grid(self) -> Grid:
        return self.v1.grid

    def with_fields(self, v1: SpectralScalar, v2: SpectralScalar, w: SpectralScalar) -> "VelocityState":
        return VelocityState(v1, v2, w, self.w_role, self.epsilon)

    def retag(self, w_role: WRole, epsilon: float | None = None) -> "VelocityState":
        return VelocityState(self.v1, self.v2, self.w, w_role, epsilon)

    def is_finite(self) -> bool:
        return self.v1.is_finite() and self.v2.is_finite() and self.w.is_finite()


# -- constructors -------------------------------------------------------------


def zeros(grid: Grid, parity: Parity) -> SpectralScalar:
    return SpectralScalar(grid, parity, np.zeros(grid.spectral_shape, dtype=np.complex128))


def from_modes(grid: Grid, parity: Parity, modes: dict) -> SpectralScalar:
    """Build a field from {(kx, ky, m): coefficient}; kx, ky may be negative."""
    c = np.zeros(grid.spectral_shape, dtype=np.complex128)
    for (kx, ky, m), val in modes.items():
        if not (-grid.nh // 2 <= kx < grid.nh // 2) or not (-grid.nh // 2 <= ky < grid.nh // 2):
            raise ValueError(f"horizontal mode ({kx}, {ky}) outside the grid")
        if not (0 <= m <= grid.nz):
            raise ValueError(f"vertical mode {m} outside the grid")
        c[kx % grid.nh, ky % grid.nh, m] = val
    return SpectralScalar(grid, parity, c)


# -- transforms ---------------------------------------------------------------


def to_physical(f: SpectralScalar) -> np.ndarray:
    """Collocation samples of the field on the uniform physical grid.

    Exact (to rounding) for band-limited data. The imaginary residue of the
    inverse transform is dropped; it is ~1e-16 for Hermitian coefficients.
    """
    g = f.grid
    nz = g.nz
    c = f.coeffs
    spec = np.zeros(g.physical_shape, dtype=np.complex128)
    if f.parity is Parity.EVEN_Z:
        spec[:, :, 0] = c[:, :, 0]
        spec[:, :, 1 : nz + 1] = 0.5 * c[:, :, 1:]
        spec[:, :, g.neg_z_idx] = 0.5 * c[:, :, 1:]
    else:
        spec[:, :, 1 : nz + 1] = -0.5j * c[:, :, 1:]
        spec[:, :, g.neg_z_idx] = 0.5j * c[:, :, 1:]
    spec *= g.phase
    return _sfft.ifftn(spec, norm="forward", workers=fft_workers()).real


def to_spectral(
    samples: np.ndarray,
    parity: Parity,
    grid: Grid | None = None,
    *,
    check_parity: bool = True,
    parity_tol: float = 1e-8,
) -> SpectralScalar:
    """Inverse of :func:`to_physical` on band-limited data.

    Content of the declared parity is extracted (the opposite-parity part is
    projected out); if ``check_parity`` is set and the discarded part exceeds
    ``parity_tol`` relative to the kept part, a :class:`ParityMismatchError`
    is raised. The vertical Nyquist plane is out of band and ignored.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if grid is None:
        nh, _, nz_phys = samples.shape
        grid = Grid(nh, nz_phys // 2 - 1)
    if samples.shape != grid.physical_shape:
        raise ValueError(
            f"sample shape {samples.shape} does not match grid shape {grid.physical_shape}"
        )
    nz = grid.nz
    spec = _sfft.fftn(samples, norm="forward", workers=fft_workers())
    spec *= grid.phase
    pos = spec[:, :, 1 : nz + 1]
    neg = spec[:, :, grid.neg_z_idx]
    cos_part = pos + neg
    sin_part = 1j * (pos - neg)

    c = np.zeros(grid.spectral_shape, dtype=np.complex128)
    if parity is Parity.EVEN_Z:
        c[:, :, 0] = spec[:, :, 0]
        c[:, :, 1:] = cos_part
        kept_sq = np.sum(np.abs(c) ** 2 * grid.l2_weights)
        lost_sq = 4.0 * np.sum(np.abs(sin_part) ** 2)
    else:
        c[:, :, 1:] = sin_part
        kept_sq = np.sum(np.abs(c) ** 2 * grid.l2_weights)
        lost_sq = 4.0 * np.sum(np.abs(cos_part) ** 2) + 8.0 * np.sum(
            np.abs(spec[:, :, 0]) ** 2
        )
    if check_parity and lost_sq > parity_tol**2 * max(kept_sq, 1e-300):
        raise ParityMismatchError(
            f"samples are not {parity.value} in z "
            f"(opposite-parity energy fraction {np.sqrt(lost_sq / max(kept_sq, 1e-300)):.3e})"
        )
    return SpectralScalar(grid, parity, c)


def pointwise_product(
    f: SpectralScalar, g: SpectralScalar, *, dealias: bool = True
) -> SpectralScalar:
    """Spectral coefficients of f*g, dealiased by 2/3-rule truncation.

    Output parity follows the product rule (even*even = odd*odd = even,
    mixed = odd). Retained coefficients are exact when both inputs lie inside
    the dealiasing band.
    """
    if f.grid.nh != g.grid.nh or f.grid.nz != g.grid.nz:
        raise ValueError("fields live on different grids")
    parity = Parity.EVEN_Z if f.parity is g.parity else Parity.ODD_Z
    prod = to_physical(f) * to_physical(g)
    h = to_spectral(prod, parity, f.grid, check_parity=False)
    if dealias:
        h = h.apply_multiplier(f.grid.dealias_mask)
    return h


def galerkin_truncate(f: SpectralScalar, n: int) -> SpectralScalar:
    """Zero every coefficient with |kx|, |ky| or m exceeding n.

    An orthogonal projector on L2: idempotent, self-adjoint, nonexpansive.
    """
    if n < 1:
        raise ValueError("truncation order must be >= 1")
    g = f.grid
    mask = (np.abs(g.kx) <= n) & (np.abs(g.ky) <= n) & (g.mz <= n)
    return f.apply_multiplier(mask)
