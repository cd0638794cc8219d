"""Independent oracles shared by the test modules.

Everything here deliberately avoids the library's transform path: direct
basis summation, plain numpy FFTs on the exponential basis, and physical
quadrature, so tests check the implementation against a second route.
"""

import numpy as np

from hydrolim.spectral import Grid, Parity, SpectralScalar


def direct_summation(f: SpectralScalar, points) -> np.ndarray:
    """Evaluate sum_k c_k basis_k at arbitrary (x, y, z) points by brute force."""
    g = f.grid
    kx = g.kx.ravel()
    ky = g.ky.ravel()
    m = g.mz.ravel()
    out = np.zeros(len(points), dtype=np.complex128)
    for p, (x, y, z) in enumerate(points):
        zb = np.cos(np.pi * m * z) if f.parity is Parity.EVEN_Z else np.sin(np.pi * m * z)
        total = 0j
        for i in range(g.nh):
            for j in range(g.nh):
                total += np.sum(
                    f.coeffs[i, j, :] * np.exp(1j * np.pi * (kx[i] * x + ky[j] * y)) * zb
                )
        out[p] = total
    return out


def random_field(rng, grid: Grid, parity: Parity, decay: float = 0.4) -> SpectralScalar:
    """Random Hermitian-symmetric band-limited field with a decaying envelope."""
    c = rng.standard_normal(grid.spectral_shape) + 1j * rng.standard_normal(grid.spectral_shape)
    c *= np.exp(-decay * grid.xi_abs)
    neg = (-np.arange(grid.nh)) % grid.nh
    c = 0.5 * (c + np.conj(c[np.ix_(neg, neg)]))
    c *= grid.dealias_mask
    if parity is Parity.ODD_Z:
        c[:, :, 0] = 0.0
    return SpectralScalar(grid, parity, c)


def box_integral(samples: np.ndarray) -> float:
    """Integral over the box via the trapezoid rule (exact for band-limited)."""
    return float(np.mean(samples) * 8.0)


def exp_spectrum(samples: np.ndarray) -> np.ndarray:
    """Full complex-exponential spectrum of physical samples via numpy FFT.

    Returns S with f = sum S[kx,ky,n] e^{i pi (kx x + ky y + n z)}, indices in
    FFT order over (nh, nh, nz_phys). Independent of the library transforms.
    """
    nh, _, nz_phys = samples.shape
    spec = np.fft.fftn(samples) / samples.size
    sx = 1.0 - 2.0 * (np.arange(nh) & 1)
    sz = 1.0 - 2.0 * (np.arange(nz_phys) & 1)
    return spec * sx[:, None, None] * sx[None, :, None] * sz[None, None, :]
