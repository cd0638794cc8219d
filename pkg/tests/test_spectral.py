"""Transforms, parity bookkeeping, products and Galerkin truncation."""

import numpy as np
import pytest

from hydrolim.spectral import (
    Grid,
    Parity,
    ParityMismatchError,
    SpectralScalar,
    from_modes,
    galerkin_truncate,
    pointwise_product,
    to_physical,
    to_spectral,
    zeros,
)

from helpers import box_integral, direct_summation, random_field


class TestGrid:
    def test_validation(self):
        with pytest.raises(ValueError, match="even"):
            Grid(nh=9, nz=4)
        with pytest.raises(ValueError, match=">= 8"):
            Grid(nh=4, nz=4)
        with pytest.raises(ValueError, match=">= 4"):
            Grid(nh=8, nz=3)

    def test_wavenumbers(self, small_grid):
        kx = small_grid.kx.ravel()
        assert kx[0] == 0
        assert kx.max() == small_grid.nh // 2 - 1
        assert kx.min() == -small_grid.nh // 2
        assert small_grid.mz.ravel().tolist() == list(range(small_grid.nz + 1))

    def test_dealias_mask(self, med_grid):
        cut = med_grid.nh // 3
        assert med_grid.dealias_mask[0, 0, 0]
        assert not med_grid.dealias_mask[med_grid.nh // 2, 0, 0]  # Nyquist
        assert med_grid.dealias_mask[cut, 0, 0]
        assert not med_grid.dealias_mask[cut + 1, 0, 0]


class TestTransforms:
    def test_zero_field_round_trip(self, small_grid):
        f = zeros(small_grid, Parity.EVEN_Z)
        assert np.all(to_physical(f) == 0.0)

    def test_single_cosine_mode(self, small_grid):
        # cos(pi x) = (e^{i pi x} + e^{-i pi x}) / 2, even in z with m = 0
        f = from_modes(small_grid, Parity.EVEN_Z, {(1, 0, 0): 0.5, (-1, 0, 0): 0.5})
        X, _, _ = small_grid.meshgrid()
        assert np.allclose(to_physical(f), np.cos(np.pi * X), atol=1e-14)

    def test_direct_summation_oracle(self, small_grid, rng):
        f = random_field(rng, small_grid, Parity.EVEN_Z)
        samples = to_physical(f)
        pts = [
            (small_grid.x[i], small_grid.x[j], small_grid.z[k])
            for i, j, k in rng.integers(0, (8, 8, 10), size=(5, 3))
        ]
        expected = direct_summation(f, pts)
        got = np.array([samples[i, j, k] for i, j, k in rng2_idx(pts, small_grid)])
        assert np.max(np.abs(expected.imag)) < 1e-12
        assert np.allclose(got, expected.real, atol=1e-12)

    def test_sin_single_mode_to_spectral(self, small_grid):
        _, _, Z = small_grid.meshgrid()
        f = to_spectral(np.sin(np.pi * Z), Parity.ODD_Z, small_grid)
        expected = from_modes(small_grid, Parity.ODD_Z, {(0, 0, 1): 1.0})
        assert np.allclose(f.coeffs, expected.coeffs, atol=1e-14)

    def test_parity_mismatch_rejected(self, small_grid):
        _, _, Z = small_grid.meshgrid()
        with pytest.raises(ParityMismatchError):
            to_spectral(np.sin(np.pi * Z), Parity.EVEN_Z, small_grid)

    @pytest.mark.parametrize("parity", [Parity.EVEN_Z, Parity.ODD_Z])
    def test_round_trip(self, med_grid, rng, parity):
        f = random_field(rng, med_grid, parity)
        back = to_spectral(to_physical(f), parity, med_grid)
        scale = f.max_abs()
        assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-12 * scale

    @pytest.mark.parametrize("parity", [Parity.EVEN_Z, Parity.ODD_Z])
    def test_parseval(self, med_grid, rng, parity):
        f = random_field(rng, med_grid, parity)
        quad = box_integral(to_physical(f) ** 2)
        assert quad == pytest.approx(f.l2_norm() ** 2, rel=1e-12)

    def test_parseval_pins_normalization(self, small_grid):
        # ||cos(pi x)||^2 over (-1,1)^3 is 4 by direct integration
        f = from_modes(small_grid, Parity.EVEN_Z, {(1, 0, 0): 0.5, (-1, 0, 0): 0.5})
        assert f.l2_norm() == pytest.approx(2.0, rel=1e-14)

    def test_grid_inferred_from_samples(self, small_grid):
        _, _, Z = small_grid.meshgrid()
        f = to_spectral(np.sin(np.pi * Z), Parity.ODD_Z)
        assert f.grid.nh == small_grid.nh and f.grid.nz == small_grid.nz


def rng2_idx(points, grid):
    """Map physical points back to grid indices (points are grid nodes)."""
    xi = {v: i for i, v in enumerate(grid.x)}
    zi = {v: i for i, v in enumerate(grid.z)}
    return [(xi[x], xi[y], zi[z]) for x, y, z in points]


class TestPointwiseProduct:
    def test_zero_factor(self, small_grid, rng):
        f = zeros(small_grid, Parity.EVEN_Z)
        g = random_field(rng, small_grid, Parity.EVEN_Z)
        assert pointwise_product(f, g).max_abs() == 0.0

    def test_mixed_parity_single_modes(self, small_grid):
        f = from_modes(small_grid, Parity.EVEN_Z, {(1, 0, 0): 0.5, (-1, 0, 0): 0.5})
        g = from_modes(small_grid, Parity.ODD_Z, {(0, 0, 1): 1.0})
        h = pointwise_product(f, g)
        assert h.parity is Parity.ODD_Z
        expected = from_modes(
            small_grid, Parity.ODD_Z, {(1, 0, 1): 0.5, (-1, 0, 1): 0.5}
        )
        assert np.allclose(h.coeffs, expected.coeffs, atol=1e-14)

    def test_cos_squared(self, small_grid):
        # cos^2(pi x) = 1/2 + cos(2 pi x)/2: mean coefficient 1/2 plus kx = 2
        f = from_modes(small_grid, Parity.EVEN_Z, {(1, 0, 0): 0.5, (-1, 0, 0): 0.5})
        h = pointwise_product(f, f)
        expected = from_modes(
            small_grid,
            Parity.EVEN_Z,
            {(0, 0, 0): 0.5, (2, 0, 0): 0.25, (-2, 0, 0): 0.25},
        )
        assert np.allclose(h.coeffs, expected.coeffs, atol=1e-14)

    def test_grid_mismatch(self, small_grid, med_grid):
        f = zeros(small_grid, Parity.EVEN_Z)
        g = zeros(med_grid, Parity.EVEN_Z)
        with pytest.raises(ValueError, match="grids"):
            pointwise_product(f, g)

    def test_parity_closure_on_random_fields(self, med_grid, rng):
        even = random_field(rng, med_grid, Parity.EVEN_Z)
        odd = random_field(rng, med_grid, Parity.ODD_Z)
        assert pointwise_product(even, even).parity is Parity.EVEN_Z
        assert pointwise_product(odd, odd).parity is Parity.EVEN_Z
        assert pointwise_product(even, odd).parity is Parity.ODD_Z


class TestGalerkinTruncate:
    def test_full_band_is_identity(self, small_grid, rng):
        f = random_field(rng, small_grid, Parity.EVEN_Z)
        n = max(small_grid.nh // 2, small_grid.nz)
        assert np.array_equal(galerkin_truncate(f, n).coeffs, f.coeffs)

    def test_cutoff_kills_high_mode(self, small_grid):
        f = from_modes(small_grid, Parity.ODD_Z, {(3, 0, 1): 1.0})
        assert galerkin_truncate(f, 2).max_abs() == 0.0

    def test_nonexpansive_and_idempotent(self, med_grid, rng):
        for _ in range(100):
            f = random_field(rng, med_grid, Parity.EVEN_Z)
            jf = galerkin_truncate(f, 3)
            assert jf.l2_norm() <= f.l2_norm() * (1 + 1e-15)
            assert np.array_equal(galerkin_truncate(jf, 3).coeffs, jf.coeffs)

    def test_self_adjoint(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.EVEN_Z)
        g = random_field(rng, med_grid, Parity.EVEN_Z)
        lhs = galerkin_truncate(f, 3).inner(g)
        rhs = f.inner(galerkin_truncate(g, 3))
        assert lhs == pytest.approx(rhs, rel=1e-13, abs=1e-300)


class TestHermitianSymmetry:
    def test_random_fields_are_real(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.EVEN_Z)
        g = med_grid
        neg = (-np.arange(g.nh)) % g.nh
        mirrored = np.conj(f.coeffs[np.ix_(neg, neg)])
        assert np.max(np.abs(f.coeffs - mirrored)) < 1e-12 * f.max_abs()
        # physical samples are real: round trip through complex assembly
        samples = to_physical(f)
        assert samples.dtype == np.float64


class TestSpectralScalarInvariants:
    def test_odd_m0_rejected(self, small_grid):
        c = np.zeros(small_grid.spectral_shape, dtype=np.complex128)
        c[0, 0, 0] = 1.0
        with pytest.raises(ValueError, match="m = 0"):
            SpectralScalar(small_grid, Parity.ODD_Z, c)

    def test_coeffs_frozen(self, small_grid):
        f = zeros(small_grid, Parity.EVEN_Z)
        with pytest.raises(ValueError):
            f.coeffs[0, 0, 0] = 1.0

    def test_arithmetic(self, small_grid, rng):
        f = random_field(rng, small_grid, Parity.EVEN_Z)
        g = random_field(rng, small_grid, Parity.EVEN_Z)
        assert np.allclose((f + g).coeffs, f.coeffs + g.coeffs)
        assert np.allclose((f - g).coeffs, f.coeffs - g.coeffs)
        assert np.allclose((2.0 * f).coeffs, 2.0 * f.coeffs)
        with pytest.raises(ValueError, match="parities"):
            _ = f + random_field(rng, small_grid, Parity.ODD_Z)
