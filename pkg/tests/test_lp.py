"""Dyadic partition, block localization and Besov norms."""

import numpy as np
import pytest

from hydrolim.lp import (
    DEFAULT_PARTITION,
    DyadicPartition,
    besov_norm,
    besov_pair,
    block_norms,
    dyadic_block,
)
from hydrolim.spectral import Parity, from_modes, zeros

from helpers import random_field


def cos_pix(grid):
    return from_modes(grid, Parity.EVEN_Z, {(1, 0, 0): 0.5, (-1, 0, 0): 0.5})


class TestPartitionProfile:
    def test_chi_plateaus(self):
        p = DEFAULT_PARTITION
        r = np.array([0.0, 0.5, 1.1])
        assert np.all(p.chi(r) == 1.0)
        assert np.all(p.chi(np.array([4.0 / 3.0, 2.0, 10.0])) == 0.0)
        mid = p.chi(np.linspace(1.1, 4.0 / 3.0, 50))
        assert np.all(np.diff(mid) <= 0)

    def test_phi_support_and_plateau(self):
        p = DEFAULT_PARTITION
        assert np.all(p.phi(np.array([0.0, 1.0, 1.1])) == 0.0)
        assert np.all(p.phi(np.array([8.0 / 3.0, 3.0, 100.0])) == 0.0)
        assert np.all(p.phi(np.linspace(4.0 / 3.0, 2.2, 20)) == 1.0)
        inside = np.linspace(1.15, 2.6, 50)
        assert np.all(p.phi(inside) >= 0)

    def test_telescoping_partition_of_unity(self):
        p = DEFAULT_PARTITION
        r = np.concatenate([np.logspace(-3, 3, 400), [np.pi, 1.0, 2.0**10]])
        total = np.zeros_like(r)
        for j in range(-15, 15):
            total += p.phi(r * 2.0 ** (-j))
        assert np.max(np.abs(total - 1.0)) < 1e-12

    def test_block_range_covers_lattice(self, med_grid):
        j_min, j_max = DEFAULT_PARTITION.block_range(med_grid)
        # smallest lattice frequency pi sits in block 1 only
        assert j_min == 1
        xi_max = np.pi * np.sqrt(2 * (med_grid.nh / 2) ** 2 + med_grid.nz**2)
        assert DEFAULT_PARTITION.phi(xi_max * 2.0 ** (-(j_max + 1))) == 0.0


class TestDyadicBlock:
    def test_single_frequency_single_block(self, small_grid):
        # |xi| = pi: phi(pi/2) = 1 (plateau), phi(pi) = 0, phi(pi/4) = 0
        f = cos_pix(small_grid)
        b1 = dyadic_block(f, 1)
        assert np.allclose(b1.coeffs, f.coeffs, atol=1e-15)
        assert dyadic_block(f, 0).max_abs() == 0.0
        assert dyadic_block(f, 2).max_abs() == 0.0

    def test_zero_field(self, small_grid):
        f = zeros(small_grid, Parity.ODD_Z)
        for j in range(-3, 6):
            assert dyadic_block(f, j).max_abs() == 0.0

    def test_reconstruction(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.EVEN_Z)
        c = f.coeffs.copy()
        c[0, 0, 0] = 0.0  # zero-mean
        f = f._like(c)
        j_min, j_max = DEFAULT_PARTITION.block_range(med_grid)
        total = zeros(med_grid, Parity.EVEN_Z)
        for j in range(j_min, j_max + 1):
            total = total + dyadic_block(f, j)
        assert (total - f).l2_norm() <= 1e-10 * f.l2_norm()

    def test_almost_orthogonality(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.ODD_Z)
        j_min, j_max = DEFAULT_PARTITION.block_range(med_grid)
        for j in range(j_min, j_max + 1):
            for jp in range(j_min, j_max + 1):
                if abs(j - jp) >= 3:
                    twice = dyadic_block(dyadic_block(f, j), jp)
                    assert twice.max_abs() == 0.0

    def test_parity_preserved(self, small_grid, rng):
        f = random_field(rng, small_grid, Parity.ODD_Z)
        assert dyadic_block(f, 1).parity is Parity.ODD_Z


class TestBesovNorm:
    def test_single_block_value(self, small_grid):
        # ||cos(pi x)||_{L2} = 2 on the box; block j = 1 only:
        # value = 2^{s} * 2 at s = 1/2
        rec = besov_norm(cos_pix(small_grid), 0.5)
        assert rec.value == pytest.approx(2.0 * np.sqrt(2.0), rel=1e-12)
        nonzero = [(j, c) for j, c in rec.per_block if c > 0]
        assert nonzero == [(1, pytest.approx(2.0 * np.sqrt(2.0), rel=1e-12))]

    def test_value_is_block_sum(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.ODD_Z)
        rec = besov_norm(f, 1.5)
        assert rec.value == pytest.approx(sum(c for _, c in rec.per_block), rel=1e-13)

    def test_zero_field(self, small_grid):
        for s in (0.5, 1.5, 2.5, 3.5):
            assert besov_norm(zeros(small_grid, Parity.EVEN_Z), s).value == 0.0

    def test_homogeneity(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.ODD_Z)
        for c in (0.25, 3.0, 117.0):
            assert besov_norm(c * f, 0.5).value == pytest.approx(
                c * besov_norm(f, 0.5).value, rel=1e-12
            )

    def test_nonzero_mean_rejected(self, small_grid):
        f = from_modes(small_grid, Parity.EVEN_Z, {(0, 0, 0): 1.0})
        with pytest.raises(ValueError, match="zero spatial mean"):
            besov_norm(f, 0.5)

    def test_l2_dominated_by_b0(self, med_grid, rng):
        # triangle inequality over blocks: ||f||_{L2} <= ||f||_{B^0}
        f = random_field(rng, med_grid, Parity.EVEN_Z)
        c = f.coeffs.copy()
        c[0, 0, 0] = 0.0
        f = f._like(c)
        assert f.l2_norm() <= besov_norm(f, 0.0).value * (1 + 1e-10)


class TestBesovPair:
    def test_single_block_pair(self, small_grid):
        low, high = besov_pair(cos_pix(small_grid))
        assert low == pytest.approx((2**0.5 + 2**1.5) * 2.0, rel=1e-12)
        assert high == pytest.approx((2**2.5 + 2**3.5) * 2.0, rel=1e-12)

    def test_zero_field(self, small_grid):
        assert besov_pair(zeros(small_grid, Parity.EVEN_Z)) == (0.0, 0.0)

    def test_linear_scaling(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.ODD_Z)
        low1, high1 = besov_pair(f)
        low2, high2 = besov_pair(2.5 * f)
        assert low2 == pytest.approx(2.5 * low1, rel=1e-12)
        assert high2 == pytest.approx(2.5 * high1, rel=1e-12)

    def test_vector_fields_sum_components(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.EVEN_Z)
        g = random_field(rng, med_grid, Parity.ODD_Z)
        fc = f.coeffs.copy()
        fc[0, 0, 0] = 0.0
        f = f._like(fc)
        lf, hf = besov_pair(f)
        lg, hg = besov_pair(g)
        lfg, hfg = besov_pair((f, g))
        assert lfg == pytest.approx(lf + lg, rel=1e-13)
        assert hfg == pytest.approx(hf + hg, rel=1e-13)

    def test_pair_matches_besov_norm(self, med_grid, rng):
        f = random_field(rng, med_grid, Parity.ODD_Z)
        low, high = besov_pair(f)
        assert low == pytest.approx(
            besov_norm(f, 0.5).value + besov_norm(f, 1.5).value, rel=1e-12
        )
        assert high == pytest.approx(
            besov_norm(f, 2.5).value + besov_norm(f, 3.5).value, rel=1e-12
        )


class TestBernstein:
    def test_gradient_band_on_blocks(self, med_grid, rng):
        # on a nonzero block ||grad block|| / ||block|| lies in
        # [1.1 * 2^j, (8/3) * 2^j] because phi vanishes outside that annulus
        from hydrolim.operators import grad_h, d_z

        f = random_field(rng, med_grid, Parity.EVEN_Z)
        c = f.coeffs.copy()
        c[0, 0, 0] = 0.0
        f = f._like(c)
        j_min, j_max = DEFAULT_PARTITION.block_range(med_grid)
        for j in range(j_min, j_max + 1):
            bj = dyadic_block(f, j)
            nb = bj.l2_norm()
            if nb == 0.0:
                continue
            gx, gy = grad_h(bj)
            gz = d_z(bj)
            grad_norm = np.sqrt(gx.l2_norm() ** 2 + gy.l2_norm() ** 2 + gz.l2_norm() ** 2)
            ratio = grad_norm / nb
            assert 1.1 * 2.0**j <= ratio <= (8.0 / 3.0) * 2.0**j
