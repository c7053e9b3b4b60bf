import math

import numpy as np
import pytest

from meanchi.densities import (
    ExcursionSpec,
    curvature_density_aniso,
    curvature_density_iso,
    flag_density_qk,
    lambda_weights,
    mc_total_flag_mass,
    volume_density,
)
from meanchi.grassmann import Flag, Subspace, sample_flag
from meanchi.models import CovarianceModel
from meanchi.special import beta_const, gaussian_tail, hermite


def iso_spec(d=2, sigma2=1.0, ell=1.0, alpha=0.0):
    return ExcursionSpec(CovarianceModel.isotropic(d, sigma2, ell), alpha)


def iso_closed_form(d, k, sigma2, lam, alpha):
    sigma = math.sqrt(sigma2)
    return (
        (2 * math.pi) ** ((k - d - 1) / 2.0)
        / beta_const(d, k)
        * sigma ** (k - d)
        * lam ** ((d - k) / 2.0)
        * math.exp(-(alpha**2) / (2 * sigma2))
        * hermite(d - 1 - k, alpha / sigma)
    )


class TestFlagDensity:
    def test_constant_under_isotropy(self):
        spec = iso_spec(3, 1.3, 0.8, alpha=0.6)
        lam = 1.3 / 0.64
        rng = np.random.default_rng(0)
        for k in range(3):
            expected = iso_closed_form(3, k, 1.3, lam, 0.6)
            for _ in range(5):
                flag = sample_flag(rng, 3, 2 - k)
                assert flag_density_qk(spec, k, flag) == pytest.approx(
                    expected, rel=1e-10
                )

    def test_parity_zero_at_median(self):
        # k* odd and alpha = 0 kills the Hermite factor
        spec = iso_spec(3, alpha=0.0)
        rng = np.random.default_rng(1)
        flag = sample_flag(rng, 3, 1)  # k = 1, k* = 1
        assert flag_density_qk(spec, 1, flag) == 0.0

    def test_top_order_profile(self):
        # k = d-1: trivial subspace, density proportional to (u^T L^-1 u)^(-(d+1)/2)
        model = CovarianceModel.anisotropic(1.0, np.diag([1.0, 4.0]))
        spec = ExcursionSpec(model, 0.5)
        lam_inv = np.linalg.inv(model.lambda_matrix())
        triv = Subspace(np.empty((2, 0)))
        vals, quads = [], []
        for ang in (0.0, 0.7, 1.3):
            u = np.array([math.cos(ang), math.sin(ang)])
            vals.append(flag_density_qk(spec, 1, Flag(u, triv)))
            quads.append(float(u @ lam_inv @ u))
        ratios = [v * q ** 1.5 for v, q in zip(vals, quads)]
        assert ratios[0] == pytest.approx(ratios[1], rel=1e-10)
        assert ratios[0] == pytest.approx(ratios[2], rel=1e-10)

    def test_dimension_mismatch(self):
        spec = iso_spec(3)
        flag = sample_flag(np.random.default_rng(2), 3, 2)
        with pytest.raises(ValueError):
            flag_density_qk(spec, 1, flag)

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal((3, 3))
        model = CovarianceModel.anisotropic(1.0, a @ a.T + np.eye(3))
        spec = ExcursionSpec(model, 0.4)
        rot, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        model_rot = CovarianceModel.anisotropic(1.0, rot @ model.shape @ rot.T)
        spec_rot = ExcursionSpec(model_rot, 0.4)
        for k in range(3):
            flag = sample_flag(rng, 3, 2 - k)
            frame = flag.subspace.frame
            flag_rot = Flag(rot @ flag.u, Subspace(rot @ frame))
            assert flag_density_qk(spec, k, flag) == pytest.approx(
                flag_density_qk(spec_rot, k, flag_rot), rel=1e-9, abs=1e-12
            )

    def test_sign_follows_hermite(self):
        model = CovarianceModel.anisotropic(1.0, np.diag([1.0, 2.0, 5.0]))
        rng = np.random.default_rng(4)
        for alpha in (-1.5, -0.3, 0.2, 1.0):
            spec = ExcursionSpec(model, alpha)
            for k in range(3):
                h = hermite(2 - k, alpha)
                for _ in range(5):
                    q = flag_density_qk(spec, k, sample_flag(rng, 3, 2 - k))
                    assert q * h >= 0.0


class TestCurvatureDensityIso:
    def test_d2_half_level(self):
        assert curvature_density_iso(iso_spec(2, 1.0, 1.0, 0.0), 1) == pytest.approx(
            0.25, abs=1e-14
        )

    def test_d2_k0_vanishes_at_zero(self):
        assert curvature_density_iso(iso_spec(2, alpha=0.0), 0) == 0.0

    def test_rejects_anisotropic(self):
        model = CovarianceModel.anisotropic(1.0, np.diag([1.0, 4.0]))
        with pytest.raises(ValueError):
            curvature_density_iso(ExcursionSpec(model, 0.0), 1)


class TestCurvatureDensityAniso:
    def test_reduces_to_isotropic(self):
        for d in (2, 3):
            spec = iso_spec(d, 1.4, 0.6, alpha=0.9)
            for k in range(d):
                cf = curvature_density_iso(spec, k)
                assert curvature_density_aniso(spec, k) == pytest.approx(
                    cf, rel=1e-6, abs=1e-12
                )

    def test_lambda_weights_d2_top(self):
        # d=2, k=1: k*=0, empty product, both weights are 1
        w = lambda_weights(np.array([3.0, 7.0]), 1)
        assert np.allclose(w, [1.0, 1.0])

    def test_lambda_weights_brute_force(self):
        # lambda_(j) = binom(d-1,k)^-1 sum_{|I|=k*, j not in I} prod lam_I
        eig = np.array([1.0, 2.0, 5.0])
        w = lambda_weights(eig, 1)  # d=3, k=1, k*=1
        expected = np.array([2.0 + 5.0, 1.0 + 5.0, 1.0 + 2.0]) / 2.0
        assert np.allclose(w, expected)

    def test_resolution_stability(self):
        model = CovarianceModel.anisotropic(1.0, np.diag([1.0, 4.0]))
        spec = ExcursionSpec(model, 0.3)
        a = curvature_density_aniso(spec, 1, n_quad=64)
        b = curvature_density_aniso(spec, 1, n_quad=128)
        assert a == pytest.approx(b, rel=1e-6)


class TestVolumeDensity:
    def test_median(self):
        assert volume_density(iso_spec(alpha=0.0)) == 0.5

    def test_monotone_decay(self):
        vals = [volume_density(iso_spec(alpha=a)) for a in (0.0, 0.5, 1.0, 2.0, 5.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-6

    def test_matches_tail(self):
        spec = iso_spec(2, 4.0, 1.0, alpha=2.0)  # sigma = 2
        assert volume_density(spec) == pytest.approx(gaussian_tail(1.0), abs=1e-14)


class TestMcFlagMass:
    def test_isotropic_constant_integrand(self):
        spec = iso_spec(2, 1.0, 1.0, alpha=0.0)
        est, se = mc_total_flag_mass(spec, 1, 1000, np.random.default_rng(5))
        assert est == pytest.approx(0.25, rel=1e-12)
        assert se < 1e-12

    def test_determinism(self):
        model = CovarianceModel.anisotropic(1.0, np.diag([1.0, 4.0]))
        spec = ExcursionSpec(model, 0.2)
        a = mc_total_flag_mass(spec, 1, 5000, np.random.default_rng(6))
        b = mc_total_flag_mass(spec, 1, 5000, np.random.default_rng(6))
        assert a == b

    def test_agrees_with_quadrature(self):
        model = CovarianceModel.anisotropic(1.0, np.diag([1.0, 4.0]))
        spec = ExcursionSpec(model, 0.0)
        est, se = mc_total_flag_mass(spec, 1, 100_000, np.random.default_rng(7))
        ref = curvature_density_aniso(spec, 1)
        assert abs(est - ref) <= 4.0 * se

    def test_minimum_samples(self):
        with pytest.raises(ValueError):
            mc_total_flag_mass(iso_spec(), 1, 50, np.random.default_rng(8))
