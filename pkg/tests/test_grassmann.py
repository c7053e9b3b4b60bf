import math

import numpy as np
import pytest

from meanchi.grassmann import (
    Flag,
    Subspace,
    eigen_expansion,
    lambda_bracket,
    sample_flag,
    sample_flags,
    subspace_pairing,
    wedge_norm_sq,
)


def random_symmetric(rng, d):
    a = rng.standard_normal((d, d))
    return (a + a.T) / 2.0


def random_subspace(rng, d, j):
    if j == 0:
        return Subspace(np.empty((d, 0)))
    g = rng.standard_normal((d, j))
    q, r = np.linalg.qr(g)
    return Subspace(q * np.sign(np.diag(r)))


class TestSubspace:
    def test_orthonormality_enforced(self):
        with pytest.raises(ValueError):
            Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_from_vectors_drops_dependent(self):
        s = Subspace.from_vectors([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        assert s.dim == 2

    def test_trivial_subspace(self):
        s = Subspace(np.empty((3, 0)))
        assert s.dim == 0 and s.ambient_dim == 3


class TestFlag:
    def test_unit_direction_enforced(self):
        with pytest.raises(ValueError):
            Flag(np.array([1.0, 1.0]), Subspace(np.empty((2, 0))))

    def test_orthogonality_enforced(self):
        u = np.array([1.0, 0.0])
        with pytest.raises(ValueError):
            Flag(u, Subspace(np.array([[1.0], [0.0]])))


class TestLambdaBracket:
    def test_identity(self):
        rng = np.random.default_rng(0)
        for d in (2, 3, 4):
            for j in range(d + 1):
                u = random_subspace(rng, d, j)
                assert lambda_bracket(np.eye(d), u) == pytest.approx(1.0, abs=1e-12)

    def test_diagonal_axis_plane(self):
        L = np.diag([2.0, 3.0, 4.0])
        u = Subspace.span_of_axes(3, [0, 1])
        assert lambda_bracket(L, u) == pytest.approx(6.0, abs=1e-12)

    def test_trivial_subspace_convention(self):
        L = np.diag([5.0, 7.0])
        assert lambda_bracket(L, Subspace(np.empty((2, 0)))) == 1.0

    def test_frame_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            d, j = 4, 2
            L = random_symmetric(rng, d)
            u = random_subspace(rng, d, j)
            rot, _ = np.linalg.qr(rng.standard_normal((j, j)))
            u2 = Subspace(u.frame @ rot)
            a, b = lambda_bracket(L, u), lambda_bracket(L, u2)
            assert a == pytest.approx(b, rel=1e-9, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            lambda_bracket(np.eye(3), Subspace(np.eye(2)))


class TestEigenExpansion:
    def test_matches_direct_determinant(self):
        rng = np.random.default_rng(2)
        for d in range(2, 6):
            for j in range(d + 1):
                for _ in range(10):
                    L = random_symmetric(rng, d)
                    u = random_subspace(rng, d, j)
                    direct = lambda_bracket(L, u)
                    assert eigen_expansion(L, u) == pytest.approx(
                        direct, rel=1e-9, abs=1e-9
                    )

    def test_hyperplane_formula(self):
        # L[u_perp] = det(L) u^T L^-1 u for positive-definite L
        rng = np.random.default_rng(3)
        for d in range(2, 6):
            for _ in range(30):
                a = rng.standard_normal((d, d))
                L = a @ a.T + 0.5 * np.eye(d)
                u = rng.standard_normal(d)
                u /= np.linalg.norm(u)
                perp = Subspace.from_vectors([v - (v @ u) * u for v in np.eye(d)])
                assert perp.dim == d - 1
                lhs = lambda_bracket(L, perp)
                rhs = float(np.linalg.det(L)) * float(u @ np.linalg.inv(L) @ u)
                assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_scalar_matrix(self):
        rng = np.random.default_rng(4)
        lam = 2.5
        for j in range(4):
            u = random_subspace(rng, 4, j)
            assert eigen_expansion(lam * np.eye(4), u) == pytest.approx(
                lam**j, rel=1e-10
            )


class TestSubspacePairing:
    def test_self_pairing(self):
        rng = np.random.default_rng(5)
        u = random_subspace(rng, 4, 2)
        assert subspace_pairing(u, u) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_zero(self):
        u = Subspace.span_of_axes(3, [0])
        v = Subspace.span_of_axes(3, [1])
        assert subspace_pairing(u, v) == 0.0

    def test_range(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            u = random_subspace(rng, 3, 2)
            v = random_subspace(rng, 3, 2)
            p = subspace_pairing(u, v)
            assert -1e-12 <= p <= 1.0 + 1e-12

    def test_gram_determinant_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            u = random_subspace(rng, 3, 2)
            v = random_subspace(rng, 3, 2)
            gram = u.frame.T @ v.frame
            brute = np.linalg.det(gram @ gram.T)
            assert subspace_pairing(u, v) == pytest.approx(float(brute), abs=1e-10)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            subspace_pairing(Subspace.span_of_axes(3, [0]), Subspace.span_of_axes(3, [0, 1]))


class TestWedgeNorm:
    def test_orthonormal_list(self):
        assert wedge_norm_sq(np.eye(3)) == pytest.approx(1.0)

    def test_repeated_vector(self):
        assert wedge_norm_sq([[1.0, 0.0], [1.0, 0.0]]) == pytest.approx(0.0, abs=1e-12)

    def test_shear_pair(self):
        assert wedge_norm_sq([[1.0, 0.0], [1.0, 1.0]]) == pytest.approx(1.0, abs=1e-12)


class TestSampleFlag:
    def test_determinism(self):
        f1 = sample_flag(np.random.default_rng(42), 4, 2)
        f2 = sample_flag(np.random.default_rng(42), 4, 2)
        assert np.array_equal(f1.u, f2.u)
        assert np.array_equal(f1.subspace.frame, f2.subspace.frame)

    def test_valid_flags(self):
        rng = np.random.default_rng(8)
        for d in (2, 3, 4):
            for j in range(d):
                sample_flag(rng, d, j)  # Flag validates on construction

    def test_direction_symmetry(self):
        # E <u, e1>^2 = 1/d under the uniform sphere measure
        rng = np.random.default_rng(9)
        d, n = 3, 100_000
        u, _ = sample_flags(rng, d, 1, n)
        vals = u[:, 0] ** 2
        se = vals.std(ddof=1) / math.sqrt(n)
        assert abs(vals.mean() - 1.0 / d) <= 3.0 * se

    def test_grassmann_pairing_mean(self):
        # for fixed V in u_perp: E <U, V>^2 = 1 / binom(d-1, j)
        rng = np.random.default_rng(10)
        d, j, n = 4, 2, 40_000
        u = np.zeros(d)
        u[-1] = 1.0
        v = Subspace.span_of_axes(d, [0, 1])  # V inside u_perp
        g = rng.standard_normal((n, d, j))
        g -= u[None, :, None] * np.einsum("d,ndj->nj", u, g)[:, None, :]
        q, r = np.linalg.qr(g)
        q *= np.sign(np.einsum("njj->nj", r))[:, None, :]
        dets = np.linalg.det(np.einsum("da,ndj->naj", v.frame, q))
        vals = dets**2
        se = vals.std(ddof=1) / math.sqrt(n)
        assert abs(vals.mean() - 1.0 / math.comb(d - 1, j)) <= 3.0 * se

    def test_batched_matches_contract(self):
        rng = np.random.default_rng(11)
        u, frames = sample_flags(rng, 3, 1, 50)
        assert np.allclose(np.linalg.norm(u, axis=1), 1.0)
        assert np.allclose(np.einsum("nd,ndj->nj", u, frames), 0.0, atol=1e-10)
        gram = np.einsum("nda,ndb->nab", frames, frames)
        assert np.allclose(gram, np.eye(1), atol=1e-10)

    def test_j_range(self):
        with pytest.raises(ValueError):
            sample_flag(np.random.default_rng(0), 3, 3)
