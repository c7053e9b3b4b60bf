"""Subspaces, flags, and the compressed determinant Lambda[U].

Subspaces are stored as explicit orthonormal frames (d x j column
matrices).  The trivial subspace (j = 0) is allowed and the empty
determinant convention Lambda[U] = 1 applies throughout; it is what makes
the top flag density (k = d-1) well-defined.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Subspace",
    "Flag",
    "lambda_bracket",
    "eigen_expansion",
    "subspace_pairing",
    "wedge_norm_sq",
    "sample_flag",
    "sample_flags",
]

_ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^d given by an orthonormal column frame."""

    frame: np.ndarray  # shape (d, j)

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=float)
        if frame.ndim != 2:
            raise ValueError("frame must be a d x j matrix")
        object.__setattr__(self, "frame", frame)
        d, j = frame.shape
        if not 0 <= j <= d:
            raise ValueError(f"subspace dimension {j} exceeds ambient dimension {d}")
        if j > 0:
            gram = frame.T @ frame
            if not np.allclose(gram, np.eye(j), atol=_ORTHO_TOL):
                raise ValueError("frame columns are not orthonormal")

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    @classmethod
    def from_vectors(cls, vectors) -> "Subspace":
        """Span of the given vectors, orthonormalized by modified Gram-Schmidt.

        Vectors that are linearly dependent on the preceding ones (residual
        below 1e-12 relative) are dropped.
        """
        vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
        d = vecs.shape[1]
        scale = max(np.linalg.norm(vecs, axis=1).max(), 1.0)
        basis = []
        for v in vecs:
            w = v.copy()
            for b in basis:
                w -= (b @ w) * b
            # second MGS pass for numerical orthogonality
            for b in basis:
                w -= (b @ w) * b
            nrm = np.linalg.norm(w)
            if nrm > 1e-12 * scale:
                basis.append(w / nrm)
        frame = np.column_stack(basis) if basis else np.empty((d, 0))
        return cls(frame)

    @classmethod
    def span_of_axes(cls, d: int, axes) -> "Subspace":
        frame = np.zeros((d, len(axes)))
        for col, ax in enumerate(axes):
            frame[ax, col] = 1.0
        return cls(frame)


@dataclass(frozen=True)
class Flag:
    """A pair (u, U): unit direction plus a subspace orthogonal to u."""

    u: np.ndarray
    subspace: Subspace

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        object.__setattr__(self, "u", u)
        if abs(np.linalg.norm(u) - 1.0) > _ORTHO_TOL:
            raise ValueError("flag direction is not a unit vector")
        if u.shape[0] != self.subspace.ambient_dim:
            raise ValueError("flag direction and subspace live in different spaces")
        if self.subspace.dim > 0:
            if np.max(np.abs(u @ self.subspace.frame)) > _ORTHO_TOL:
                raise ValueError("subspace is not orthogonal to the flag direction")


def lambda_bracket(L: np.ndarray, U: Subspace) -> float:
    """det of the compression of the symmetric matrix L to the subspace U.

    Independent of the orthonormal frame chosen for U; equals 1 for the
    trivial subspace (empty determinant).
    """
    L = _check_symmetric(L)
    if L.shape[0] != U.ambient_dim:
        raise ValueError("matrix and subspace dimensions do not match")
    if U.dim == 0:
        return 1.0
    return float(np.linalg.det(U.frame.T @ L @ U.frame))


def eigen_expansion(L: np.ndarray, U: Subspace) -> float:
    """Lambda[U] evaluated through the eigen-expansion.

    Sums lambda_I <U, B_I>^2 over all index sets I of size dim(U), where
    lambda_I is the product of eigenvalues of L indexed by I and B_I is
    the span of the corresponding eigenvectors.  Must agree with
    :func:`lambda_bracket`.
    """
    L = _check_symmetric(L)
    if L.shape[0] != U.ambient_dim:
        raise ValueError("matrix and subspace dimensions do not match")
    j = U.dim
    if j == 0:
        return 1.0
    eigvals, eigvecs = np.linalg.eigh(L)
    d = L.shape[0]
    total = 0.0
    for idx in itertools.combinations(range(d), j):
        lam = float(np.prod(eigvals[list(idx)]))
        pairing = np.linalg.det(U.frame.T @ eigvecs[:, list(idx)]) ** 2
        total += lam * float(pairing)
    return total


def subspace_pairing(U: Subspace, V: Subspace) -> float:
    """Squared frame determinant <U, V>^2 of two equal-dimensional subspaces."""
    if U.dim != V.dim:
        raise ValueError("subspace pairing requires equal dimensions")
    if U.ambient_dim != V.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    if U.dim == 0:
        return 1.0
    return float(np.linalg.det(U.frame.T @ V.frame) ** 2)


def wedge_norm_sq(vectors) -> float:
    """Gram determinant ||v_1 ^ ... ^ v_k||^2; zero iff linearly dependent."""
    vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
    gram = vecs @ vecs.T
    return float(np.linalg.det(gram))


def sample_flag(rng: np.random.Generator, d: int, j: int) -> Flag:
    """Draw a flag (u, U) from the rotation-invariant measure on F_perp(d, j).

    u is uniform on the sphere; U is uniform on the Grassmannian of u_perp
    (Gaussian fill, projection to u_perp, QR orthonormalization).
    Deterministic given the generator state.
    """
    if not 0 <= j <= d - 1:
        raise ValueError(f"need 0 <= j <= d-1, got j={j}, d={d}")
    u = _random_unit(rng, d)
    frame = _subspace_in_complement(rng, u, j)
    return Flag(u, Subspace(frame))


def sample_flags(rng: np.random.Generator, d: int, j: int, n: int):
    """Vectorized flag sampling: (n, d) directions and (n, d, j) frames."""
    if not 0 <= j <= d - 1:
        raise ValueError(f"need 0 <= j <= d-1, got j={j}, d={d}")
    u = rng.standard_normal((n, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    if j == 0:
        return u, np.empty((n, d, 0))
    g = rng.standard_normal((n, d, j))
    g -= u[:, :, None] * np.einsum("nd,ndj->nj", u, g)[:, None, :]
    q, r = np.linalg.qr(g)
    q *= np.sign(np.einsum("njj->nj", r))[:, None, :]
    return u, q


def _random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _subspace_in_complement(rng: np.random.Generator, u: np.ndarray, j: int) -> np.ndarray:
    d = u.shape[0]
    if j == 0:
        return np.empty((d, 0))
    g = rng.standard_normal((d, j))
    g -= np.outer(u, u @ g)
    q, r = np.linalg.qr(g)
    q *= np.sign(np.diag(r))
    return q


def _check_symmetric(L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(L, L.T, atol=1e-10 * max(1.0, float(np.abs(L).max()))):
        raise ValueError("matrix is not symmetric")
    return L
