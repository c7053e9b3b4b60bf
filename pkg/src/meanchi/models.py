"""Stationary Gaussian covariance models.

The squared-exponential family (isotropic and anisotropic) has analytic
spectral-moment matrices and C^inf sample paths, so every closed-form
prediction downstream is exact.  Models are immutable and validated
eagerly at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CovarianceModel"]


@dataclass(frozen=True)
class CovarianceModel:
    """Stationary zero-mean Gaussian field law on R^d.

    Families
    --------
    squared_exponential_isotropic
        C(x) = sigma2 * exp(-|x|^2 / (2 ell^2))
    squared_exponential_anisotropic
        C(x) = sigma2 * exp(-x^T A x / 2) with A symmetric positive definite
    """

    family: str
    dim: int
    sigma2: float
    ell: float | None = None
    shape: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if self.sigma2 <= 0:
            raise ValueError(f"variance must be positive, got {self.sigma2}")
        if self.family == "squared_exponential_isotropic":
            if self.ell is None or self.ell <= 0:
                raise ValueError(f"length scale must be positive, got {self.ell}")
        elif self.family == "squared_exponential_anisotropic":
            A = np.asarray(self.shape, dtype=float)
            if A.shape != (self.dim, self.dim):
                raise ValueError("shape matrix must be d x d")
            if not np.allclose(A, A.T, atol=1e-10 * max(1.0, float(np.abs(A).max()))):
                raise ValueError("shape matrix must be symmetric")
            eigvals = np.linalg.eigvalsh(A)
            if eigvals.min() <= 1e-10 * np.trace(A):
                raise ValueError("shape matrix must be positive definite")
            object.__setattr__(self, "shape", A)
        else:
            raise ValueError(f"unknown covariance family: {self.family!r}")

    @classmethod
    def isotropic(cls, dim: int, sigma2: float, ell: float) -> "CovarianceModel":
        return cls("squared_exponential_isotropic", dim, sigma2, ell=ell)

    @classmethod
    def anisotropic(cls, sigma2: float, shape) -> "CovarianceModel":
        A = np.asarray(shape, dtype=float)
        return cls("squared_exponential_anisotropic", A.shape[0], sigma2, shape=A)

    @property
    def is_isotropic(self) -> bool:
        return self.family == "squared_exponential_isotropic"

    def covariance(self, x) -> float | np.ndarray:
        """Pointwise covariance C(x); accepts a vector or an (..., d) array."""
        x = np.asarray(x, dtype=float)
        if self.is_isotropic:
            q = np.sum(x * x, axis=-1) / self.ell**2
        else:
            q = np.einsum("...i,ij,...j->...", x, self.shape, x)
        out = self.sigma2 * np.exp(-0.5 * q)
        return float(out) if out.ndim == 0 else out

    def lambda_matrix(self) -> np.ndarray:
        """Spectral-moment matrix Lambda = -Hessian of C at 0 (gradient covariance)."""
        if self.is_isotropic:
            return (self.sigma2 / self.ell**2) * np.eye(self.dim)
        return self.sigma2 * self.shape

    def spectral_density(self, w) -> float | np.ndarray:
        """Spectral density rho with C(x) = int rho(w) exp(i w.x) dw.

        Nonnegative and integrating to sigma2.
        """
        w = np.asarray(w, dtype=float)
        if self.is_isotropic:
            q = self.ell**2 * np.sum(w * w, axis=-1)
            det_a = self.ell ** (-2 * self.dim)
        else:
            a_inv = np.linalg.inv(self.shape)
            q = np.einsum("...i,ij,...j->...", w, a_inv, w)
            det_a = float(np.linalg.det(self.shape))
        out = (
            self.sigma2
            * (2.0 * math.pi) ** (-self.dim / 2.0)
            / math.sqrt(det_a)
            * np.exp(-0.5 * q)
        )
        return float(out) if np.ndim(out) == 0 else out
