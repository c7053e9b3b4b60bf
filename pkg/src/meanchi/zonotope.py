"""Zonotope windows: faces at the origin and expected Euler characteristics.

A zonotope is a Minkowski sum of segments [0, v_i].  Its faces containing
the origin are sub-sums over generator subsets S admitting a witness
direction c with <c, v_i> = 0 for i in S and <c, v_i> < 0 otherwise; the
witness is found by linear programming so that non-generic generator sets
(parallel generators, cubes) are handled correctly.

The closed-form expected Euler characteristic of an excursion set clipped
to a zonotope window sums |F| sqrt(Lambda[F_0]) over origin faces.  For
isotropic models the principal-kinematic-formula evaluator provides an
independent route through curvature densities and intrinsic volumes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .densities import ExcursionSpec, curvature_density_iso, volume_density
from .grassmann import Subspace, lambda_bracket
from .special import beta_const, hermite

__all__ = [
    "Zonotope",
    "ZonotopeFace",
    "faces_at_origin",
    "face_volume",
    "expected_euler_zonotope",
    "expected_euler_pkf_iso",
    "intrinsic_volumes_box",
    "intrinsic_volumes_ball",
]

MAX_GENERATORS = 16

_SPAN_TOL = 1e-10


@dataclass(frozen=True)
class Zonotope:
    """Minkowski sum of segments [0, v_i] with a vertex at the origin."""

    generators: np.ndarray  # shape (m, d)

    def __post_init__(self):
        gens = np.atleast_2d(np.asarray(self.generators, dtype=float))
        object.__setattr__(self, "generators", gens)
        m, d = gens.shape
        if m > MAX_GENERATORS:
            raise ValueError(
                f"face enumeration is exponential in m; at most "
                f"{MAX_GENERATORS} generators supported, got {m}"
            )
        norms = np.linalg.norm(gens, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero generators are not allowed")
        if m < d or np.linalg.matrix_rank(gens) < d:
            raise ValueError("generators must span the ambient space")

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @property
    def num_generators(self) -> int:
        return self.generators.shape[0]

    @classmethod
    def cube(cls, d: int, side: float) -> "Zonotope":
        return cls(side * np.eye(d))


@dataclass(frozen=True)
class ZonotopeFace:
    """A face of the zonotope at the origin: generating subset, volume, span."""

    subset: tuple[int, ...]
    dim: int
    volume: float
    span: Subspace


def faces_at_origin(zono: Zonotope, j: int) -> list[ZonotopeFace]:
    """All j-dimensional faces of the zonotope containing the origin.

    The subset of each returned face is span-closed (it collects every
    generator lying in the face's linear hull) and faces are deduplicated
    by span.
    """
    d = zono.dim
    if not 1 <= j <= d:
        raise ValueError(f"face dimension must satisfy 1 <= j <= d, got {j}")
    gens = zono.generators
    m = zono.num_generators
    if j == d:
        subset = tuple(range(m))
        return [
            ZonotopeFace(subset, d, face_volume(subset, zono), Subspace(np.eye(d)))
        ]

    scale = float(np.linalg.norm(gens, axis=1).max())
    faces: list[ZonotopeFace] = []
    seen_projectors: list[np.ndarray] = []
    for combo in itertools.combinations(range(m), j):
        sub = gens[list(combo)]
        if np.linalg.matrix_rank(sub, tol=_SPAN_TOL * scale) < j:
            continue
        span = Subspace.from_vectors(sub)
        proj = span.frame @ span.frame.T
        if any(np.max(np.abs(proj - p)) < 1e-8 for p in seen_projectors):
            continue
        seen_projectors.append(proj)
        # span closure: every generator inside the hull joins the face
        residual = gens - gens @ proj
        members = tuple(
            i for i in range(m)
            if np.linalg.norm(residual[i]) <= _SPAN_TOL * max(np.linalg.norm(gens[i]), 1.0)
        )
        if _origin_face_feasible(gens, members, scale):
            faces.append(
                ZonotopeFace(members, j, face_volume(members, zono), span)
            )
    return faces


def _origin_face_feasible(gens: np.ndarray, members: tuple[int, ...], scale: float) -> bool:
    """LP witness test: exists c with <c,v_i> = 0 on the face, < 0 off it.

    Maximizes the margin eps subject to <c, v_i> <= -eps off the face and
    |c|_inf <= 1; the face is accepted iff the optimum exceeds
    1e-9 * max|v|.
    """
    m, d = gens.shape
    others = [i for i in range(m) if i not in members]
    if not others:
        return True
    # variables: (c_1..c_d, eps); maximize eps
    c_obj = np.zeros(d + 1)
    c_obj[-1] = -1.0
    a_ub = np.hstack([gens[others], np.ones((len(others), 1))])
    b_ub = np.zeros(len(others))
    a_eq = np.hstack([gens[list(members)], np.zeros((len(members), 1))])
    b_eq = np.zeros(len(members))
    bounds = [(-1.0, 1.0)] * d + [(0.0, None)]
    res = linprog(
        c_obj, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
        bounds=bounds, method="highs",
    )
    return res.status == 0 and -res.fun > 1e-9 * scale


def face_volume(subset, zono: Zonotope) -> float:
    """j-dimensional volume of the sub-zonotope over the given generators.

    Projects onto an orthonormal frame of the span and sums |det| over
    j-element sub-subsets (the standard zonotope volume expansion).
    """
    idx = sorted(subset)
    if not idx:
        raise ValueError("face subset must be nonempty")
    sub = zono.generators[idx]
    span = Subspace.from_vectors(sub)
    j = span.dim
    coords = sub @ span.frame
    total = 0.0
    for combo in itertools.combinations(range(len(idx)), j):
        total += abs(float(np.linalg.det(coords[list(combo)])))
    return total


def expected_euler_zonotope(spec: ExcursionSpec, zono: Zonotope) -> float:
    """Closed-form expected Euler characteristic of the excursion set in the window.

    Sums (2 pi)^(-(d-k+1)/2) sigma^(k-d) e^(-a^2/2s^2) H_{d-1-k}(a/s)
    * sum_F |F| sqrt(Lambda[F_0]) over faces F at the origin of dimension
    d-k, plus the volume-density term psi(alpha/sigma).
    """
    d = spec.model.dim
    if zono.dim != d:
        raise ValueError("window and model dimensions do not match")
    lam = spec.model.lambda_matrix()
    sigma = spec.sigma
    expo = math.exp(-spec.alpha**2 / (2.0 * spec.model.sigma2))
    total = volume_density(spec)
    for k in range(d):
        j = d - k
        face_sum = sum(
            f.volume * math.sqrt(lambda_bracket(lam, f.span))
            for f in faces_at_origin(zono, j)
        )
        total += (
            (2.0 * math.pi) ** (-(j + 1) / 2.0)
            / sigma**j
            * expo
            * hermite(d - 1 - k, spec.alpha / sigma)
            * face_sum
        )
    return total


def expected_euler_pkf_iso(spec: ExcursionSpec, intrinsic_vols) -> float:
    """Expected Euler characteristic via the principal kinematic formula.

    `intrinsic_vols` lists the total curvature measures C_0..C_d of the
    window (intrinsic volumes for convex windows, C_0 = chi).  Requires an
    isotropic model.
    """
    if not spec.model.is_isotropic:
        raise ValueError("the principal kinematic formula requires isotropy")
    d = spec.model.dim
    vols = [float(v) for v in intrinsic_vols]
    if len(vols) != d + 1:
        raise ValueError(f"need d+1 = {d + 1} curvature totals, got {len(vols)}")
    total = beta_const(d, d) * volume_density(spec) * vols[0]
    for k in range(d):
        total += beta_const(d, k) * curvature_density_iso(spec, k) * vols[d - k]
    return total


def intrinsic_volumes_box(side_lengths) -> list[float]:
    """Intrinsic volumes of an axis box: elementary symmetric polynomials."""
    sides = [float(s) for s in side_lengths]
    if any(s <= 0 for s in sides):
        raise ValueError("box sides must be positive")
    # e_j via the generating polynomial prod (1 + s_i t)
    coeffs = [1.0]
    for s in sides:
        coeffs = [a + s * b for a, b in zip(coeffs + [0.0], [0.0] + coeffs)]
    return coeffs


def intrinsic_volumes_ball(d: int, r: float) -> list[float]:
    """Intrinsic volumes of the d-ball of radius r."""
    if r <= 0:
        raise ValueError("ball radius must be positive")
    kappa = [math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) for n in range(d + 1)]
    return [math.comb(d, j) * kappa[d] / kappa[d - j] * r**j for j in range(d + 1)]
