"""Spacelike simplices in the chronological future and the cone formula.

For a flat spacelike simplex P with supporting hyperplane Pi at Lorentzian
height h, the projected measure has the density h / |y|^{n+1} over P:

    mu(pi(P)) = integral_P h |y|^{-(n+1)} dA(y),

because the cone over dA has volume h dA / (n+1) and the cone over the
projected patch out to radius |y| has volume |y|^{n+1} d mu / (n+1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import minkowski as mk
from .errors import DegenerateError, DomainError, InvalidInputError
from .kernels import inverse_power_moments

DEGENERATE_TOL = 1e-12
MC_SAMPLES = 1_000_000


@dataclass(frozen=True, eq=False)
class SpacelikeSimplex:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] < 2:
            raise InvalidInputError("need n+1 vertices in L^{n+1}")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("vertices must be finite")
        for row in v:
            if not mk.is_future_timelike(row):
                raise DomainError("every vertex must be future-directed timelike")
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)
        G = self.gram
        scale = float(np.max(np.abs(G))) if G.size else 0.0
        eig = np.linalg.eigvalsh(G)
        if eig.min() <= DEGENERATE_TOL * max(scale, 1.0):
            if eig.min() < -DEGENERATE_TOL * max(scale, 1.0):
                raise DomainError("edge Gram matrix is not positive definite (non-spacelike simplex)")
            raise DegenerateError("degenerate simplex")

    @property
    def n(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def edges(self) -> np.ndarray:
        return self.vertices[1:] - self.vertices[0]

    @property
    def gram(self) -> np.ndarray:
        return _inner_matrix(self.edges, self.edges)


def simplex_area(P: SpacelikeSimplex) -> float:
    """sqrt(det G) / n! with G the Minkowski Gram matrix of the edges.

    G = C C^T where C holds the edges in a Minkowski-orthonormal basis of the
    supporting hyperplane, so sqrt(det G) = |det C|.  Evaluating |det C| (the
    area of the flattened simplex) avoids squaring the condition number.
    """
    if float(np.linalg.det(P.gram)) <= 0:
        raise DegenerateError("edge Gram determinant is not positive")
    B = _spacelike_basis(future_unit_normal(P))
    C = _inner_matrix(P.edges, B)
    return abs(float(np.linalg.det(C))) / math.factorial(P.n)


def _inner_matrix(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Matrix of Minkowski inner products <x_i, y_j>."""
    JY = Y.copy()
    JY[:, 0] *= -1.0
    return X @ JY.T


def future_unit_normal(P: SpacelikeSimplex) -> np.ndarray:
    """Future unit timelike normal N of the supporting hyperplane."""
    e = P.edges
    # <e_i, N> = e_i . (J N); the Euclidean null vector of e gives J N
    _, _, vt = np.linalg.svd(e)
    m = vt[-1]
    N = m.copy()
    N[0] = -N[0]
    q = mk.mink_inner(N, N)
    if q >= -DEGENERATE_TOL * float(N @ N):
        raise DomainError("supporting hyperplane is not spacelike")
    N = N / math.sqrt(-q)
    return N if N[0] > 0 else -N


def lorentzian_height(P: SpacelikeSimplex) -> float:
    """Lorentzian distance from the origin to the supporting hyperplane."""
    N = future_unit_normal(P)
    return abs(mk.mink_inner(P.vertices[0], N))


def cone_volume_simplex(P: SpacelikeSimplex) -> float:
    """|det[v_1, ..., v_{n+1}]| / (n+1)!, the volume of conv{O, vertices}."""
    det = abs(float(np.linalg.det(P.vertices)))
    if det <= DEGENERATE_TOL * float(np.max(np.abs(P.vertices))) ** (P.n + 1):
        raise DegenerateError("cone over the simplex is degenerate")
    return det / math.factorial(P.n + 1)


def cone_formula_check(P: SpacelikeSimplex) -> float:
    """V(C(P)) - h A(P) / (n+1); zero up to rounding."""
    return cone_volume_simplex(P) - lorentzian_height(P) * simplex_area(P) / (P.n + 1)


@dataclass(frozen=True)
class ProjectedMeasure:
    value: float
    stderr: float
    samples: int


def projected_measure(P: SpacelikeSimplex, samples: int = MC_SAMPLES, seed=0) -> ProjectedMeasure:
    """mu(pi(P)): closed form for n = 1, Monte Carlo over P for n >= 2.

    Samples are uniform on P (flat Dirichlet barycentric coordinates); the
    estimator is A(P) h mean(|y|^{-(n+1)}).  ``seed`` may be an int or a
    sequence (e.g. [base_seed, instance_id]) for counter-based seeding.
    """
    if P.n == 1:
        x, y = (mk.radial_project(v).array for v in P.vertices)
        return ProjectedMeasure(float(mk.hyperbolic_dist(x, y)), 0.0, 0)
    rng = np.random.default_rng(seed)
    h = lorentzian_height(P)
    A = simplex_area(P)
    bary = rng.dirichlet(np.ones(P.n + 1), size=samples)
    m1, m2 = inverse_power_moments(bary, P.vertices, 1.0, float(P.n + 1))
    scale = A * h
    var = max(m2 - m1 * m1, 0.0)
    return ProjectedMeasure(scale * m1, scale * math.sqrt(var / samples), samples)


def containment_check(P: SpacelikeSimplex, samples: int = MC_SAMPLES, seed=0) -> float:
    """h^{n+1} mu(pi(P)) / (n+1) - V(C(P)), nonnegative since C(P) lies below H_h."""
    h = lorentzian_height(P)
    mu = projected_measure(P, samples, seed).value
    return h ** (P.n + 1) * mu / (P.n + 1) - cone_volume_simplex(P)


def induction_step_check(a1: float, s1: float, a2: float, s2: float, n: int) -> float:
    """((s1+s2)(a1+a2)^n)^{1/(n+1)} - (s1 a1^n)^{1/(n+1)} - (s2 a2^n)^{1/(n+1)}.

    a_i are cone volumes and s_i the projected cone volumes sigma_i.
    """
    if min(a1, s1, a2, s2) <= 0:
        raise DomainError("induction step needs positive volumes")
    k = n + 1
    right = ((s1 + s2) * (a1 + a2) ** n) ** (1.0 / k)
    return right - (s1 * a1 ** n) ** (1.0 / k) - (s2 * a2 ** n) ** (1.0 / k)


def _spacelike_basis(N: np.ndarray) -> np.ndarray:
    """Minkowski-orthonormal basis of the spacelike complement of a unit timelike N."""
    dim = N.size
    basis = []
    for e in np.eye(dim)[1:]:
        u = e + mk.mink_inner(e, N) * N  # remove the N component (<N,N> = -1)
        for b in basis:
            u = u - mk.mink_inner(u, b) * b
        basis.append(u / math.sqrt(mk.mink_inner(u, u)))
    return np.array(basis)


def random_spacelike_simplex(rng, n: int, patch: float = 1.0, max_tries: int = 1000) -> SpacelikeSimplex:
    """Random simplex in a random spacelike hyperplane through a random timelike center.

    Draws are rejected until every vertex is future timelike and the edge
    Gram matrix is well conditioned.
    """
    for _ in range(max_tries):
        N = mk.hyperboloid_points(rng, n, 1, spread=0.8)[0]
        center = mk.random_future_timelike(rng, n, 1, spread=0.8)[0] * rng.uniform(1.0, 3.0)
        B = _spacelike_basis(N)
        coeffs = rng.uniform(-patch, patch, size=(n + 1, n)) * mk.lorentz_norm(center)
        verts = center + coeffs @ B
        try:
            P = SpacelikeSimplex(verts)
        except ValueError:
            continue
        if np.linalg.cond(P.gram) < 1e8:
            return P
    raise DegenerateError("could not draw a well-conditioned spacelike simplex")
