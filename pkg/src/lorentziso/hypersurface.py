"""Achronal hypersurfaces as graphs S_f = {f(x) x} over hyperbolic domains.

Two representations share one discrete core (:class:`Atoms`): a list of
mu-weighted atoms carrying f and |grad ln f|.

* :class:`RadialProfile` -- rotationally symmetric graph r(t) over a geodesic
  ball of radius ``t_star``, any n in 1..6, integrated with composite
  Gauss-Legendre in the radial variable against the density ``nu_weight``.
* :class:`GraphHypersurface` -- values on a :class:`DomainMesh`; the mesh is
  either a geodesic-polar grid on a ball (n = 2) or an abstract atomic measure.

Every functional is a weighted sum over atoms, so all inequalities proven for
general measures hold exactly at the discrete level, up to rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import minkowski as mk
from .errors import (
    EmptyDomainError,
    InvalidInputError,
    NumericError,
    UnsupportedDomainError,
)
from .kernels import lipschitz_excess, pairwise_sum
from .quadrature import gauss_legendre_composite, weighted_sum

DEFAULT_RADIAL_NODES = 2048
DEFAULT_POLAR_GRID = (256, 256)
ACHRONAL_SLACK = 1e-9
PATH_SLACK = 1e-8
MAX_RADIAL_DIM = 6


@dataclass(frozen=True)
class Atoms:
    weights: np.ndarray
    f: np.ndarray
    s: np.ndarray
    n: int

    @property
    def measure(self) -> float:
        return pairwise_sum(self.weights)


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True, eq=False)
class DomainMesh:
    """Quadrature (or atomic) discretization of a domain Omega in H^n.

    ``kind`` is ``"ball"`` (geodesic-polar grid with explicit points),
    ``"radial"`` (radial nodes only, rotational symmetry implied) or
    ``"atomic"`` (abstract weighted atoms, no geometry).
    """

    weights: np.ndarray
    n: int
    kind: str = "atomic"
    points: np.ndarray | None = None
    radii: np.ndarray | None = None
    center: np.ndarray | None = None
    radius: float | None = None

    def __post_init__(self):
        w = _readonly(self.weights)
        if w.ndim != 1 or w.size == 0:
            raise EmptyDomainError("a mesh needs at least one atom")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidInputError("mesh weights must be finite and positive")
        object.__setattr__(self, "weights", w)
        if self.points is not None:
            p = _readonly(self.points)
            if p.shape != (w.size, self.n + 1):
                raise InvalidInputError(f"points must have shape ({w.size}, {self.n + 1})")
            object.__setattr__(self, "points", p)
        if self.radii is not None:
            object.__setattr__(self, "radii", _readonly(self.radii))

    def __len__(self):
        return self.weights.size

    @property
    def measure(self) -> float:
        return pairwise_sum(self.weights)

    @classmethod
    def atomic(cls, weights, n: int) -> "DomainMesh":
        return cls(weights=weights, n=n, kind="atomic")

    @classmethod
    def radial(cls, t_star: float, n: int, nodes: int = DEFAULT_RADIAL_NODES) -> "DomainMesh":
        t, w = gauss_legendre_composite(0.0, t_star, nodes)
        return cls(weights=w * mk.nu_weight(t, n), n=n, kind="radial", radii=t, radius=t_star)

    @classmethod
    def geodesic_ball(cls, t_star: float, n_radial: int = DEFAULT_POLAR_GRID[0],
                      n_angular: int = DEFAULT_POLAR_GRID[1], center=None) -> "DomainMesh":
        """Geodesic-polar product grid on a ball in H^2.

        Radial composite Gauss-Legendre times the uniform angular rule, which
        is spectrally accurate for periodic integrands.
        """
        t, wt = gauss_legendre_composite(0.0, t_star, n_radial)
        theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
        T, TH = np.meshgrid(t, theta, indexing="ij")
        W = (wt * np.sinh(t))[:, None] * np.full(n_angular, 2.0 * np.pi / n_angular)[None, :]
        pts = np.column_stack([
            np.cosh(T).ravel(),
            (np.sinh(T) * np.cos(TH)).ravel(),
            (np.sinh(T) * np.sin(TH)).ravel(),
        ])
        c = np.array([1.0, 0.0, 0.0]) if center is None else mk._arr(center).astype(float)
        if center is not None:
            pts = pts @ _boost_to(c).T
        return cls(weights=W.ravel(), n=2, kind="ball", points=pts, radii=T.ravel(),
                   center=c, radius=t_star)


def _boost_to(c: np.ndarray) -> np.ndarray:
    """Lorentz boost mapping (1, 0, ..., 0) to the hyperboloid point c."""
    c0, cv = c[0], c[1:]
    m = c.size
    B = np.empty((m, m))
    B[0, 0] = c0
    B[0, 1:] = cv
    B[1:, 0] = cv
    B[1:, 1:] = np.eye(m - 1) + np.outer(cv, cv) / (1.0 + c0)
    return B


# ---------------------------------------------------------------------------
# hypersurfaces


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Rotationally symmetric graph f(x) = r(d_H(x0, x)) over B_{t_star}(x0).

    ``r`` and ``r_prime`` must accept numpy arrays.
    """

    n: int
    t_star: float
    r: Callable
    r_prime: Callable
    quadrature_nodes: int = DEFAULT_RADIAL_NODES
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_RADIAL_DIM:
            raise InvalidInputError(f"radial profiles support 1 <= n <= {MAX_RADIAL_DIM}")
        if not (self.t_star > 0 and math.isfinite(self.t_star)):
            raise InvalidInputError("t_star must be positive and finite")

    @property
    def mesh(self) -> DomainMesh:
        if "mesh" not in self._cache:
            self._cache["mesh"] = DomainMesh.radial(self.t_star, self.n, self.quadrature_nodes)
        return self._cache["mesh"]

    @property
    def nodes(self) -> np.ndarray:
        return self.mesh.radii

    def atoms(self) -> Atoms:
        if "atoms" not in self._cache:
            t = self.mesh.radii
            f = np.broadcast_to(np.asarray(self.r(t), dtype=np.float64), t.shape)
            dr = np.broadcast_to(np.asarray(self.r_prime(t), dtype=np.float64), t.shape)
            if not np.all(np.isfinite(f)) or np.any(f <= 0):
                raise InvalidInputError("r must be positive and finite at every node")
            self._cache["atoms"] = Atoms(self.mesh.weights, _readonly(f),
                                         _readonly(np.abs(dr) / f), self.n)
        return self._cache["atoms"]

    def truncated(self, t_max: float) -> "RadialProfile":
        return RadialProfile(self.n, t_max, self.r, self.r_prime, self.quadrature_nodes)

    def scaled(self, lam: float) -> "RadialProfile":
        r, rp = self.r, self.r_prime
        return RadialProfile(self.n, self.t_star, lambda t: lam * r(t),
                             lambda t: lam * rp(t), self.quadrature_nodes)

    @classmethod
    def constant(cls, value: float, n: int, t_star: float,
                 quadrature_nodes: int = DEFAULT_RADIAL_NODES) -> "RadialProfile":
        return cls(n, t_star, lambda t: np.full_like(np.asarray(t, float), value),
                   lambda t: np.zeros_like(np.asarray(t, float)), quadrature_nodes)


@dataclass(frozen=True, eq=False)
class GraphHypersurface:
    """Graph of f over a :class:`DomainMesh`, with |grad ln f| supplied per node."""

    mesh: DomainMesh
    f_values: np.ndarray
    log_grad_norms: np.ndarray

    def __post_init__(self):
        f = _readonly(self.f_values)
        s = _readonly(self.log_grad_norms)
        if f.shape != self.mesh.weights.shape or s.shape != f.shape:
            raise InvalidInputError("f_values and log_grad_norms must match the mesh size")
        if not np.all(np.isfinite(f)) or np.any(f <= 0):
            raise InvalidInputError("f must be positive and finite")
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise InvalidInputError("log-gradient norms must be finite and nonnegative")
        object.__setattr__(self, "f_values", f)
        object.__setattr__(self, "log_grad_norms", s)

    @property
    def n(self) -> int:
        return self.mesh.n

    def atoms(self) -> Atoms:
        return Atoms(self.mesh.weights, self.f_values, self.log_grad_norms, self.n)

    @classmethod
    def atomic(cls, weights, f_values, log_grad_norms=None, n: int = 2) -> "GraphHypersurface":
        f = np.asarray(f_values, dtype=np.float64)
        s = np.zeros_like(f) if log_grad_norms is None else log_grad_norms
        return cls(DomainMesh.atomic(weights, n), f, s)

    @classmethod
    def from_function(cls, mesh: DomainMesh, f: Callable, grad_log_norm: Callable) -> "GraphHypersurface":
        """Sample ``f`` and ``|grad ln f|`` (both taking an (N, n+1) point array)."""
        if mesh.points is None:
            raise UnsupportedDomainError("from_function needs a mesh with explicit points")
        return cls(mesh, f(mesh.points), grad_log_norm(mesh.points))

    @classmethod
    def from_radial(cls, profile: RadialProfile, n_radial: int = DEFAULT_POLAR_GRID[0],
                    n_angular: int = DEFAULT_POLAR_GRID[1], center=None) -> "GraphHypersurface":
        if profile.n != 2:
            raise UnsupportedDomainError("meshed graph hypersurfaces are implemented for n = 2")
        mesh = DomainMesh.geodesic_ball(profile.t_star, n_radial, n_angular, center)
        t = mesh.radii
        f = np.broadcast_to(np.asarray(profile.r(t), dtype=np.float64), t.shape)
        dr = np.broadcast_to(np.asarray(profile.r_prime(t), dtype=np.float64), t.shape)
        return cls(mesh, f, np.abs(dr) / f)


Hypersurface = GraphHypersurface | RadialProfile


def as_atoms(S) -> Atoms:
    if isinstance(S, Atoms):
        return S
    if isinstance(S, (GraphHypersurface, RadialProfile)):
        return S.atoms()
    raise InvalidInputError(f"not a hypersurface: {type(S).__name__}")


def domain_measure(S) -> float:
    return as_atoms(S).measure


# ---------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class AchronalReport:
    violations: list
    checked: int
    slack: float

    @property
    def admissible(self) -> bool:
        return not self.violations


def check_achronal(S, slack: float = ACHRONAL_SLACK) -> AchronalReport:
    """Nodes where the gradient bound |grad ln f| <= 1 fails beyond ``slack``.

    Violations are ``(node index, |grad ln f|)`` pairs; radial profiles report
    the radial node ``t`` alongside.
    """
    a = as_atoms(S)
    bad = np.flatnonzero(a.s > 1.0 + slack)
    if isinstance(S, RadialProfile):
        t = S.nodes
        viol = [(int(i), float(a.s[i]), float(t[i])) for i in bad]
    else:
        viol = [(int(i), float(a.s[i])) for i in bad]
    return AchronalReport(viol, a.f.size, slack)


@dataclass(frozen=True)
class PathReport:
    violations: list
    checked: int
    max_excess: float

    @property
    def admissible(self) -> bool:
        return not self.violations


def check_achronal_paths(S: GraphHypersurface, num_pairs: int = 10_000, rng_seed=0,
                         slack: float = PATH_SLACK) -> PathReport:
    """Discrete test that ln f is 1-Lipschitz for d_H on random node pairs.

    Only valid on convex domains, where the intrinsic metric equals d_H, so
    the mesh has to be a geodesic ball.
    """
    if not isinstance(S, GraphHypersurface) or S.mesh.kind != "ball":
        raise UnsupportedDomainError("path check needs a graph over a geodesic-ball mesh")
    rng = np.random.default_rng(rng_seed)
    m = S.f_values.size
    pairs = rng.integers(0, m, size=(num_pairs, 2))
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    excess = lipschitz_excess(S.mesh.points, np.log(S.f_values), pairs)
    bad = np.flatnonzero(excess > slack)
    viol = [(int(pairs[k, 0]), int(pairs[k, 1]), float(excess[k])) for k in bad]
    return PathReport(viol, int(pairs.shape[0]), float(excess.max(initial=-np.inf)))


@dataclass(frozen=True)
class CurveSample:
    """Discrete path in H with radial endpoint values (r0, r1)."""

    points: np.ndarray
    r_endpoints: tuple

    def __post_init__(self):
        pts = np.array([mk._arr(p) for p in self.points], dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise InvalidInputError("a curve needs at least two points")
        if np.any(np.all(np.diff(pts, axis=0) == 0, axis=1)):
            raise InvalidInputError("consecutive curve points must be distinct")
        r0, r1 = self.r_endpoints
        if not (r0 > 0 and r1 > 0):
            raise InvalidInputError("endpoint radii must be positive")
        object.__setattr__(self, "points", _readonly(pts))

    @property
    def length(self) -> float:
        return float(np.sum(mk.hyperbolic_dist(self.points[:-1], self.points[1:])))


def timelike_connectable(c: CurveSample, tol: float = 1e-12) -> bool:
    """Whether a future timelike curve over the path joins r0 x(0) to r1 x(b).

    Requires L_H < ln(r1/r0) strictly; equality gives a lightlike curve, so
    values within ``tol`` of the boundary count as not connectable.
    """
    r0, r1 = c.r_endpoints
    return c.length < math.log(r1 / r0) - tol


# ---------------------------------------------------------------------------
# volume, area, distance


def cone_volume(S) -> float:
    """V(C(S)) = 1/(n+1) * integral of f^{n+1} d mu."""
    a = as_atoms(S)
    v = weighted_sum(a.weights, a.f ** (a.n + 1)) / (a.n + 1)
    if not math.isfinite(v):
        raise NumericError("cone volume is not finite")
    return v


def area(S) -> float:
    """A(S) = integral of f^n sqrt(1 - |grad ln f|^2) d mu, with the slope clamped to [0, 1].

    Nodes beyond the lightlike bound are reported by :func:`check_achronal`.
    """
    a = as_atoms(S)
    s = np.clip(a.s, 0.0, 1.0)
    v = weighted_sum(a.weights, a.f ** a.n * np.sqrt(1.0 - s * s))
    if not math.isfinite(v):
        raise NumericError("area is not finite")
    return v


def dist_origin(S) -> float:
    """Minimum of f over the nodes.

    This is an upper bound for the true infimum and converges to it under
    refinement.
    """
    return float(np.min(as_atoms(S).f))


def restrict(S, node_subset: Sequence[int]) -> GraphHypersurface:
    """Sub-hypersurface over the selected atoms (a measurable subset B of S)."""
    idx = np.asarray(node_subset, dtype=np.int64).ravel()
    if idx.size == 0:
        raise EmptyDomainError("cannot restrict to an empty node set")
    if isinstance(S, GraphHypersurface):
        m = S.mesh
        # a subset of a ball is not convex in general, so drop the ball tag
        sub = DomainMesh(
            weights=m.weights[idx], n=m.n, kind="atomic",
            points=None if m.points is None else m.points[idx],
            radii=None if m.radii is None else m.radii[idx],
            center=m.center, radius=m.radius,
        )
        return GraphHypersurface(sub, S.f_values[idx], S.log_grad_norms[idx])
    a = as_atoms(S)
    return GraphHypersurface.atomic(a.weights[idx], a.f[idx], a.s[idx], a.n)


def exhaustion_sequence(P: RadialProfile, k_steps: int) -> list:
    """Restrictions of P to the balls of radius t_star * k / k_steps, k = 1..k_steps."""
    if k_steps < 1:
        raise InvalidInputError("k_steps must be at least 1")
    if k_steps == 1:
        return [P]
    return [P.truncated(P.t_star * k / k_steps) for k in range(1, k_steps + 1)]
