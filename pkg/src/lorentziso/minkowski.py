"""Minkowski space L^{n+1} and the hyperboloid model of hyperbolic space.

Conventions: index 0 is time, the inner product has signature (-, +, ..., +)
and the time orientation is fixed by v0 = (1, 0, ..., 0), so a non-spacelike
vector is future-directed iff its time coordinate is positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError

CLASSIFY_TOL = 1e-12
SHEET_TOL = 1e-9


@dataclass(frozen=True)
class MinkowskiVector:
    coords: tuple

    def __init__(self, coords):
        arr = np.asarray(coords, dtype=np.float64).ravel()
        if arr.size < 2:
            raise InvalidInputError("a Minkowski vector needs at least 2 coordinates")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("coordinates must be finite")
        object.__setattr__(self, "coords", tuple(float(c) for c in arr))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords)

    def __add__(self, other):
        return MinkowskiVector(self.array + _arr(other))

    def __sub__(self, other):
        return MinkowskiVector(self.array - _arr(other))

    def __mul__(self, scalar):
        return MinkowskiVector(self.array * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return MinkowskiVector(self.array / float(scalar))


@dataclass(frozen=True)
class HyperbolicPoint:
    """A point on the future unit hyperboloid <v, v> = -1."""

    vector: MinkowskiVector

    def __post_init__(self):
        v = self.vector.array
        q = mink_inner(v, v)
        if abs(q + 1.0) > 1e-12 * max(1.0, float(v @ v)):
            raise DomainError(f"point is off the unit hyperboloid (<v,v> = {q!r})")
        if v[0] <= 0:
            raise DomainError("point is on the past sheet")

    @classmethod
    def from_spatial(cls, x) -> "HyperbolicPoint":
        """Lift spatial coordinates x to (sqrt(1 + |x|^2), x)."""
        x = np.asarray(x, dtype=np.float64).ravel()
        return cls(MinkowskiVector(np.concatenate([[math.sqrt(1.0 + x @ x)], x])))

    @classmethod
    def origin(cls, n: int) -> "HyperbolicPoint":
        e = np.zeros(n + 1)
        e[0] = 1.0
        return cls(MinkowskiVector(e))

    @property
    def array(self) -> np.ndarray:
        return self.vector.array


@dataclass(frozen=True)
class CausalClass:
    tag: str
    future_directed: bool | None = None


def _arr(v) -> np.ndarray:
    if isinstance(v, HyperbolicPoint):
        return v.vector.array
    if isinstance(v, MinkowskiVector):
        return v.array
    return np.asarray(v, dtype=np.float64)


def mink_inner(u, v):
    """Minkowski inner product -u0 v0 + sum_i ui vi (broadcasts over leading axes)."""
    a, b = _arr(u), _arr(v)
    if a.shape[-1] != b.shape[-1]:
        raise InvalidInputError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    prod = a * b
    out = -prod[..., 0] + np.sum(prod[..., 1:], axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def lorentz_norm(v):
    """sqrt(|<v, v>|)."""
    return np.sqrt(np.abs(mink_inner(v, v)))


def classify(v, tol: float = CLASSIFY_TOL) -> CausalClass:
    """Causal character of v; the lightlike band is relative to |v|_Eucl^2."""
    a = _arr(v)
    q = mink_inner(a, a)
    band = tol * float(a @ a)
    if q > band:
        return CausalClass("spacelike")
    future = bool(a[0] > 0)  # <v, v0> = -v0
    if q < -band:
        return CausalClass("timelike", future)
    return CausalClass("lightlike", future)


def is_future_timelike(v, tol: float = CLASSIFY_TOL) -> bool:
    c = classify(v, tol)
    return c.tag == "timelike" and bool(c.future_directed)


def radial_project(v) -> HyperbolicPoint:
    """Map a future-directed timelike vector to v / |v| on the unit hyperboloid."""
    a = _arr(v)
    if not is_future_timelike(a):
        raise DomainError("radial projection needs a future-directed timelike vector")
    p = a / lorentz_norm(a)
    # re-solve the time coordinate so the sheet equation holds to rounding
    p[0] = math.sqrt(1.0 + float(p[1:] @ p[1:]))
    return HyperbolicPoint(MinkowskiVector(p))


def hyperbolic_dist(x, y, tol: float = SHEET_TOL):
    """Geodesic distance on the unit hyperboloid.

    Mathematically arccosh(-<x, y>); evaluated as 2 asinh(|x - y| / 2) with the
    Minkowski chord length, which keeps full precision for nearby points.
    Works on stacked points of shape (..., n+1).
    """
    a, b = _arr(x), _arr(y)
    c = -mink_inner(a, b)
    if np.any(np.asarray(c) < 1.0 - tol):
        raise DomainError("points are not on the future hyperboloid (-<x,y> < 1)")
    d = a - b
    chord2 = mink_inner(d, d)
    return 2.0 * np.arcsinh(np.sqrt(np.maximum(chord2, 0.0)) / 2.0)


def unit_ball_volume(n: int) -> float:
    """Volume of the n-dimensional Euclidean unit ball."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def nu_weight(t, n: int):
    """Radial density n V(B_1) sinh^{n-1}(t) of the hyperbolic measure."""
    t = np.asarray(t, dtype=np.float64)
    out = n * unit_ball_volume(n) * np.sinh(t) ** (n - 1)
    return float(out) if out.ndim == 0 else out


def ball_measure(t_star: float, n: int) -> float:
    """Closed-form hyperbolic measure of a geodesic ball of radius t_star (n <= 3)."""
    c = n * unit_ball_volume(n)
    if n == 1:
        return c * t_star
    if n == 2:
        return c * (math.cosh(t_star) - 1.0)
    if n == 3:
        return c * (math.sinh(2 * t_star) / 4 - t_star / 2)
    raise InvalidInputError("closed form implemented for n <= 3 only")


def reverse_triangle_check(u, v) -> float:
    """|u + v| - |u| - |v|; nonnegative for future timelike u, v."""
    a, b = _arr(u), _arr(v)
    if not (is_future_timelike(a) and is_future_timelike(b)):
        raise DomainError("reverse triangle inequality needs future timelike vectors")
    return float(lorentz_norm(a + b) - lorentz_norm(a) - lorentz_norm(b))


def random_future_timelike(rng, n: int, size: int, spread: float = 2.0) -> np.ndarray:
    """Random future timelike vectors: lambda * x with x on H and lambda in (0.1, 3)."""
    x = rng.normal(scale=spread, size=(size, n))
    t = np.sqrt(1.0 + np.sum(x * x, axis=1))
    lam = rng.uniform(0.1, 3.0, size=size)
    return lam[:, None] * np.column_stack([t, x])


def hyperboloid_points(rng, n: int, size: int, spread: float = 1.0) -> np.ndarray:
    x = rng.normal(scale=spread, size=(size, n))
    return np.column_stack([np.sqrt(1.0 + np.sum(x * x, axis=1)), x])
