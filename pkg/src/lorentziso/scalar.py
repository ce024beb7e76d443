"""Scalar inequalities behind the stability proofs, and the refined-constant functionals.

Contents: the quantitative Jensen-type inequality and its series
coefficients, the quantitative Minkowski inequality, the auxiliary functions
L and L~ with the improved stability constant, Hölder-type stability
distances, the two-atom counterexample family and the quantitative Bernoulli
L^2 bound.  Sweep helpers return column dictionaries ready for CSV output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import binom

from .errors import DomainError, InvalidInputError, PreconditionError
from .median import l1_residual, weighted_median

# ---------------------------------------------------------------------------
# quantitative Jensen


def _check_jensen_domain(a, p):
    a = np.asarray(a, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if np.any(~((a > 0) & (a <= 1))) or np.any(~((p > 0) & (p < 1))):
        raise DomainError("jensen_gap needs a in (0, 1] and p in (0, 1)")
    return a, p


def jensen_gap(a, p):
    """((a+1)/2)^p - (a^p + 1)/2 and the lower bound p(1-p)/8 (1-a)^2.

    Evaluated through expm1/log so the gap keeps relative accuracy near a = 1.
    Broadcasts over array arguments.
    """
    a, p = _check_jensen_domain(a, p)
    gap = np.expm1(p * np.log((a + 1) / 2)) - 0.5 * np.expm1(p * np.log(a))
    bound = p * (1 - p) / 8 * (1 - a) ** 2
    if gap.ndim == 0:
        return float(gap), float(bound)
    return gap, bound


def jensen_series_coefficients(p: float, i_max: int) -> np.ndarray:
    """Coefficients of b^i, i = 0..i_max, in the expansion of the Jensen gap at a = 1 + b.

    coeff(i) = binom(p, i) (2^{-i} - 1/2); coeff(0) = coeff(1) = 0 and
    coeff(2) = p(1-p)/8.
    """
    if not 0 < p < 1:
        raise DomainError("p must lie in (0, 1)")
    if i_max < 3:
        raise InvalidInputError("i_max must be at least 3")
    i = np.arange(i_max + 1)
    c = binom(p, i) * (2.0 ** (-i) - 0.5)
    c[0] = 0.0  # 1 - 1/2 - 1/2 from the constant terms
    return c


# ---------------------------------------------------------------------------
# quantitative Minkowski


def minkowski_gap(a, b, n: int):
    """Gap (2(a+b)^n)^{1/(n+1)} - (a^{n/(n+1)} + b^{n/(n+1)}) and its quadratic lower bound."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if np.any(a <= 0) or np.any(b <= 0):
        raise DomainError("minkowski_gap needs positive a and b")
    q = n / (n + 1)
    gap = (2 * (a + b) ** n) ** (1 / (n + 1)) - (a ** q + b ** q)
    bound = n / (4 * (n + 1) ** 2) * np.maximum(a, b) ** (-(n + 2) / (n + 1)) * (b - a) ** 2
    if gap.ndim == 0:
        return float(gap), float(bound)
    return gap, bound


# ---------------------------------------------------------------------------
# auxiliary functions for the refined CM stability constant


def L_function(a, n: int):
    """L(a) = (1+a)^{-1/(n+1)} + a/(n+1) - 1 on (-1, inf)."""
    a = np.asarray(a, dtype=np.float64)
    if np.any(a <= -1):
        raise DomainError("L is defined for a > -1")
    out = np.expm1(-np.log1p(a) / (n + 1)) + a / (n + 1)
    return float(out) if out.ndim == 0 else out


def L_tilde(a, n: int):
    """(L(a) - L(1) a^2) (1+a)^{1/(n+1)} on [0, 1]."""
    a = np.asarray(a, dtype=np.float64)
    if np.any((a < 0) | (a > 1)):
        raise DomainError("L_tilde is defined on [0, 1]")
    out = (L_function(a, n) - L_function(1.0, n) * a * a) * (1 + a) ** (1 / (n + 1))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ImprovedConstant:
    n: int
    c_improved: float
    c_basic: float
    identity_residual: float

    @property
    def ratio_normalized(self):
        """(c_improved / (n+1), c_basic / (n+1))."""
        return self.c_improved / (self.n + 1), self.c_basic / (self.n + 1)


ASYMPTOTIC_IMPROVED = 4.0 / (1.0 - math.log(2.0))


def improved_constant(n: int) -> ImprovedConstant:
    """Stability constant 4 / L(1) of the refined CM inequality versus 16 (n+1)^2 / n."""
    if n < 1:
        raise InvalidInputError("n must be a positive integer")
    c = 4.0 / L_function(1.0, n)
    closed = 1.0 / (2.0 ** (-(2 + 1 / (n + 1))) - n / (4 * (n + 1)))
    return ImprovedConstant(n, c, 16 * (n + 1) ** 2 / n, abs(c - closed) / abs(closed))


# ---------------------------------------------------------------------------
# Hölder-type stability distances


def holder_exponents(n: int) -> dict:
    """The three supported exponents p with their constants beta(p)."""
    return {
        "conjugate": ((n + 1) / n, 4.0 * n),
        "power": (float(n + 1), float((n + 1) * 2 ** n)),
        "two": (2.0, float(n + 1)),
    }


def holder_beta(p: float, n: int) -> float:
    """beta(p); for n = 1 all three exponents equal 2 and the largest constant is used."""
    matches = [beta for q, beta in holder_exponents(n).values() if math.isclose(p, q, rel_tol=1e-12)]
    if not matches:
        raise InvalidInputError(f"unsupported exponent p={p} for n={n}")
    return max(matches)


@dataclass(frozen=True)
class HolderDistance:
    p: float
    distance: float
    beta: float
    center: float
    rhs: float | None = None

    @property
    def slack(self) -> float | None:
        """rhs - distance / beta, or None when no deficit was supplied."""
        if self.rhs is None:
            return None
        return self.rhs - self.distance / self.beta


def holder_stability_distance(values, weights, p: float, n: int, delta_be: float | None = None,
                              xatol: float = 1e-10) -> HolderDistance:
    """inf_c ||(g/gbar)^{1/p} - c||_{L^p}^{max(p,2)} for atomic g.

    Norms are taken against the normalized measure mu / mu(Omega); with the
    raw measure the bound against delta/(1+delta) is not scale free and fails.
    The objective is convex in c, minimized over [min, max] of (g/gbar)^{1/p}.
    """
    beta = holder_beta(p, n)
    g = np.asarray(values, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if np.any(g <= 0) or np.any(w <= 0):
        raise DomainError("g and the weights must be positive")
    prob = w / w.sum()
    gbar = float(prob @ g)
    u = (g / gbar) ** (1.0 / p)
    if math.isclose(p, 2.0):
        c = float(prob @ u)
        norm_p = float(prob @ (u - c) ** 2)
    elif np.ptp(u) == 0:
        c, norm_p = float(u[0]), 0.0
    else:
        res = minimize_scalar(lambda c: float(prob @ np.abs(u - c) ** p), method="bounded",
                              bounds=(float(u.min()), float(u.max())), options={"xatol": xatol})
        c, norm_p = float(res.x), float(res.fun)
    # ||.||_p^{max(p,2)} = (sum |.|^p)^{max(p,2)/p}
    dist = norm_p ** (max(p, 2.0) / p)
    rhs = None if delta_be is None else delta_be / (1 + delta_be)
    return HolderDistance(p, dist, beta, c, rhs)


# ---------------------------------------------------------------------------
# counterexample family


@dataclass(frozen=True)
class StepFunctionPair:
    j: int

    def __post_init__(self):
        if self.j < 1:
            raise DomainError("j must be at least 1")

    @property
    def values(self):
        j = self.j
        return (j + 1) / math.sqrt(2 * j), (j - 1 / j) / math.sqrt(2 * j)

    @property
    def masses(self):
        return 1.0, float(self.j)


def counterexample_family(j: int):
    """(inf_c ||f_j - c||_{L^2(U_j)}, inf_c ||f_j^2 - c||_{L^1(U_j)}) for the two-level family.

    U_j has pieces of length 1 and j; the L^2 optimum is the weighted mean and
    the L^1 optimum the weighted median.
    """
    pair = StepFunctionPair(int(j))
    f = np.array(pair.values)
    m = np.array(pair.masses)
    mean = float(m @ f / m.sum())
    l2 = math.sqrt(float(m @ (f - mean) ** 2))
    sq = f * f
    l1 = l1_residual(sq, m, weighted_median(sq, m))
    return l2, l1


# ---------------------------------------------------------------------------
# quantitative Bernoulli


BERNOULLI_C_TILDE = 1.0 / 16.0
BERNOULLI_LAMBDA = 1.0 / 100.0


@dataclass(frozen=True)
class BernoulliReport:
    lhs: float
    rhs: float

    @property
    def gap(self) -> float:
        return self.rhs - self.lhs


def bernoulli_l2_check(S, lambda_cap: float = BERNOULLI_LAMBDA,
                       c_tilde: float = BERNOULLI_C_TILDE) -> BernoulliReport:
    """c~ * inf_c ||g/gbar - c||^2_{L^2} / mu(Omega) <= delta_BE / (1 + delta_BE).

    Only for perturbations with sup|g - gbar| <= lambda_cap * gbar.  The
    second-order Bernoulli constant is n / (2 (n+1)^2), so c~ must stay below it.
    """
    from .functionals import deficits
    from .hypersurface import as_atoms

    a = as_atoms(S)
    n = a.n
    if not c_tilde < n / (2 * (n + 1) ** 2):
        raise PreconditionError(f"c_tilde={c_tilde} is not below n/(2(n+1)^2) for n={n}")
    g = a.f ** (n + 1)
    prob = a.weights / a.weights.sum()
    gbar = float(prob @ g)
    if np.max(np.abs(g - gbar)) > lambda_cap * gbar:
        raise PreconditionError("perturbation exceeds the pointwise cap lambda * gbar")
    h = g / gbar
    var = float(prob @ (h - prob @ h) ** 2)
    d = deficits(S).delta_BE
    return BernoulliReport(c_tilde * var, d / (1 + d))


# ---------------------------------------------------------------------------
# sweeps


def half_step_grid(count: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Cell midpoints of [lo, hi]; avoids both endpoints."""
    return lo + (hi - lo) * (np.arange(count) + 0.5) / count


def right_end_grid(count: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Right cell edges of [lo, hi]; avoids lo, includes hi."""
    return lo + (hi - lo) * (np.arange(count) + 1.0) / count


def jensen_sweep(n_a: int = 200, n_p: int = 200) -> dict:
    a = right_end_grid(n_a)
    p = half_step_grid(n_p)
    A, P = np.meshgrid(a, p, indexing="ij")
    gap, bound = jensen_gap(A.ravel(), P.ravel())
    return {"a": A.ravel(), "p": P.ravel(), "n": np.zeros(A.size, dtype=int),
            "gap": gap, "bound": bound, "slack": gap - bound,
            "exact": A.ravel() == 1.0}


def minkowski_sweep(n_grid: int = 200, n_values=(1, 2, 3), upper: float = 10.0) -> dict:
    x = right_end_grid(n_grid, 0.0, upper)
    A, B = np.meshgrid(x, x, indexing="ij")
    cols = {k: [] for k in ("a", "b", "n", "gap", "bound", "slack", "exact")}
    for n in n_values:
        gap, bound = minkowski_gap(A.ravel(), B.ravel(), n)
        cols["a"].append(A.ravel())
        cols["b"].append(B.ravel())
        cols["n"].append(np.full(A.size, n))
        cols["gap"].append(gap)
        cols["bound"].append(bound)
        cols["slack"].append(gap - bound)
        cols["exact"].append(A.ravel() == B.ravel())
    return {k: np.concatenate(v) for k, v in cols.items()}


def improved_constant_table(n_max: int = 100) -> dict:
    rows = [improved_constant(n) for n in range(1, n_max + 1)]
    return {
        "n": np.array([r.n for r in rows]),
        "c_improved": np.array([r.c_improved for r in rows]),
        "c_basic": np.array([r.c_basic for r in rows]),
        "c_improved_normalized": np.array([r.ratio_normalized[0] for r in rows]),
        "c_basic_normalized": np.array([r.ratio_normalized[1] for r in rows]),
        "identity_residual": np.array([r.identity_residual for r in rows]),
    }
