"""Isoperimetric deficits, Fraenkel-type asymmetries and proof-chain checks.

All quantities are computed from the discrete atoms of a hypersurface.  The
domain measure mu(Omega) is the sum of the atom weights, *not* a closed form,
so that e.g. the relative volume excess is nonnegative exactly at the
discrete level: V >= min(f)^{n+1} * mu / (n+1) holds for any weighted sum.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateError, DomainError, EmptyDomainError
from .hypersurface import (
    Atoms,
    GraphHypersurface,
    RadialProfile,
    area,
    as_atoms,
    cone_volume,
    dist_origin,
    exhaustion_sequence,
    restrict,
)
from .kernels import l1_deviation_scan
from .median import weighted_median
from .quadrature import weighted_sum
from .scalar import L_function

TOL_ATOMIC = 1e-9
TOL_QUAD = 1e-6


def sigma(S) -> float:
    """V(C(pi(S))) = mu(pi(S)) / (n+1)."""
    a = as_atoms(S)
    return a.measure / (a.n + 1)


def fraenkel_radius(S) -> float:
    """Radius t_F of the hyperboloid cap with the same cone volume as S."""
    a = as_atoms(S)
    mu = a.measure
    if not mu > 0:
        raise DomainError("domain has zero measure")
    return ((a.n + 1) * cone_volume(a) / mu) ** (1.0 / (a.n + 1))


def sym_diff_volume(S, t: float) -> float:
    """V(C(S) delta B_t) = 1/(n+1) * integral |f^{n+1} - t^{n+1}| d mu."""
    if not t > 0:
        raise DomainError("t must be positive")
    a = as_atoms(S)
    return weighted_sum(a.weights, np.abs(a.f ** (a.n + 1) - t ** (a.n + 1))) / (a.n + 1)


def one_sided_volumes(S, t: float):
    """(V(C(S) minus B_t), V(B_t minus C(S)))."""
    a = as_atoms(S)
    d = a.f ** (a.n + 1) - t ** (a.n + 1)
    k = a.n + 1
    return weighted_sum(a.weights, np.maximum(d, 0.0)) / k, weighted_sum(a.weights, np.maximum(-d, 0.0)) / k


def fraenkel_asymmetry(S) -> float:
    a = as_atoms(S)
    return sym_diff_volume(a, fraenkel_radius(a)) / cone_volume(a)


def tilde_asymmetry(S):
    """(t~, A~_F): the L1-optimal cap radius and the normalized distance.

    The minimizer of t -> integral |g - t^{n+1}| is a weighted median of
    g = f^{n+1}; ties resolve to the lowest median.
    """
    a = as_atoms(S)
    g = a.f ** (a.n + 1)
    c = weighted_median(g, a.weights)
    t = c ** (1.0 / (a.n + 1))
    return t, sym_diff_volume(a, t) / cone_volume(a)


def tilde_asymmetry_grid(S, points: int = 10_000):
    """Brute-force minimum of the normalized symmetric difference over a
    log-uniform t grid spanning [min f, max f].  Returns (t, value, dc) with dc
    the largest spacing of the grid in g = t^{n+1}.
    """
    a = as_atoms(S)
    k = a.n + 1
    lo, hi = float(a.f.min()), float(a.f.max())
    t = np.array([lo]) if lo == hi else np.geomspace(lo, hi, points)
    c = t ** k
    vals = l1_deviation_scan(a.f ** k, a.weights, c) / k / cone_volume(a)
    j = int(np.argmin(vals))
    dc = float(np.max(np.diff(c))) if c.size > 1 else 0.0
    return float(t[j]), float(vals[j]), dc


@dataclass(frozen=True)
class DeficitReport:
    n: int
    V: float
    A: float
    d: float
    sigma: float
    t_F: float
    t_tilde: float
    delta_BE: float
    delta_CM: float
    delta_CM_star: float
    E: float
    A_F: float
    A_F_tilde: float

    def as_dict(self) -> dict:
        return asdict(self)

    def violations(self, tol: float = TOL_ATOMIC) -> list:
        """Names of invariants that fail beyond ``tol``."""
        out = []
        for name in ("delta_BE", "delta_CM", "delta_CM_star", "E"):
            if getattr(self, name) < -tol:
                out.append(f"{name} < 0")
        if self.E > 1 / (self.n + 1) + tol:
            out.append("E > 1/(n+1)")
        if self.A_F_tilde > self.A_F + tol:
            out.append("A_F_tilde > A_F")
        if self.A_F > 2 * self.A_F_tilde + tol:
            out.append("A_F > 2 A_F_tilde")
        if self.A_F_tilde > 1 + tol:
            out.append("A_F_tilde > 1")
        return out


def deficits(S) -> DeficitReport:
    a = as_atoms(S)
    n = a.n
    V = cone_volume(a)
    A = area(a)
    if not A > 0:
        raise DegenerateError("hypersurface has zero area (lightlike graph)")
    d = dist_origin(a)
    sig = a.measure / (n + 1)
    k = n + 1
    t_F = (k * V / a.measure) ** (1.0 / k)
    t_tilde, af_tilde = tilde_asymmetry(a)
    delta_BE = k * sig ** (1.0 / k) * V ** (n / k) / A - 1.0
    delta_CM = k * V / (A * d) - 1.0
    E = (V - d ** k * sig) / (k * V)
    return DeficitReport(
        n=n, V=V, A=A, d=d, sigma=sig, t_F=t_F, t_tilde=t_tilde,
        delta_BE=delta_BE, delta_CM=delta_CM, delta_CM_star=delta_CM - E, E=E,
        A_F=sym_diff_volume(a, t_F) / V, A_F_tilde=af_tilde,
    )


def deficit_relation_check(S, report: DeficitReport | None = None):
    """(identity residual, inequality gap) for the relation between deficits.

    residual = delta_CM - [(1 + delta_BE) (1 - (n+1)E)^{-1/(n+1)} - 1], zero up
    to rounding; gap = delta_CM - E - (1 + E) delta_BE >= 0.
    """
    r = deficits(S) if report is None else report
    k = r.n + 1
    if not r.E < 1.0 / k:
        raise DomainError("relative volume excess must be below 1/(n+1)")
    # 1 - (n+1)E = d^{n+1} sigma / V; the product form avoids the cancellation
    # in 1 - (n+1)E when E is close to 1/(n+1)
    base = r.d ** k * r.sigma / r.V
    predicted = (1.0 + r.delta_BE) * base ** (-1.0 / k) - 1.0
    return r.delta_CM - predicted, r.delta_CM - r.E - (1.0 + r.E) * r.delta_BE


def excess_asymmetry_check(S, report: DeficitReport | None = None) -> float:
    """2(n+1)E - A_F, nonnegative."""
    r = deficits(S) if report is None else report
    return 2 * (r.n + 1) * r.E - r.A_F


def _subset_atoms(S, node_subset) -> Atoms:
    if node_subset is None:
        return as_atoms(S)
    return as_atoms(restrict(S, node_subset))


def be_subset_check(S, node_subset=None) -> float:
    """(n+1) V(C(pi(B)))^{1/(n+1)} V(C(B))^{n/(n+1)} - A(B) for the atoms B."""
    b = _subset_atoms(S, node_subset)
    k = b.n + 1
    return k * (b.measure / k) ** (1.0 / k) * cone_volume(b) ** (b.n / k) - area(b)


@dataclass(frozen=True)
class ProofRoutes:
    """Intermediate slacks of the two proofs of the subset inequality.

    Hölder: A <= int g^{n/(n+1)} <= mu^{1/(n+1)} (int g)^{n/(n+1)}.
    Bernoulli: pointwise (1 + phi/gbar)^q <= 1 + q phi/gbar with phi = g - gbar.
    """

    gradient_slack: float
    holder_slack: float
    bernoulli_min_pointwise: float
    bernoulli_slack: float
    total_gap: float


def be_proof_routes(S, node_subset=None) -> ProofRoutes:
    b = _subset_atoms(S, node_subset)
    n, k = b.n, b.n + 1
    q = n / k
    g = b.f ** k
    mu = b.measure
    int_gq = weighted_sum(b.weights, g ** q)
    int_g = weighted_sum(b.weights, g)
    A = area(b)
    gbar = int_g / mu
    x = g / gbar - 1.0
    pointwise = 1.0 + q * x - (1.0 + x) ** q
    bern = gbar ** q * weighted_sum(b.weights, pointwise)
    return ProofRoutes(
        gradient_slack=int_gq - A,
        holder_slack=mu ** (1.0 / k) * int_g ** q - int_gq,
        bernoulli_min_pointwise=float(pointwise.min()),
        bernoulli_slack=bern,
        total_gap=be_subset_check(b),
    )


# ---------------------------------------------------------------------------
# median split


@dataclass(frozen=True)
class SplitChain:
    """Gaps of the median-split argument; every gap is nonnegative.

    ``subset_gap``      (n+1) sum_i (sigma/2 V_i^n)^{1/(n+1)} - A(S)
    ``minkowski_gap``   Minkowski step minus its quadratic lower bound, with the
                        (sigma/2)^{1/(n+1)} scaling and max(V_1, V_2)
    ``displayed_gap``   [(n+1)(sigma V^n)^{1/(n+1)} - A(S)] minus
                        sigma^{1/(n+1)} n/(4(n+1)) V^{-(n+2)/(n+1)} |V_1 - V_2|^2
    ``final_gap``       4(n+1)^2/n delta_BE V^2 - V(C(S) delta B_{t0})^2
    ``symdiff_residual`` V(C(S) delta B_{t0}) - |V_1 - V_2| (zero up to rounding)
    """

    t0: float
    V1: float
    V2: float
    sigma: float
    subset_gap: float
    minkowski_gap: float
    displayed_gap: float
    final_gap: float
    symdiff_residual: float

    def gaps(self) -> dict:
        return {"subset": self.subset_gap, "minkowski": self.minkowski_gap,
                "displayed": self.displayed_gap, "final": self.final_gap}


def _split_halves(a: Atoms):
    """Split the atoms at the weighted median of f into halves of equal mass.

    Returns index/weight arrays (lower, upper); the boundary atom is divided
    fractionally, standing in for a measurable split of the level set.
    """
    order = np.argsort(a.f, kind="stable")
    w = a.weights[order]
    cum = np.cumsum(w)
    half = 0.5 * a.measure
    k = min(int(np.searchsorted(cum, half, side="left")), w.size - 1)
    before = cum[k - 1] if k > 0 else 0.0
    w_low_k = min(max(half - before, 0.0), w[k])
    w_up_k = w[k] - w_low_k
    low_idx = list(order[:k])
    low_w = list(w[:k])
    up_idx = list(order[k + 1:])
    up_w = list(w[k + 1:])
    if w_low_k > 0:
        low_idx.append(order[k])
        low_w.append(w_low_k)
    if w_up_k > 0:
        up_idx.insert(0, order[k])
        up_w.insert(0, w_up_k)
    return (np.array(low_idx, dtype=np.int64), np.array(low_w)), \
           (np.array(up_idx, dtype=np.int64), np.array(up_w)), float(a.f[order[k]])


def median_split(S):
    """Split S into B1 (f below the median t0) and B2 (above), each of mass mu/2.

    Returns (B1, B2, SplitChain).  Either part can be empty only when a single
    atom carries all the mass; then that atom is halved.
    """
    a = as_atoms(S)
    if not a.measure > 0:
        raise EmptyDomainError("total mass is zero")
    (li, lw), (ui, uw), t0 = _split_halves(a)
    B1 = GraphHypersurface.atomic(lw, a.f[li], a.s[li], a.n)
    B2 = GraphHypersurface.atomic(uw, a.f[ui], a.s[ui], a.n)
    n, k = a.n, a.n + 1
    sig = a.measure / k
    V1, V2 = cone_volume(B1), cone_volume(B2)
    V = V1 + V2
    A = area(a)
    upper = k * (sig * V ** n) ** (1.0 / k)
    middle = k * ((sig / 2 * V1 ** n) ** (1.0 / k) + (sig / 2 * V2 ** n) ** (1.0 / k))
    diff2 = (V1 - V2) ** 2
    proven = k * (sig / 2) ** (1.0 / k) * n / (4 * k ** 2) * max(V1, V2) ** (-(n + 2) / k) * diff2
    displayed = sig ** (1.0 / k) * n / (4 * k) * V ** (-(n + 2) / k) * diff2
    delta_BE = upper / A - 1.0
    sd = sym_diff_volume(a, t0)
    chain = SplitChain(
        t0=t0, V1=V1, V2=V2, sigma=sig,
        subset_gap=middle - A,
        minkowski_gap=(upper - middle) - proven,
        displayed_gap=(upper - A) - displayed,
        final_gap=4 * k ** 2 / n * delta_BE * V ** 2 - sd ** 2,
        symdiff_residual=sd - abs(V1 - V2),
    )
    return B1, B2, chain


# ---------------------------------------------------------------------------
# stability bounds


@dataclass(frozen=True)
class StabilityGaps:
    brunn_minkowski: float
    cone_minkowski: float
    refined: float
    refined_sharp: float

    def as_dict(self) -> dict:
        return asdict(self)


def stability_constant(n: int) -> float:
    return 16 * (n + 1) ** 2 / n


def stability_check(S, report: DeficitReport | None = None) -> StabilityGaps:
    """Bound minus distance term for the four stability estimates.

    brunn_minkowski: 16(n+1)^2/n delta_BE - A_F^2;   cone_minkowski: 2(n+1) delta_CM - A_F;
    refined: 16(n+1)^2/n delta*_CM - A_F^2;  refined_sharp:  delta*_CM - L(1)/4 A_F^2.
    """
    r = deficits(S) if report is None else report
    c = stability_constant(r.n)
    af2 = r.A_F ** 2
    return StabilityGaps(
        brunn_minkowski=c * r.delta_BE - af2,
        cone_minkowski=2 * (r.n + 1) * r.delta_CM - r.A_F,
        refined=c * r.delta_CM_star - af2,
        refined_sharp=r.delta_CM_star - L_function(1.0, r.n) / 4 * af2,
    )


# ---------------------------------------------------------------------------
# exhaustion


@dataclass(frozen=True)
class ConvergenceTable:
    rows: list
    full: dict
    deviation: dict
    threshold: float
    volume_monotone: bool

    @property
    def converged(self) -> bool:
        return all(v <= self.threshold for v in self.deviation.values())


def exhaustion_convergence_check(P: RadialProfile, k_steps: int = 8,
                                 threshold: float = 1e-3) -> ConvergenceTable:
    """delta_BE, A_F and t_k along the exhaustion of P by smaller balls."""
    full_r = deficits(P)
    full = {"V": full_r.V, "delta_BE": full_r.delta_BE, "A_F": full_r.A_F, "t_F": full_r.t_F}
    rows = []
    for k, Pk in enumerate(exhaustion_sequence(P, k_steps), start=1):
        r = deficits(Pk)
        rows.append({"k": k, "t_max": Pk.t_star, "V": r.V, "delta_BE": r.delta_BE,
                     "A_F": r.A_F, "t_F": r.t_F})
    last = rows[-1]
    deviation = {key: abs(last[key] - full[key]) for key in ("delta_BE", "A_F", "t_F")}
    vols = [row["V"] for row in rows]
    monotone = all(b >= a for a, b in zip(vols, vols[1:]))
    return ConvergenceTable(rows, full, deviation, threshold, monotone)


# ---------------------------------------------------------------------------
# random instances for property runs


def random_radial_profile(rng, n: int, nodes: int = 2048, max_slope: float = 0.98,
                          modes: int = 4) -> RadialProfile:
    """Random admissible profile r = exp(h) with |h'| <= max_slope.

    h is a random trigonometric polynomial whose derivative amplitudes sum to
    at most ``max_slope``, so the graph is spacelike at every point.
    """
    t_star = float(rng.uniform(0.2, 2.0))
    k = np.arange(1, modes + 1)
    freq = k * rng.uniform(0.5, 4.0) / t_star
    amp = rng.dirichlet(np.ones(modes)) * rng.uniform(0.0, max_slope) / freq
    phase = rng.uniform(0, 2 * np.pi, modes)
    c0 = float(rng.normal(0.0, 1.0))

    def r(t):
        t = np.asarray(t, dtype=float)[..., None]
        return np.exp(c0 + np.sum(amp * np.sin(freq * t + phase), axis=-1))

    def r_prime(t):
        tt = np.asarray(t, dtype=float)[..., None]
        dh = np.sum(amp * freq * np.cos(freq * tt + phase), axis=-1)
        return r(t) * dh

    return RadialProfile(n, t_star, r, r_prime, nodes)


def random_atomic(rng, n: int, atoms: int | None = None) -> GraphHypersurface:
    m = int(rng.integers(2, 12)) if atoms is None else atoms
    w = rng.uniform(0.05, 2.0, m)
    f = np.exp(rng.normal(0.0, rng.uniform(0.01, 2.0), m))
    s = rng.uniform(0.0, 1.0, m) * rng.integers(0, 2)
    return GraphHypersurface.atomic(w, f, s, n)
