"""Perturbations r_eps = 1 + eps * phi of a hyperboloid cap and their scaling.

For a mean-zero bump phi the deficits behave like
delta_BE ~ eps^2, delta_CM ~ eps, delta*_CM ~ eps^2 while A_F ~ eps, which
pins the exponents 2, 1, 2 of the stability estimates.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import AdmissibilityError, InvalidInputError, PreconditionError
from .functionals import DeficitReport, deficits
from .hypersurface import DEFAULT_RADIAL_NODES, RadialProfile, check_achronal
from .minkowski import nu_weight
from .quadrature import gauss_legendre_composite, weighted_sum

DEFAULT_SUPPORT = (0.3, 0.7)
DEFAULT_T_STAR = 1.0
DEFAULT_N = 2
DEFAULT_EPSILONS = tuple(np.logspace(-1.5, -3.0, 8))
CSV_COLUMNS = ("eps", "V", "A", "dist", "t_F", "delta_BE", "delta_CM", "delta_CM_star",
               "E", "A_F", "A_F_tilde")


def _psi(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _dpsi(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos]) / x[pos] ** 2
    return out


def smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    a, b = _psi(x), _psi(1.0 - np.asarray(x, dtype=float))
    return a / (a + b)


def smooth_step_prime(x):
    x = np.asarray(x, dtype=float)
    a, b = _psi(x), _psi(1.0 - x)
    da, db = _dpsi(x), _dpsi(1.0 - x)
    return (da * b + a * db) / (a + b) ** 2


@dataclass(frozen=True, eq=False)
class BumpFunction:
    """Smooth phi with compact support inside (0, t_star), flat at t = 0."""

    phi: Callable
    phi_prime: Callable
    support: tuple

    def __post_init__(self):
        a, b = self.support
        if not 0 < a < b:
            raise InvalidInputError("support must be a subinterval of (0, t_star) away from 0")

    def __call__(self, t):
        return self.phi(t)


def default_bump(support=DEFAULT_SUPPORT) -> BumpFunction:
    """exp(-1/(s(1-s))) with s = (t - a)/(b - a) on [a, b], zero elsewhere."""
    a, b = support
    width = b - a

    def phi(t):
        s = (np.asarray(t, dtype=float) - a) / width
        inside = (s > 0) & (s < 1)
        out = np.zeros_like(s)
        si = s[inside]
        out[inside] = np.exp(-1.0 / (si * (1 - si)))
        return out

    def phi_prime(t):
        s = (np.asarray(t, dtype=float) - a) / width
        inside = (s > 0) & (s < 1)
        out = np.zeros_like(s)
        si = s[inside]
        out[inside] = np.exp(-1.0 / (si * (1 - si))) * (1 - 2 * si) / (si * (1 - si)) ** 2 / width
        return out

    return BumpFunction(phi, phi_prime, (a, b))


def plateau(support, edge: float = 0.25) -> BumpFunction:
    """Smooth plateau on ``support``: rises over the first ``edge`` fraction, falls over the last."""
    a, b = support
    width = b - a

    def chi(t):
        s = (np.asarray(t, dtype=float) - a) / width
        return smooth_step(s / edge) * smooth_step((1 - s) / edge)

    def chi_prime(t):
        s = (np.asarray(t, dtype=float) - a) / width
        up, down = smooth_step(s / edge), smooth_step((1 - s) / edge)
        return (smooth_step_prime(s / edge) * down - up * smooth_step_prime((1 - s) / edge)) / (edge * width)

    return BumpFunction(chi, chi_prime, (a, b))


def nu_integral(func, n: int, t_star: float, nodes: int = DEFAULT_RADIAL_NODES) -> float:
    t, w = gauss_legendre_composite(0.0, t_star, nodes)
    return weighted_sum(w * nu_weight(t, n), func(t))


def mean_zero_projection(phi: BumpFunction, n: int, t_star: float,
                         nodes: int = DEFAULT_RADIAL_NODES) -> BumpFunction:
    """phi - c chi with chi a plateau on the same support and c = int phi / int chi."""
    total = nu_integral(phi.phi, n, t_star, nodes)
    scale = nu_integral(lambda t: np.abs(phi.phi(t)), n, t_star, nodes)
    if abs(total) <= 1e-12 * max(scale, 1e-300):
        return phi
    chi = plateau(phi.support)
    c = total / nu_integral(chi.phi, n, t_star, nodes)
    return BumpFunction(lambda t: phi.phi(t) - c * chi.phi(t),
                        lambda t: phi.phi_prime(t) - c * chi.phi_prime(t),
                        phi.support)


def build_perturbation(phi: BumpFunction, eps: float, n: int, t_star: float,
                       nodes: int = DEFAULT_RADIAL_NODES) -> RadialProfile:
    """RadialProfile r = 1 + eps phi; raises if |r'| < r fails at some node.

    Negative eps is allowed (it perturbs by -phi), which central differences use.
    """
    if not math.isfinite(eps):
        raise InvalidInputError("eps must be finite")
    f, fp = phi.phi, phi.phi_prime
    P = RadialProfile(n, t_star, lambda t: 1.0 + eps * f(t), lambda t: eps * fp(t), nodes)
    t = P.nodes
    r = 1.0 + eps * f(t)
    if np.any(r <= 0):
        i = int(np.argmin(r))
        raise AdmissibilityError(f"r_eps is not positive at t={t[i]:.6g}", node=(i, float(t[i])))
    report = check_achronal(P, slack=0.0)
    if not report.admissible:
        i, s, ti = report.violations[0]
        raise AdmissibilityError(
            f"spacelike condition fails at t={ti:.6g} (|r'|/r = {s:.6g}); "
            f"{len(report.violations)} violating nodes", node=(i, ti))
    return P


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficients of V, A, dist and the deficits in powers of eps.

    dCM2 and dCMstar2 are the full second-order coefficients of delta_CM and
    delta*_CM = delta_CM - E; dCMstar2_mean_form is the shorter expression
    (1/(2 A0)) mean(2n phi^2 + phi'^2), which drops the inf(phi)^2 terms and
    the second-order part of E.
    """

    V0: float
    V1: float
    V2: float
    A0: float
    A1: float
    A2: float
    dist1: float
    mean_abs_phi: float
    AF_lower_coeff: float
    AF_limit_coeff: float
    dCM1: float
    dCM2: float
    dCMstar2: float
    dCMstar2_mean_form: float


def analytic_expansion(phi: BumpFunction, n: int, t_star: float,
                       nodes: int = DEFAULT_RADIAL_NODES, mean_tol: float = 1e-9) -> ExpansionCoefficients:
    t, w = gauss_legendre_composite(0.0, t_star, nodes)
    w = w * nu_weight(t, n)
    p, dp = phi.phi(t), phi.phi_prime(t)
    mu = weighted_sum(w, np.ones_like(t))
    int_phi = weighted_sum(w, p)
    int_abs = weighted_sum(w, np.abs(p))
    if abs(int_phi) > mean_tol * max(int_abs, 1e-300):
        raise PreconditionError("analytic_expansion needs a mean-zero phi")
    int_p2 = weighted_sum(w, p * p)
    int_dp2 = weighted_sum(w, dp * dp)
    m = float(np.min(p))
    mean_abs = int_abs / mu
    return ExpansionCoefficients(
        V0=mu / (n + 1), V1=int_phi, V2=n / 2 * int_p2,
        A0=mu, A1=n * int_phi, A2=0.5 * (n * (n - 1) * int_p2 - int_dp2),
        dist1=m, mean_abs_phi=mean_abs,
        AF_lower_coeff=(n + 1) / 2 * mean_abs, AF_limit_coeff=(n + 1) * mean_abs,
        dCM1=-m,
        dCM2=m * m + (2 * n * int_p2 + int_dp2) / (2 * mu),
        dCMstar2=(n + 2) / 2 * m * m + (n * int_p2 + int_dp2) / (2 * mu),
        dCMstar2_mean_form=(2 * n * int_p2 + int_dp2) / mu / (2 * mu),
    )


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x)), np.log(np.asarray(y)), 1)[0])


@dataclass
class SharpnessLadder:
    epsilons: list
    reports: list
    fitted_exponents: dict
    diagnostic_exponents: dict
    eps_exponents: dict
    analytic_coefficients: ExpansionCoefficients
    af_over_eps: list
    af_lower_fit_C: float
    ratio_star_smallest: float
    ratio_star_predicted: float
    n: int = DEFAULT_N
    t_star: float = DEFAULT_T_STAR
    headline_points: int = 3

    def rows(self) -> list:
        out = []
        for eps, r in zip(self.epsilons, self.reports):
            out.append({"eps": eps, "V": r.V, "A": r.A, "dist": r.d, "t_F": r.t_F,
                        "delta_BE": r.delta_BE, "delta_CM": r.delta_CM,
                        "delta_CM_star": r.delta_CM_star, "E": r.E, "A_F": r.A_F,
                        "A_F_tilde": r.A_F_tilde})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows():
            writer.writerow([format(row[c], ".17g") for c in CSV_COLUMNS])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "n": self.n,
            "t_star": self.t_star,
            "epsilons": [float(e) for e in self.epsilons],
            "fitted_exponents": self.fitted_exponents,
            "diagnostic_exponents": self.diagnostic_exponents,
            "eps_exponents": self.eps_exponents,
            "analytic_coefficients": asdict(self.analytic_coefficients),
            "af_over_eps": [float(v) for v in self.af_over_eps],
            "af_lower_fit_C": self.af_lower_fit_C,
            "ratio_star_smallest": self.ratio_star_smallest,
            "ratio_star_predicted": self.ratio_star_predicted,
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)


def run_ladder(phi: BumpFunction | None = None, n: int = DEFAULT_N, t_star: float = DEFAULT_T_STAR,
               epsilons=DEFAULT_EPSILONS, nodes: int = DEFAULT_RADIAL_NODES,
               headline_points: int = 3, project: bool = True) -> SharpnessLadder:
    """Deficits along a decreasing eps ladder and the fitted log-log exponents.

    Headline exponents use the ``headline_points`` smallest eps; diagnostics
    use every point.
    """
    eps = [float(e) for e in epsilons]
    if len(eps) < 2 or any(e <= 0 for e in eps):
        raise InvalidInputError("a ladder needs at least two positive eps values")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise InvalidInputError("eps values must be strictly decreasing")
    if phi is None:
        phi = default_bump()
    if project:
        phi = mean_zero_projection(phi, n, t_star, nodes)
    coeffs = analytic_expansion(phi, n, t_star, nodes)
    reports: list[DeficitReport] = [deficits(build_perturbation(phi, e, n, t_star, nodes)) for e in eps]

    def column(name, idx):
        return [getattr(reports[i], name) for i in idx]

    head = list(range(len(eps)))[-headline_points:]
    every = list(range(len(eps)))
    af_head, af_all = column("A_F", head), column("A_F", every)
    fitted = {k: loglog_slope(af_head, column(k, head)) for k in ("delta_BE", "delta_CM", "delta_CM_star")}
    diag = {k: loglog_slope(af_all, column(k, every)) for k in ("delta_BE", "delta_CM", "delta_CM_star")}
    eps_exp = {k: loglog_slope(eps, column(k, every))
               for k in ("delta_BE", "delta_CM", "delta_CM_star", "A_F")}
    af_over_eps = [r.A_F / e for r, e in zip(reports, eps)]
    lower = coeffs.AF_lower_coeff
    # A_F >= eps * lower * (1 - C eps): smallest C that works on the ladder
    fit_C = max(0.0, max((1.0 - a / lower) / e for a, e in zip(af_over_eps, eps)))
    smallest = reports[-1]
    ratio = smallest.delta_CM_star / smallest.A_F ** 2
    predicted = coeffs.dCMstar2 / coeffs.AF_limit_coeff ** 2
    return SharpnessLadder(eps, reports, fitted, diag, eps_exp, coeffs, af_over_eps, fit_C,
                           ratio, predicted, n, t_star, headline_points)
