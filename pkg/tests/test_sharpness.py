import csv
import io
import json

import numpy as np
import pytest

from lorentziso import sharpness as sh
from lorentziso.errors import AdmissibilityError, InvalidInputError, PreconditionError
from lorentziso.functionals import deficits, stability_check
from lorentziso.hypersurface import cone_volume, area
from lorentziso.minkowski import ball_measure

N, T = 2, 1.0


@pytest.fixture(scope="module")
def phi():
    return sh.mean_zero_projection(sh.default_bump(), N, T)


@pytest.fixture(scope="module")
def ladder():
    return sh.run_ladder()


class TestBumps:
    def test_default_bump_support_and_flatness(self):
        b = sh.default_bump()
        t = np.array([0.0, 0.3, 0.5, 0.7, 0.9])
        np.testing.assert_allclose(b.phi(t), [0, 0, np.exp(-4), 0, 0])
        assert b.phi(np.array([0.301]))[0] < 1e-100

    def test_derivative_finite_difference(self, phi):
        t = np.linspace(0.31, 0.69, 39)
        h = 1e-6
        fd = (phi.phi(t + h) - phi.phi(t - h)) / (2 * h)
        np.testing.assert_allclose(phi.phi_prime(t), fd, atol=1e-8)

    def test_plateau(self):
        chi = sh.plateau((0.3, 0.7))
        assert chi.phi(np.array([0.5]))[0] == 1.0
        assert chi.phi(np.array([0.3, 0.7, 0.1]))[0] == 0.0

    def test_invalid_support(self):
        with pytest.raises(InvalidInputError):
            sh.default_bump((0.0, 0.5))


class TestProjection:
    def test_mean_zero(self, phi):
        assert abs(sh.nu_integral(phi.phi, N, T)) <= 1e-10 * ball_measure(T, N)

    def test_idempotent(self, phi):
        again = sh.mean_zero_projection(phi, N, T)
        t = np.linspace(0, 1, 1001)
        assert np.max(np.abs(again.phi(t) - phi.phi(t))) <= 1e-12

    def test_changes_sign(self, phi):
        v = phi.phi(np.linspace(0.3, 0.7, 1001))
        assert v.min() < 0 < v.max()


class TestPerturbation:
    def test_zero_eps_is_hyperboloid(self, phi):
        r = deficits(sh.build_perturbation(phi, 0.0, N, T))
        for name in ("delta_BE", "delta_CM", "delta_CM_star", "E", "A_F", "A_F_tilde"):
            assert abs(getattr(r, name)) <= 1e-12

    def test_admissible(self, phi):
        sh.build_perturbation(phi, 1e-2, N, T)

    def test_too_large(self):
        with pytest.raises(AdmissibilityError) as exc:
            sh.build_perturbation(sh.default_bump(), 10.0, N, T)
        assert exc.value.node is not None


class TestExpansion:
    def test_first_order_vanishes(self, phi):
        c = sh.analytic_expansion(phi, N, T)
        assert abs(c.V1) <= 1e-10 and abs(c.A1) <= 1e-10
        assert c.dCMstar2 > 0 and c.dCM2 > 0
        assert c.dCM1 == -c.dist1 > 0

    def test_requires_mean_zero(self):
        with pytest.raises(PreconditionError):
            sh.analytic_expansion(sh.default_bump(), N, T)

    @pytest.mark.parametrize("eps", [1e-3, 5e-4])
    def test_richardson(self, phi, eps):
        c = sh.analytic_expansion(phi, N, T)

        def second(F, h):
            return (F(h) - 2 * F(0.0) + F(-h)) / h ** 2

        def first(F, h):
            return (F(h) - F(-h)) / (2 * h)

        V = lambda e: cone_volume(sh.build_perturbation(phi, e, N, T))
        A = lambda e: area(sh.build_perturbation(phi, e, N, T))
        for F, c1, c2 in ((V, c.V1, c.V2), (A, c.A1, c.A2)):
            d2 = (4 * second(F, eps / 2) - second(F, eps)) / 3
            assert d2 / 2 == pytest.approx(c2, rel=1e-4)
            d1 = (4 * first(F, eps / 2) - first(F, eps)) / 3
            assert abs(d1 - c1) <= 1e-8

    def test_second_order_deficits(self, phi):
        c = sh.analytic_expansion(phi, N, T)
        e = 1e-3
        r = deficits(sh.build_perturbation(phi, e, N, T))
        assert (r.delta_CM - c.dCM1 * e) / e ** 2 == pytest.approx(c.dCM2, rel=1e-4)
        assert r.delta_CM_star / e ** 2 == pytest.approx(c.dCMstar2, rel=1e-4)
        # the shorter mean form misses the inf(phi)^2 contributions
        assert c.dCMstar2_mean_form < 0.5 * c.dCMstar2

    def test_cubic_remainder(self, phi, ladder):
        c = sh.analytic_expansion(phi, N, T)
        eps = ladder.epsilons
        resV = [abs(r.V - c.V0 - c.V2 * e * e) for r, e in zip(ladder.reports, eps)]
        resA = [abs(r.A - c.A0 - c.A2 * e * e) for r, e in zip(ladder.reports, eps)]
        for res, scale in ((resV, c.V0), (resA, c.A0)):
            K = 2 * res[0] / eps[0] ** 3
            assert all(r <= K * e ** 3 + 1e-14 * scale for r, e in zip(res, eps))


class TestLadder:
    def test_slopes(self, ladder):
        f = ladder.fitted_exponents
        assert f["delta_BE"] == pytest.approx(2, abs=0.1)
        assert f["delta_CM"] == pytest.approx(1, abs=0.1)
        assert f["delta_CM_star"] == pytest.approx(2, abs=0.1)

    def test_eps_slopes(self, ladder):
        e = ladder.eps_exponents
        assert e["delta_CM"] == pytest.approx(1, abs=0.05)
        assert e["delta_CM_star"] == pytest.approx(2, abs=0.05)

    def test_af_limit(self, ladder):
        c = ladder.analytic_coefficients
        assert ladder.af_over_eps[-1] >= 0.99 * c.AF_lower_coeff
        assert ladder.af_over_eps[-1] == pytest.approx(c.AF_limit_coeff, rel=1e-4)
        assert ladder.af_lower_fit_C >= 0

    def test_ratio(self, ladder):
        assert ladder.ratio_star_smallest == pytest.approx(ladder.ratio_star_predicted, rel=0.1)

    def test_invariants_every_point(self, ladder):
        for r in ladder.reports:
            assert r.violations(1e-12) == []
            assert all(v >= -1e-12 for v in stability_check(None, r).as_dict().values())

    def test_csv(self, ladder):
        rows = list(csv.reader(io.StringIO(ladder.to_csv())))
        assert tuple(rows[0]) == sh.CSV_COLUMNS
        assert len(rows) == 9
        assert float(rows[1][0]) == ladder.epsilons[0]

    def test_summary(self, ladder):
        s = json.loads(ladder.summary_json())
        assert set(s["fitted_exponents"]) == {"delta_BE", "delta_CM", "delta_CM_star"}
        assert s["analytic_coefficients"]["dCMstar2"] > 0

    @pytest.mark.parametrize("eps", [[0.0], [1e-2], [1e-3, 1e-2], [1e-2, 0.0]])
    def test_invalid_ladders(self, eps):
        with pytest.raises(InvalidInputError):
            sh.run_ladder(epsilons=eps)

    def test_other_dimension(self):
        L = sh.run_ladder(n=3)
        assert L.fitted_exponents["delta_BE"] == pytest.approx(2, abs=0.1)
