import math

import numpy as np
import pytest

from lorentziso import simplex as sx
from lorentziso.errors import DegenerateError, DomainError, InvalidInputError
from lorentziso.functionals import median_split
from lorentziso.minkowski import mink_inner, radial_project
from lorentziso.scalar import minkowski_gap

SEG = sx.SpacelikeSimplex([[2.0, -1.0], [2.0, 1.0]])
TRI = sx.SpacelikeSimplex([[2.0, 1, 0], [2, -1, 0], [2, 0, 1]])


def test_canonical_segment():
    assert sx.simplex_area(SEG) == pytest.approx(2.0, rel=1e-15)
    assert sx.cone_volume_simplex(SEG) == pytest.approx(2.0, rel=1e-15)
    assert sx.lorentzian_height(SEG) == pytest.approx(2.0, rel=1e-15)
    assert sx.cone_formula_check(SEG) == 0.0


def test_canonical_triangle():
    assert sx.simplex_area(TRI) == pytest.approx(1.0, rel=1e-15)
    assert sx.cone_volume_simplex(TRI) == pytest.approx(2 / 3, rel=1e-15)
    assert sx.lorentzian_height(TRI) == pytest.approx(2.0, rel=1e-15)
    assert sx.cone_formula_check(TRI) == pytest.approx(0.0, abs=1e-15)


def test_tilted_segment_height_brute_force():
    P = sx.SpacelikeSimplex([[2.0, -1.0], [3.0, 1.0]])
    h = sx.lorentzian_height(P)
    assert h == pytest.approx(5 / math.sqrt(3), rel=1e-14)
    s = np.linspace(-5, 5, 1_000_001)
    v = np.array([2.0, -1.0]) + s[:, None] * np.array([1.0, 2.0])
    q = v[:, 0] ** 2 - v[:, 1] ** 2
    assert h == pytest.approx(math.sqrt(q.max()), rel=1e-10)


def test_normal_is_future_unit_and_orthogonal():
    N = sx.future_unit_normal(TRI)
    assert N[0] > 0
    assert mink_inner(N, N) == pytest.approx(-1.0, abs=1e-14)
    assert np.allclose([mink_inner(e, N) for e in TRI.edges], 0, atol=1e-14)


def test_scaling():
    lam = 1.7
    P = sx.SpacelikeSimplex(lam * TRI.vertices)
    assert sx.lorentzian_height(P) == pytest.approx(lam * 2.0, rel=1e-14)
    assert sx.cone_volume_simplex(P) == pytest.approx(lam ** 3 * 2 / 3, rel=1e-14)


def test_invalid():
    with pytest.raises(DegenerateError):
        sx.SpacelikeSimplex([[3.0, 0, 0], [3, 1, 0], [3, 2, 0]])
    with pytest.raises(DomainError):
        sx.SpacelikeSimplex([[2.0, 0], [3, 0.5]])  # timelike edge
    with pytest.raises(DomainError):
        sx.SpacelikeSimplex([[1.0, 2.0], [2.0, 0.0]])  # spacelike vertex
    with pytest.raises(InvalidInputError):
        sx.SpacelikeSimplex([[1.0, 0, 0], [2.0, 0, 0]])


def test_projected_segment_exact():
    pm = sx.projected_measure(SEG)
    assert pm.value == pytest.approx(math.log(3.0), rel=1e-14)
    assert pm.stderr == 0.0


def _gauss_bonnet(P):
    x = [radial_project(v).array for v in P.vertices]
    total = 0.0
    for i in range(3):
        p, a, b = x[i], x[(i + 1) % 3], x[(i + 2) % 3]
        u = a + mink_inner(p, a) * p
        w = b + mink_inner(p, b) * p
        total += math.acos(mink_inner(u, w) / math.sqrt(mink_inner(u, u) * mink_inner(w, w)))
    return math.pi - total


def test_projected_triangle_gauss_bonnet(rng):
    for P in [TRI] + [sx.random_spacelike_simplex(rng, 2) for _ in range(5)]:
        pm = sx.projected_measure(P, 400_000, seed=3)
        assert abs(pm.value - _gauss_bonnet(P)) <= 5 * pm.stderr + 1e-12


def test_projected_measure_deterministic():
    a = sx.projected_measure(TRI, 10_000, seed=[1, 2])
    b = sx.projected_measure(TRI, 10_000, seed=[1, 2])
    assert a == b


def test_random_cone_formula(rng):
    for n in (1, 2, 3):
        for _ in range(100):
            P = sx.random_spacelike_simplex(rng, n)
            assert abs(sx.cone_formula_check(P)) <= 1e-10 * sx.cone_volume_simplex(P)


def test_containment(rng):
    for n in (1, 2, 3):
        for _ in range(10):
            P = sx.random_spacelike_simplex(rng, n)
            h = sx.lorentzian_height(P)
            pm = sx.projected_measure(P, 100_000, seed=1)
            gap = sx.containment_check(P, 100_000, seed=1)
            assert gap >= -5 * h ** (n + 1) * pm.stderr / (n + 1) - 1e-12


def test_containment_scales():
    lam = 1.3
    a = sx.containment_check(TRI, 50_000, seed=4)
    b = sx.containment_check(sx.SpacelikeSimplex(lam * TRI.vertices), 50_000, seed=4)
    assert b == pytest.approx(lam ** 3 * a, rel=1e-10)


class TestInduction:
    def test_proportional_equality(self):
        assert sx.induction_step_check(1.0, 2.0, 3.0, 6.0, 2) == pytest.approx(0.0, abs=1e-14)

    def test_matches_split_chain(self, two_level):
        sig = 2 / 3
        v = sx.induction_step_check(1 / 3, sig / 2, 8 / 3, sig / 2, 2)
        g, _ = minkowski_gap(1 / 3, 8 / 3, 2)
        assert v == pytest.approx((sig / 2) ** (1 / 3) * g, rel=1e-13)
        _, _, chain = median_split(two_level)
        assert (chain.V1, chain.V2) == (pytest.approx(1 / 3), pytest.approx(8 / 3))

    def test_random(self, rng):
        q = rng.uniform(1e-3, 10, size=(10_000, 4))
        for n in (1, 2, 3):
            assert min(sx.induction_step_check(*r, n) for r in q) >= -1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            sx.induction_step_check(0.0, 1.0, 1.0, 1.0, 2)
