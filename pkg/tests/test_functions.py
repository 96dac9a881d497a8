import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundary_lab.boundary_sets import AtomList, AtomMeasure, CantorMeasure, CantorSystem
from boundary_lab.complex_core import DiskPoint, herglotz_array, left_log
from boundary_lab.errors import NoExplicitLog, NonNegativeRealPart, QuadratureBudgetExceeded
from boundary_lab.functions import (
    TRANSFORM_BOUND,
    TRANSFORM_LOWER,
    Blaschke,
    Constant,
    MobiusComposed,
    Product,
    SingularInner,
    Transformed,
    analytic_log,
    blaschke_condition,
    blaschke_eval,
    corollary1_pipeline,
    function_from_json,
    lusin_function,
    psi_compose,
    singular_inner_eval,
    transform_g,
    transform_g_polar,
)

PI = math.pi
TWO_PI = 2 * PI
CANTOR8 = CantorSystem(0.0, TWO_PI, 1 / 3, 8)
ZEROS30 = [(1 - 2.0**-n) * cmath.exp(2.39996j * n) for n in range(1, 31)]


def cantor_atom_oracle(system, theta, eps):
    """-sum of mass * kernel over the 2**d outer endpoints, built straight from the arc list."""
    arcs = system.arcs(system.depth)
    atoms = np.array([lo if k % 2 == 0 else hi for k, (lo, hi) in enumerate(arcs)])
    k = herglotz_array(np.asarray(theta)[..., None], np.asarray(eps)[..., None], np.mod(atoms, TWO_PI))
    return -(k.sum(axis=-1)) / atoms.size


class TestBlaschke:
    def test_examples(self):
        assert blaschke_eval([], DiskPoint(0.7, 0.2)) == 1
        z = DiskPoint(1.1, 0.5)
        assert blaschke_eval([0], z) == pytest.approx(z.value)
        assert blaschke_eval([0.5], DiskPoint(0.0, 0.5)) == 0

    def test_direct_product(self):
        rng = np.random.default_rng(0)
        zeros = list(0.9 * rng.uniform(0, 1, 5) * np.exp(1j * rng.uniform(0, TWO_PI, 5)))
        for _ in range(50):
            z = DiskPoint(rng.uniform(0, TWO_PI), rng.uniform(0.01, 1))
            w = z.value
            direct = 1.0
            for a in zeros:
                direct *= abs(a) / a * (a - w) / (1 - a.conjugate() * w)
            assert blaschke_eval(zeros, z) == pytest.approx(direct, abs=1e-13)

    def test_unimodular_on_circle(self):
        b = Blaschke(tuple(ZEROS30[:8]) + (0.3j, -0.2))
        theta = np.linspace(0, TWO_PI, 200)
        assert np.allclose(np.abs(b.values(theta, 1e-15)), 1.0, atol=1e-12)

    @given(st.floats(0, TWO_PI, exclude_max=True), st.floats(1e-6, 1.0))
    def test_bounded(self, theta, eps):
        assert abs(blaschke_eval(ZEROS30, DiskPoint(theta, eps))) <= 1.0 + 1e-14

    def test_condition(self):
        oracle = math.fsum(1 - abs(a) for a in ZEROS30)
        assert blaschke_condition(ZEROS30) == pytest.approx(oracle, rel=1e-15)
        assert blaschke_condition(ZEROS30) == pytest.approx(0.99999999907, abs=1e-11)
        assert blaschke_condition([]) == 0

    def test_rejects_outside_zero(self):
        with pytest.raises(ValueError):
            Blaschke((1.0,))


class TestSingularInner:
    def test_single_atom_closed_form(self):
        mu = AtomMeasure((0.0,))
        for eps in (0.5, 0.1, 0.01):
            assert singular_inner_eval(mu, DiskPoint(0.0, eps)) == pytest.approx(
                math.exp(-(2 - eps) / eps), rel=1e-12
            )

    def test_at_origin(self):
        assert singular_inner_eval(AtomMeasure((1.0,), (0.7,)), DiskPoint(2.0, 1.0)) == pytest.approx(
            math.exp(-0.7)
        )
        assert singular_inner_eval(CantorMeasure(CANTOR8), DiskPoint(0.0, 1.0)) == pytest.approx(
            math.exp(-1), abs=1e-12
        )

    def test_cantor_matches_atom_oracle(self):
        rng = np.random.default_rng(5)
        theta = rng.uniform(0, TWO_PI, 400)
        eps = 2.0 ** -rng.uniform(0, 10, 400)
        rep = SingularInner(CantorMeasure(CANTOR8), tol=1e-10)
        got = rep.log_values(theta, eps)
        assert np.max(np.abs(got - cantor_atom_oracle(CANTOR8, theta, eps))) <= 1e-10

    def test_cantor_near_the_set(self):
        rep = SingularInner(CantorMeasure(CANTOR8), tol=1e-10)
        theta = np.array([0.0, 2 * PI / 3, 1e-5, PI])
        for eps in (2.0**-20, 2.0**-30):
            ref = cantor_atom_oracle(CANTOR8, theta, eps)
            got = rep.log_values(theta, eps)
            assert np.all(np.abs(got.real - ref.real) <= 1e-10 * np.maximum(1.0, np.abs(ref)))
            # Im h moves by ~ eps^-2 / 256 per radian of atom position; the oracle's atom at
            # 2*pi + ulp makes theta = 0 ill-conditioned, so compare it only away from the wrap
            far = theta > 0
            assert np.all(np.abs(got[far] - ref[far]) <= 1e-8 * np.maximum(1.0, np.abs(ref[far])))

    def test_depth_cap(self):
        rep = SingularInner(CantorMeasure(CantorSystem(0, 1, 0.3, 30)))
        with pytest.raises(QuadratureBudgetExceeded):
            rep.log_values(0.5, 0.1)

    def test_bounded_by_one(self):
        rep = SingularInner(CantorMeasure(CANTOR8))
        rng = np.random.default_rng(2)
        vals = rep.values(rng.uniform(0, TWO_PI, 2000), rng.uniform(1e-3, 1, 2000))
        assert np.all(np.abs(vals) < 1.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, TWO_PI, exclude_max=True), st.floats(0.01, 1.0))
    def test_zero_free(self, theta, eps):
        # |S| = exp(Re h) underflows once Re h < -745, so stay well clear of the atoms' radii
        assert singular_inner_eval(CantorMeasure(CANTOR8), DiskPoint(theta, eps)) != 0

    def test_log_is_left_half_plane_near_boundary(self):
        rep = SingularInner(CantorMeasure(CANTOR8))
        theta = np.linspace(0, TWO_PI, 300, endpoint=False)
        h = rep.log_values(theta, 2.0**-40)
        assert np.all(h.real < 0)


class TestAnalyticLog:
    def test_atom(self):
        h = analytic_log(SingularInner(AtomMeasure((0.0,))), DiskPoint(0.0, 0.5))
        assert h.value == pytest.approx(-3.0)

    def test_cantor_origin(self):
        h = analytic_log(SingularInner(CantorMeasure(CANTOR8)), DiskPoint(0.0, 1.0))
        assert h.value == pytest.approx(-1.0, abs=1e-12)

    def test_blaschke_refused(self):
        with pytest.raises(NoExplicitLog):
            analytic_log(Blaschke((0.5,)), DiskPoint(0.0, 0.5))
        with pytest.raises(NoExplicitLog):
            analytic_log(Product((Blaschke((0.5,)), SingularInner(AtomMeasure((0.0,))))), DiskPoint(0.0, 0.5))

    def test_constant_refused(self):
        with pytest.raises(NoExplicitLog):
            analytic_log(Constant(0.5), DiskPoint(0.0, 0.5))


class TestTransform:
    def test_examples(self):
        assert transform_g(-1) == pytest.approx(math.exp(PI), rel=1e-15)
        assert transform_g(-math.e) == pytest.approx(math.exp(PI) * complex(math.cos(1), -math.sin(1)), rel=1e-15)
        assert transform_g(-math.exp(TWO_PI)) == pytest.approx(math.exp(PI), rel=1e-14)
        assert transform_g(-3) == pytest.approx(
            math.exp(PI) * complex(math.cos(math.log(3)), -math.sin(math.log(3))), rel=1e-15
        )

    @given(st.floats(1e-50, 1e50), st.floats(PI / 2 + 1e-6, 1.5 * PI - 1e-6))
    def test_cycle(self, r, phi):
        h = cmath.rect(r, phi)
        assert transform_g(h) == pytest.approx(transform_g(h * math.exp(TWO_PI)), rel=1e-12)

    def test_rejects(self):
        with pytest.raises(NonNegativeRealPart):
            transform_g(1.0)

    @given(
        st.floats(1e-100, 1e100),
        st.floats(PI / 2 + 1e-6, 1.5 * PI - 1e-6),
    )
    def test_closed_forms_agree(self, r, phi):
        h = cmath.rect(r, phi)
        a, b = transform_g(h), transform_g_polar(h)
        assert abs(a - b) <= 1e-12 * abs(b)
        assert TRANSFORM_LOWER < abs(a) < TRANSFORM_BOUND
        assert abs(a) == pytest.approx(math.exp(left_log(h).imag), rel=1e-13)

    def test_lusin_single_atom_radius(self):
        g = lusin_function(AtomList((0.0,)))
        for k in range(3, 46):
            eps = 2.0**-k
            h = -(2 - eps) / eps
            expect = math.exp(PI) * cmath.exp(-1j * math.log(-h))
            assert g.evaluate(DiskPoint(0.0, eps)) == pytest.approx(expect, abs=1e-10)

    def test_transform_modulus_window(self):
        g = lusin_function(CANTOR8)
        rng = np.random.default_rng(4)
        vals = g.values(rng.uniform(0, TWO_PI, 3000), 2.0 ** -rng.uniform(0, 30, 3000))
        assert np.all((np.abs(vals) > TRANSFORM_LOWER) & (np.abs(vals) < TRANSFORM_BOUND))

    def test_refuses_blaschke_input(self):
        with pytest.raises(NoExplicitLog):
            Transformed(Blaschke((0.5,)))

    def test_refuses_unbounded_input(self):
        with pytest.raises(NoExplicitLog):
            Transformed(lusin_function(AtomList((0.0,))))


class TestCorollaryPipeline:
    def test_independent_of_zeros(self):
        f1 = SingularInner(CantorMeasure(CANTOR8))
        a = corollary1_pipeline([], f1)
        b = corollary1_pipeline([0, 0.5, (1 - 2.0**-5) * 1j], f1)
        rng = np.random.default_rng(9)
        th, ep = rng.uniform(0, TWO_PI, 100), rng.uniform(1e-6, 1, 100)
        assert np.max(np.abs(a.values(th, ep) - b.values(th, ep))) <= 1e-12

    def test_original_factorization(self):
        f1 = SingularInner(AtomMeasure((1.0,)))
        g = corollary1_pipeline([0.5], f1)
        f = g.original()
        z = DiskPoint(0.3, 0.4)
        assert f.evaluate(z) == pytest.approx(blaschke_eval([0.5], z) * f1.evaluate(z))
        assert f.evaluate(DiskPoint(0.0, 0.5)) == 0


class TestPsi:
    def test_single_atom_distance(self):
        rep = psi_compose(SingularInner(AtomMeasure((0.0,))), 1.0)
        xi = cmath.exp(1j)
        for k in range(3, 46):
            eps = 2.0**-k
            d = abs(rep.evaluate(DiskPoint(0.0, eps)) - xi)
            assert d < 2 * eps / (2 - eps) + 1e-12

    def test_unit_disk(self):
        rep = psi_compose(SingularInner(CantorMeasure(CANTOR8)), 0.25)
        rng = np.random.default_rng(6)
        vals = rep.values(rng.uniform(0, TWO_PI, 2000), 2.0 ** -rng.uniform(0, 20, 2000))
        assert np.all(np.abs(vals) <= 1.0 + 1e-15)

    def test_refuses_without_log(self):
        with pytest.raises(NoExplicitLog):
            MobiusComposed(Blaschke(()), 0.0)


class TestJson:
    def test_round_trip(self):
        reps = [
            SingularInner(CantorMeasure(CANTOR8), 1e-9),
            SingularInner(AtomMeasure((0.0, 1.0), (0.25, 0.75))),
            Blaschke((0.5, 0.25j)),
            Transformed(SingularInner(AtomMeasure((0.0,))), Blaschke((0.5,))),
            MobiusComposed(SingularInner(AtomMeasure((0.0,))), 1.5),
            Constant(0.5 - 0.25j),
            Product((Blaschke((0.1,)), Constant(1.0))),
        ]
        for rep in reps:
            assert function_from_json(rep.to_json()) == rep

    def test_unknown(self):
        with pytest.raises(ValueError):
            function_from_json({"type": "outer"})
