import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundary_lab.boundary_sets import AtomList, AtomMeasure, CantorSystem
from boundary_lab.errors import WindowTooLarge
from boundary_lab.functions import Blaschke, Constant, SingularInner, lusin_function
from boundary_lab.radial import (
    CONVERGED,
    INCONCLUSIVE,
    OSCILLATING,
    RadialTrace,
    TraceVerdict,
    ae_statistics,
    classify,
    default_schedule,
    diameter,
    oscillation_diameter,
    partial_product_l2_gap,
    probe,
    radial_sample,
    summarize,
)

PI = math.pi
ZEROS30 = [(1 - 2.0**-n) * cmath.exp(2.39996j * n) for n in range(1, 31)]


def trace(values, k0=3):
    values = np.asarray(values, dtype=complex)
    return RadialTrace(0.0, 2.0 ** -np.arange(k0, k0 + values.size, dtype=float), values)


class TestSchedule:
    def test_default(self):
        s = default_schedule()
        assert s.size == 43 and s[0] == 0.125 and s[-1] == 2.0**-45

    def test_rejects_non_decreasing(self):
        with pytest.raises(ValueError):
            RadialTrace(0.0, np.array([0.5, 0.5]), np.array([1, 1]))
        with pytest.raises(ValueError):
            radial_sample(Constant(1.0), 0.0, [0.1, 0.2])


class TestRadialSample:
    def test_single_atom_closed_form(self):
        rep = SingularInner(AtomMeasure((0.0,)))
        tr = radial_sample(rep, 0.0)
        expect = np.exp(-(2 - tr.eps_schedule) / tr.eps_schedule)
        assert np.allclose(tr.values, expect, rtol=1e-12, atol=0)
        # exp underflows to zero below eps ~ 2.7e-3; compare on the representable range
        head = tr.values[tr.eps_schedule > 2.7e-3].real
        assert np.all(np.diff(head) < 0)
        logs = rep.log_values(0.0, tr.eps_schedule).real
        assert np.all(np.diff(logs) < 0)

    def test_blaschke_zero_at_origin(self):
        tr = radial_sample(Blaschke((0,)), 0.4, [0.5, 0.25])
        assert np.allclose(tr.values, [0.5 * cmath.exp(0.4j), 0.75 * cmath.exp(0.4j)])


class TestClassify:
    def test_constant_converges(self):
        v = classify(trace(np.full(43, 0.3 + 0.1j)))
        assert v.kind == CONVERGED and v.limit == 0.3 + 0.1j and v.tail_diameter == 0

    def test_circle_oscillates(self):
        vals = [cmath.exp(1j * k) for k in range(43)]
        assert classify(trace(vals)).kind == OSCILLATING

    def test_inconclusive(self):
        vals = 0.1 * np.arange(43) / 43
        assert classify(trace(vals)).kind == INCONCLUSIVE

    def test_window_too_large(self):
        with pytest.raises(WindowTooLarge):
            classify(trace(np.ones(5)), window=12)

    def test_tolerance_order(self):
        with pytest.raises(ValueError):
            classify(trace(np.ones(20)), conv_tol=1.0, osc_tol=0.5)

    def test_lusin_atom_oscillates(self):
        tr = radial_sample(lusin_function(AtomList((0.0,))), 0.0)
        v = classify(tr)
        assert v.kind == OSCILLATING and v.tail_diameter > math.exp(PI / 2)

    @given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=12, max_size=43))
    def test_verdict_consistent_with_diameter(self, vals):
        v = classify(trace(vals))
        d = diameter(vals[-12:])
        assert v.tail_diameter == pytest.approx(d)
        assert (v.kind == CONVERGED) == (d < 1e-6)
        assert (v.kind == OSCILLATING) == (d > 1.0)


class TestOscillationDiameter:
    def test_lusin_atom_matches_sweep(self):
        # g = e^pi e^{-i log((2-eps)/eps)} on the radius; the diameter is a chord of a circle of radius e^pi
        tr = radial_sample(lusin_function(AtomList((0.0,))), 0.0)
        eps = tr.eps_schedule[20:]
        phases = -np.log((2 - eps) / eps)
        pts = math.exp(PI) * np.exp(1j * phases)
        oracle = np.abs(pts[:, None] - pts[None, :]).max()
        assert oscillation_diameter(tr, 20) == pytest.approx(oracle, rel=1e-10)
        assert oracle > math.exp(PI / 2)

    def test_range(self):
        with pytest.raises(ValueError):
            oscillation_diameter(trace(np.ones(4)), 4)


class TestProbe:
    def test_order_and_threads(self):
        rep = lusin_function(CantorSystem(0, 2 * PI, 1 / 3, 6))
        thetas = np.linspace(0, 2 * PI, 17, endpoint=False)
        a = probe(rep, thetas, threads=1)
        b = probe(rep, thetas, threads=4)
        assert [t.theta for t, _ in a] == pytest.approx(list(thetas))
        for (ta, va), (tb, vb) in zip(a, b):
            assert np.array_equal(ta.values, tb.values) and va == vb


class TestAeStatistics:
    def test_blaschke_family(self):
        thetas = 2 * PI * np.arange(2000) / 2000
        s = ae_statistics(Blaschke(tuple(ZEROS30)), thetas)
        assert s.converged_fraction >= 0.99
        # oracle: direct product at eps = 1e-6
        z = (1 - 1e-6) * np.exp(1j * thetas)
        direct = np.ones_like(z)
        for a in ZEROS30:
            direct *= abs(a) / a * (a - z) / (1 - a.conjugate() * z)
        oracle_median = float(np.median(np.abs(direct)))
        assert oracle_median >= 0.9
        assert s.median_modulus >= 0.9
        assert s.median_modulus >= oracle_median - 1e-5

    def test_summarize(self):
        verdicts = [
            TraceVerdict(CONVERGED, 12, 1.0),
            TraceVerdict(CONVERGED, 12, 0.5j),
            TraceVerdict(OSCILLATING, 12),
            TraceVerdict(INCONCLUSIVE, 12),
        ]
        s = summarize(verdicts)
        assert (s.total, s.converged, s.oscillating, s.inconclusive) == (4, 2, 1, 1)
        assert s.min_modulus == 0.5 and s.median_modulus == 0.75 and s.fraction_near_unit == 0.5

    def test_empty(self):
        with pytest.raises(ValueError):
            ae_statistics(Constant(1.0), [])


class TestL2Gap:
    def test_full_product(self):
        assert partial_product_l2_gap(ZEROS30, 30, 1e-6, 4096) == 0

    def test_single_origin_zero(self):
        # |z - 1|^2 averaged over |z| = 1/2 is 1 + 1/4
        assert partial_product_l2_gap([0], 0, 0.5, 256) == pytest.approx(1.25, rel=1e-12)

    def test_direct_summation(self):
        zeros = ZEROS30[:6]
        theta = 2 * PI * np.arange(512) / 512
        z = 0.9 * np.exp(1j * theta)

        def B(zs):
            out = np.ones_like(z)
            for a in zs:
                out *= abs(a) / a * (a - z) / (1 - a.conjugate() * z)
            return out

        oracle = np.mean(np.abs(B(zeros) - B(zeros[:2])) ** 2)
        assert partial_product_l2_gap(zeros, 2, 0.1, 512) == pytest.approx(oracle, rel=1e-12)

    def test_nonincreasing_ladder(self):
        gaps = [partial_product_l2_gap(ZEROS30, n, 1e-6, 4096) for n in (1, 2, 4, 8, 16, 30)]
        assert all(b <= a + 1e-9 for a, b in zip(gaps, gaps[1:]))

    def test_ten_versus_twenty(self):
        assert partial_product_l2_gap(ZEROS30, 10, 1e-6, 4096) >= partial_product_l2_gap(ZEROS30, 20, 1e-6, 4096)

    def test_validation(self):
        with pytest.raises(ValueError):
            partial_product_l2_gap([0.5], 2, 0.1, 128)
        with pytest.raises(ValueError):
            partial_product_l2_gap([0.5], 1, 0.1, 32)
