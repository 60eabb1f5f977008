import math

import pytest

from elastica.elliptic import ellint_K
from elastica.expmap import (
    ElasticaClass,
    State,
    classify,
    elastic_energy_closed,
    exp_map,
    sample_elastica,
)
from elastica.maxwell import find_k0
from elastica.oracle import adaptive_simpson, integrate_extremal
from elastica.phase import Covector, flow_vertical, wrap_angle

from conftest import n1, n2, n3


def endpoint_gap(a, b):
    return max(abs(a.x - b.x), abs(a.y - b.y), abs(wrap_angle(a.theta - b.theta)))


class TestExpMap:
    def test_line(self):
        q = exp_map(Covector(1.0, 0.0, 0.0), 3.0)
        assert (q.x, q.y, q.theta) == (3.0, 0.0, 0.0)

    def test_circle_half_turn(self):
        q = exp_map(Covector(0.0, math.pi, 0.0), 1.0)
        assert q.x == pytest.approx(0.0, abs=1e-15)
        assert q.y == pytest.approx(2.0 / math.pi, abs=1e-15)
        assert q.theta == pytest.approx(math.pi, abs=1e-15)

    def test_identity_at_zero_time(self):
        q = exp_map(Covector(0.7, 1.3, 2.0), 0.0)
        assert endpoint_gap(q, State(0.0, 0.0, 0.0)) < 1e-14

    def test_oscillating_against_rk4(self):
        lam = Covector(0.0, 1.0, 1.0)
        q, _, _ = integrate_extremal(lam, 2.0)
        assert endpoint_gap(exp_map(lam, 2.0), q) < 1e-8

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            exp_map(Covector(0.0, 1.0, 1.0), -0.5)

    def test_oracle_equivalence_spot_checks(self, cell_covectors):
        for lam in cell_covectors.values():
            for t in (0.5, 2.0):
                q, _, _ = integrate_extremal(lam, t)
                assert endpoint_gap(exp_map(lam, t), q) < 1e-7

    def test_tangent_angle_tracks_pendulum(self, cell_covectors):
        for lam in cell_covectors.values():
            for t in (0.8, 3.1):
                q = exp_map(lam, t)
                bt = flow_vertical(lam, t).beta
                assert abs(wrap_angle(q.theta - (bt - lam.beta))) < 1e-10

    def test_unit_speed(self, cell_covectors):
        h = 1e-6
        for lam in cell_covectors.values():
            for t in (0.4, 1.9):
                a, b = exp_map(lam, t), exp_map(lam, t + h)
                assert math.hypot(b.x - a.x, b.y - a.y) / h == pytest.approx(
                    1.0, abs=1e-6
                )

    def test_attainability_bound(self, fixture25):
        for lam in fixture25:
            for t in (0.5, 1.0, 4.0):
                q = exp_map(lam, t)
                assert q.x * q.x + q.y * q.y <= t * t * (1 + 1e-12)

    def test_circle_chord_geometry(self):
        c = 1.7
        lam = Covector(0.0, c, 0.0)
        for t in (0.3, 1.1, 2.9):
            q = exp_map(lam, t)
            # endpoints stay on the circle of radius 1/|c| centered at (0, 1/c)
            assert math.hypot(q.x, q.y - 1 / c) == pytest.approx(
                1 / abs(c), abs=1e-12
            )


class TestSampling:
    def test_two_point_line(self):
        pts = sample_elastica(Covector(0.0, 0.0, 0.0), 1.0, 2)
        assert [(p.x, p.y, p.theta) for p in pts] == [(0, 0, 0), (1, 0, 0)]

    def test_full_circle_closes(self):
        pts = sample_elastica(Covector(0.0, 2 * math.pi, 0.0), 1.0, 5)
        last = pts[-1]
        assert endpoint_gap(last, State(0.0, 0.0, 0.0)) < 1e-12

    def test_polyline_length_converges_to_arclength(self):
        lam = Covector(1.0, 1.2, 1.0)
        t1 = 2.0
        pts = sample_elastica(lam, t1, 100000)
        length = sum(
            math.hypot(b.x - a.x, b.y - a.y) for a, b in zip(pts, pts[1:])
        )
        assert abs(length - t1) < t1 * 1e-6

    def test_bad_args(self):
        with pytest.raises(ValueError):
            sample_elastica(Covector(0, 1, 1), 1.0, 1)
        with pytest.raises(ValueError):
            sample_elastica(Covector(0, 1, 1), 0.0, 4)

    def test_figure_eight_closes_after_one_period(self):
        k0 = float(find_k0())
        lam = n1(k0, 0.23, 1.0)
        T = 4.0 * ellint_K(k0)
        q = exp_map(lam, T)
        assert math.hypot(q.x, q.y) < 1e-6

    def test_rectangular_polyline_matches_oracle(self):
        # pointwise gap on a shared sample grid dominates the Hausdorff
        # distance between the two polylines
        lam = n1(1.0 / math.sqrt(2.0), 0.4, 1.0)
        t1 = 8.0 * ellint_K(1.0 / math.sqrt(2.0))
        n = 33
        pts = sample_elastica(lam, t1, n)
        worst = 0.0
        for i in range(1, n):
            t = t1 * i / (n - 1)
            q, _, _ = integrate_extremal(lam, t)
            worst = max(worst, math.hypot(pts[i].x - q.x, pts[i].y - q.y))
        assert worst < 1e-6


class TestClassify:
    def test_line(self):
        assert classify(Covector(math.pi, 0.0, 1.0)) is ElasticaClass.LINE
        assert classify(Covector(0.0, 0.0, 0.0)) is ElasticaClass.LINE

    def test_circle(self):
        assert classify(Covector(0.0, 2.0, 0.0)) is ElasticaClass.CIRCLE

    def test_critical(self):
        assert classify(n3(0.4, 1.0)) is ElasticaClass.CRITICAL

    def test_non_inflectional(self):
        assert classify(n2(0.7, 0.2, 1.0)) is ElasticaClass.NON_INFLECTIONAL

    def test_inflectional_spectrum(self):
        assert classify(n1(0.3, 0.1, 1.0)) is ElasticaClass.INFLECTIONAL_SMALL_K
        assert (
            classify(n1(1 / math.sqrt(2), 0.1, 1.0)) is ElasticaClass.RECTANGULAR
        )
        assert classify(n1(0.8, 0.1, 1.0)) is ElasticaClass.INFLECTIONAL_MID_K
        assert classify(n1(float(find_k0()), 0.1, 1.0)) is ElasticaClass.FIGURE_EIGHT
        assert classify(n1(0.99, 0.1, 1.0)) is ElasticaClass.INFLECTIONAL_LARGE_K


class TestEnergy:
    def test_line_zero(self):
        assert elastic_energy_closed(Covector(2.0, 0.0, 0.0), 5.0) == 0.0
        assert elastic_energy_closed(Covector(0.0, 0.0, 1.0), 5.0) == 0.0

    def test_constant_curvature(self):
        assert elastic_energy_closed(Covector(0.0, 2.0, 0.0), 3.0) == 6.0

    def test_against_quadrature(self):
        lam = n1(0.7, 0.3, 1.0)
        t = 2.0

        def c_squared_half(s):
            return 0.5 * flow_vertical(lam, s).c ** 2

        J = adaptive_simpson(c_squared_half, 0.0, t, tol=1e-12)
        assert abs(elastic_energy_closed(lam, t) - J) < 1e-9

    def test_against_quadrature_all_cells(self, cell_covectors):
        for lam in cell_covectors.values():
            t = 1.3

            def c_squared_half(s):
                return 0.5 * flow_vertical(lam, s).c ** 2

            J = adaptive_simpson(c_squared_half, 0.0, t, tol=1e-12)
            assert abs(elastic_energy_closed(lam, t) - J) < 1e-9

    def test_zero_iff_line_strata(self, fixture25):
        for lam in fixture25:
            J = elastic_energy_closed(lam, 2.0)
            if abs(lam.c) < 1e-12 and (
                lam.r == 0.0 or abs(wrap_angle(lam.beta)) < 1e-12
                or abs(wrap_angle(lam.beta - math.pi)) < 1e-12
            ):
                assert J == 0.0
            else:
                assert J > 0.0
