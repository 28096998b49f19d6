import math

import numpy as np
import pytest

from spherediss import (
    DomainError,
    PastDissolutionError,
    Regime,
    branch_exponent,
    concentration_profile,
    exact_curve,
    extinction_parameter,
    integrate_radius,
    param_point_critical,
    param_point_dissolution,
    param_point_growth,
    param_point_supercritical,
    radius_at,
    time_to_dissolution,
)
from spherediss.exact import (
    _time_critical,
    _time_dissolution,
    _time_growth,
    _time_supercritical,
)

# erfc(sqrt(pi)) to 20 digits, computed independently with mpmath
ERFC_SQRT_PI = 0.012188882184802886892


class TestDissolutionBranch:
    def test_published_point(self):
        point = param_point_dissolution(0.1, 1.0)
        assert point.t == pytest.approx(1.83532, abs=1e-5)
        assert point.radius == pytest.approx(0.45504, abs=1e-5)
        assert point.regime is Regime.DISSOLUTION

    def test_branch_exponent_value(self):
        assert extinction_parameter(0.1) == pytest.approx(0.22942, abs=1e-5)

    def test_extinction_point(self):
        point = param_point_dissolution(0.1, extinction_parameter(0.1))
        assert point.radius == 0.0
        assert point.t == pytest.approx(2.69711, abs=1e-5)

    def test_initial_condition_limit(self):
        point = param_point_dissolution(0.5, 1e6)
        assert point.t < 1e-9
        assert abs(point.radius - 1.0) < 1e-4

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            param_point_dissolution(2.5, 3.0)
        with pytest.raises(DomainError):
            param_point_dissolution(0.1, 0.1)  # below the extinction parameter


class TestGrowthBranch:
    def test_initial_condition_limit(self):
        point = param_point_growth(-0.01, 1e6)
        assert point.t < 1e-9
        assert abs(point.radius - 1.0) < 1e-4

    def test_matches_oracle_at_t100(self):
        run = integrate_radius(-0.01, t_end=100.0)
        assert radius_at(-0.01, 100.0) == pytest.approx(run.radius_at(100.0), abs=1e-6)

    def test_growth_is_monotone(self):
        previous = 1.0
        for p in np.geomspace(1e4, 1.0 + 1e-3, 50):
            point = param_point_growth(-0.5, p)
            assert point.radius > previous or point.t < 1e-6
            previous = max(previous, point.radius)
        assert previous > 1.0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            param_point_growth(0.1, 2.0)
        with pytest.raises(DomainError):
            param_point_growth(-0.1, 1.0)

    def test_inverse_coth_form_is_equivalent(self):
        # the time formula rewritten through atanh(1/p) must agree; plain
        # float atanh(1/p) is only well conditioned away from p = 1
        for eps in (-0.01, -0.5):
            k = branch_exponent(eps)
            for p in np.geomspace(1.0 + 1e-3, 1e8, 1000):
                direct = _time_growth(eps, p)
                via_coth = math.exp(2.0 * k * math.atanh(1.0 / p)) / (
                    (-eps) * (2.0 - eps) * (p * p - 1.0)
                )
                assert direct == pytest.approx(via_coth, rel=1e-12)

    def test_time_formula_against_high_precision(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        eps = -0.1
        k = mp.sqrt(mp.mpf("0.1") / mp.mpf("2.1"))
        for p in np.geomspace(1.0 + 1e-12, 1e10, 100):
            pm = mp.mpf(p)
            reference = ((pm + 1) / (pm - 1)) ** k / (
                mp.mpf("0.1") * mp.mpf("2.1") * (pm * pm - 1)
            )
            assert _time_growth(eps, float(p)) == pytest.approx(float(reference), rel=1e-12)


class TestSupercriticalBranch:
    def test_extinction_matches_oracle(self):
        lower = extinction_parameter(5.0)
        point = param_point_supercritical(5.0, lower)
        assert point.radius == 0.0
        run = integrate_radius(5.0)
        assert point.t == pytest.approx(run.dissolution_time, abs=1e-6)

    def test_initial_condition_limit(self):
        point = param_point_supercritical(5.0, 1e6)
        assert point.t < 1e-12
        assert abs(point.radius - 1.0) < 1e-4

    def test_near_critical_matches_critical_curve(self):
        # compare at matched fractions of each branch's extinction time; the
        # curves hit zero at slightly different absolute times
        t0_near = time_to_dissolution(2.1)
        t0_crit = time_to_dissolution(2.0)
        for frac in np.linspace(0.1, 1.0, 40):
            near = radius_at(2.1, frac * t0_near)
            crit = radius_at(2.0, frac * t0_crit)
            assert abs(near - crit) <= 0.02

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            param_point_supercritical(1.5, 2.0)
        with pytest.raises(DomainError):
            param_point_supercritical(5.0, 1.0)  # below the extinction parameter


class TestCriticalBranch:
    def test_extinction_point(self):
        point = param_point_critical(0.0)
        assert point.t == pytest.approx(math.exp(-2.0) / 4.0, rel=1e-15)
        assert point.radius == 0.0

    def test_parameter_two(self):
        point = param_point_critical(2.0)
        assert point.t == pytest.approx(math.exp(-1.0) / 16.0, rel=1e-14)
        assert point.radius == pytest.approx(2.0 * math.sqrt(point.t), rel=1e-14)

    def test_initial_condition_limit(self):
        point = param_point_critical(1e6)
        assert abs(point.radius - 1.0) < 1e-4

    def test_negative_parameter_rejected(self):
        with pytest.raises(DomainError):
            param_point_critical(-0.1)


class TestMonotoneParameterization:
    @pytest.mark.parametrize(
        "time_of,lower",
        [
            (lambda p: _time_dissolution(0.1, p), extinction_parameter(0.1)),
            (lambda p: _time_dissolution(1.9, p), extinction_parameter(1.9)),
            (lambda p: _time_growth(-0.5, p), 1.0),
            (lambda p: _time_supercritical(5.0, p), extinction_parameter(5.0)),
            (_time_critical, 0.0),
        ],
    )
    def test_time_strictly_decreasing(self, time_of, lower):
        params = lower + np.geomspace(1e-6, 1e6, 1000)
        times = np.array([time_of(p) for p in params])
        assert np.all(np.diff(times) < 0)


class TestTimeToDissolution:
    @pytest.mark.parametrize(
        "eps,expected,tol",
        [
            (0.1, 2.6971, 5e-5),
            (1.0, 0.1039, 5e-5),
            (0.0001, 4890.6, 0.05),
            (0.5, 0.2984, 5e-5),
            (0.01, 40.421, 5e-4),
        ],
    )
    def test_published_values(self, eps, expected, tol):
        assert time_to_dissolution(eps) == pytest.approx(expected, abs=tol)

    def test_rejects_non_dissolving(self):
        for eps in (0.0, -0.1):
            with pytest.raises(DomainError):
                time_to_dissolution(eps)

    def test_continuous_across_critical_value(self):
        critical = math.exp(-2.0) / 4.0
        assert abs(time_to_dissolution(2.0 - 1e-6) - critical) <= 1e-5
        assert abs(time_to_dissolution(2.0 + 1e-6) - critical) <= 1e-5
        assert time_to_dissolution(2.0) == critical


class TestRadiusAt:
    def test_published_inversion(self):
        assert radius_at(0.1, 1.83532) == pytest.approx(0.45504, abs=1e-5)

    @pytest.mark.parametrize("eps", [0.0, 0.3, 2.0, 5.0, -0.2])
    def test_initial_condition(self, eps):
        assert radius_at(eps, 0.0) == 1.0

    def test_matches_oracle_mid_dissolution(self):
        run = integrate_radius(0.05)
        assert radius_at(0.05, 3.0) == pytest.approx(run.radius_at(3.0), abs=1e-6)

    def test_past_dissolution_is_distinct(self):
        t0 = time_to_dissolution(0.1)
        with pytest.raises(PastDissolutionError):
            radius_at(0.1, t0 * 1.01)
        assert radius_at(0.1, t0) == 0.0

    def test_rejects_bad_times(self):
        with pytest.raises(DomainError):
            radius_at(0.1, -1.0)
        with pytest.raises(DomainError):
            radius_at(0.1, math.nan)

    def test_tiny_time_shortcut(self):
        assert radius_at(0.5, 1e-15) == 1.0

    def test_inversion_residual(self):
        # the returned radius must identify a parameter whose time matches
        for eps, reconstruct in [
            (0.3, lambda u: (u + 0.3) / math.sqrt(0.3 * 1.7)),
            (-0.2, lambda u: (u - 0.2) / math.sqrt(0.2 * 2.2)),
            (3.0, lambda u: (u + 3.0) / math.sqrt(3.0 * 1.0)),
        ]:
            t_ref = 0.7 * time_to_dissolution(eps) if eps > 0 else 5.0
            radius = radius_at(eps, t_ref)
            p = reconstruct(radius / math.sqrt(t_ref))
            if eps > 0 and eps < 2:
                t_back = _time_dissolution(eps, p)
            elif eps < 0:
                t_back = _time_growth(eps, p)
            else:
                t_back = _time_supercritical(eps, p)
            assert abs(t_back - t_ref) <= 1e-9 * max(1.0, t_ref)


class TestExactCurve:
    def test_dissolution_endpoint(self):
        curve = exact_curve(0.01, 200)
        assert curve.times[-1] == pytest.approx(40.421, abs=1e-3)
        assert curve.radii[-1] <= 1e-9
        assert curve.radii[0] == pytest.approx(1.0, abs=1e-4)
        assert np.all(np.diff(curve.times) > 0)

    def test_static_curve(self):
        curve = exact_curve(0.0, 10, t_max=5.0)
        assert np.all(curve.radii == 1.0)
        assert len(curve) == 10

    def test_growth_curve_matches_oracle(self):
        curve = exact_curve(-0.01, 100, t_max=400.0)
        assert np.all(np.diff(curve.radii) > 0)
        run = integrate_radius(-0.01, t_end=float(curve.times[-1]) * 1.001)
        for t, radius in zip(curve.times, curve.radii):
            assert radius == pytest.approx(run.radius_at(t), abs=1e-6)

    def test_samples_satisfy_implicit_relation(self):
        curve = exact_curve(0.3, 64)
        for t, radius in list(curve.samples)[:-1]:
            u = radius / math.sqrt(t)
            p = (u + 0.3) / math.sqrt(0.3 * 1.7)
            assert abs(_time_dissolution(0.3, p) - t) <= 1e-12 * max(1.0, t)

    def test_t_max_caps_dissolution_curve(self):
        curve = exact_curve(0.1, 50, t_max=1.0)
        assert curve.times[-1] == pytest.approx(1.0, rel=1e-9)
        assert curve.radii[-1] > 0.5

    def test_validation(self):
        with pytest.raises(DomainError):
            exact_curve(0.1, 1)
        with pytest.raises(DomainError):
            exact_curve(-0.1, 10)  # t_max required
        with pytest.raises(DomainError):
            exact_curve(0.0, 10)

    @pytest.mark.parametrize("eps", [2.0, 5.0])
    def test_critical_and_supercritical_curves(self, eps):
        curve = exact_curve(eps, 128)
        assert curve.radii[-1] == 0.0
        assert abs(curve.radii[0] - 1.0) < 1e-4
        assert np.all(np.diff(curve.times) > 0)
        assert curve.times[-1] == pytest.approx(time_to_dissolution(eps), rel=1e-12)

    @pytest.mark.parametrize("eps,t_max", [(0.3, None), (-0.2, 50.0)])
    def test_samples_satisfy_radius_equation(self, eps, t_max):
        # centered differences on a refined local grid must recover
        # dR/dt = -eps (1/R + 1/sqrt(t)) at every interior sample
        curve = exact_curve(eps, 64, t_max)
        for t, radius in list(curve.samples)[::8]:
            if not 0.05 < radius < 0.95 and eps > 0:
                continue
            if t <= 0:
                continue
            h = 1e-5 * t
            slope = (radius_at(eps, t + h) - radius_at(eps, t - h)) / (2.0 * h)
            expected = -eps * (1.0 / radius + 1.0 / math.sqrt(t))
            assert slope == pytest.approx(expected, rel=1e-4)


class TestConcurrentUse:
    def test_queries_are_pure_and_reentrant(self):
        from concurrent.futures import ThreadPoolExecutor

        def task(i):
            eps = 0.01 + 0.01 * (i % 25)
            return radius_at(eps, 0.5 * time_to_dissolution(eps))

        with ThreadPoolExecutor(8) as pool:
            concurrent = list(pool.map(task, range(100)))
        assert concurrent == [task(i) for i in range(100)]


class TestConcentrationProfile:
    def test_surface_value(self):
        for radius, t in [(1.0, 1.0), (0.3, 17.0), (2.0, 0.01)]:
            assert concentration_profile(radius, t, radius) == 1.0

    def test_long_time_steady_profile(self):
        assert abs(concentration_profile(1.0, 1e8, 2.0) - 0.5) < 1e-3

    def test_erfc_reference_value(self):
        value = concentration_profile(1.0, 1.0, 3.0)
        assert value == pytest.approx(ERFC_SQRT_PI / 3.0, rel=1e-13)

    def test_monotone_in_position(self):
        positions = np.linspace(1.0, 12.0, 300)
        values = [concentration_profile(1.0, 2.5, r) for r in positions]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert 0.0 <= min(values) and max(values) == 1.0

    def test_far_tail_reported_as_zero(self):
        assert concentration_profile(1.0, 0.01, 10.0) == 0.0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            concentration_profile(1.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            concentration_profile(1.0, 0.0, 2.0)
        with pytest.raises(DomainError):
            concentration_profile(0.0, 1.0, 2.0)
