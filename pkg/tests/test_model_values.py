"""Point checks of the overhead model against independently computed values.

Expected constants were evaluated with mpmath at 40 digits and frozen
here; nothing below is derived from the code under test.
"""

import math

import pytest

from routeload import model as m
from routeload.errors import NoRootInBracketError
from routeload.model import CeilingMode, ModelParams

# frozen oracle constants (mpmath, 40 digits, rounded to double)
ONE_MINUS_E_INV = 0.6321205588285577
E_INV = 0.36787944117144233

REL = 1e-12


def relclose(a, b, rel=REL):
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)


def params(**kw):
    base = dict(
        n=2, bandwidth_B=1.0, k=1.0, t_pr=1.0, mu_k=1.0,
        lambda_rate=0.0, t_trig=1.5, l_avg=1, pn_avg=1, hello_H=1.0,
    )
    base.update(kw)
    return ModelParams(**base)


class TestUplinkChangeProbability:
    def test_zero_hops(self):
        assert m.uplink_change_probability(0, 5.0, 10.0) == 0.0

    def test_zero_interval(self):
        assert m.uplink_change_probability(3, 0.0, 10.0) == 0.0

    def test_unit_case(self):
        assert relclose(m.uplink_change_probability(1, 1.0, 1.0), ONE_MINUS_E_INV)

    def test_bad_mu(self):
        with pytest.raises(ValueError):
            m.uplink_change_probability(1, 1.0, 0.0)


class TestPacketFailure:
    def test_two_term_sum(self):
        # r=0 contributes 0; r=1 contributes (1 - e^-1) * lambda * t_pr
        p = params(pn_avg=1, l_avg=1, lambda_rate=1.0, t_pr=1.0, mu_k=1.0)
        assert relclose(m.packet_failure_overhead(p), ONE_MINUS_E_INV)

    def test_no_arrivals(self):
        p = params(lambda_rate=0.0, l_avg=5, pn_avg=7, mu_k=3.0)
        assert m.packet_failure_overhead(p) == 0.0

    def test_stable_links_limit(self):
        p = params(mu_k=5e9, t_pr=1.0, l_avg=5, lambda_rate=1.0, pn_avg=1)
        assert m.packet_failure_overhead(p) < 1e-8


class TestPeriodicOverhead:
    def test_n2(self):
        assert relclose(m.periodic_overhead(params(n=2)), 8.0)

    def test_reference_bandwidth(self):
        p = params(n=10, bandwidth_B=2e6, t_pr=1.0)
        assert relclose(m.periodic_overhead(p), 5e-4)

    def test_unit_numerator(self):
        assert relclose(m.periodic_overhead(params(n=1, t_pr=2.0)), 0.5)


class TestTriggerRatio:
    def test_integer_multiple(self):
        assert m.trigger_ratio(2.0, 1.0) == 1.0

    def test_mid_interval(self):
        assert relclose(m.trigger_ratio(1.5, 1.0), 4.0 / 3.0)

    def test_below_one(self):
        assert relclose(m.trigger_ratio(0.3, 1.0), 1.0 / 0.3)

    def test_domain(self):
        with pytest.raises(ValueError):
            m.trigger_ratio(0.0, 1.0)
        with pytest.raises(ValueError):
            m.trigger_ratio(1.0, -1.0)


class TestTriggerOverhead:
    def test_integer_multiple_scaled(self):
        assert m.trigger_overhead(params(n=10, t_trig=2.0, t_pr=1.0)) == 10.0

    def test_single_node(self):
        p = params(n=1, t_trig=1.5, t_pr=1.0)
        assert m.trigger_overhead(p) == m.trigger_ratio(1.5, 1.0)

    def test_fifty_nodes(self):
        p = params(n=50, t_trig=1.5, t_pr=1.0)
        assert relclose(m.trigger_overhead(p), 200.0 / 3.0)


class TestAggregate:
    def test_degenerate_components(self):
        p = params(n=1, lambda_rate=0.0, t_trig=1.0, t_pr=1.0)
        bd = m.aggregate_overhead(p)
        assert bd.ro_pf == 0.0
        assert bd.ro_pr == 1.0
        assert bd.ro_tr == 1.0
        assert bd.ro_total == 2.0

    def test_components_match_dedicated_ops(self):
        p = params(n=7, lambda_rate=2.0, pn_avg=4, l_avg=3, mu_k=9.0, t_trig=4.7)
        bd = m.aggregate_overhead(p)
        assert bd.ro_pf == m.packet_failure_overhead(p)
        assert bd.ro_pr == m.periodic_overhead(p)
        assert bd.ro_tr == m.trigger_overhead(p)

    def test_exact_sum(self):
        p = params(n=13, lambda_rate=0.3, pn_avg=5, l_avg=4, t_trig=2.9)
        bd = m.aggregate_overhead(p)
        assert bd.ro_total - (bd.ro_pf + bd.ro_pr + bd.ro_tr) == 0.0


class TestSensitivityTpr:
    def test_zero_arrivals_kills_first_sum(self):
        # k=1, n=2, B=1, t_pr=1, lambda=0, T=1.5:
        # -kn^3/(B t_pr^2) = -8; paper trigger part:
        # 2*(ceil(-1.5) + 1.5)/1.5^2 = 2*0.5/2.25 = 0.4444...
        p = params()
        got = m.sensitivity_tpr(p, CeilingMode.PAPER_FAITHFUL)
        assert relclose(got, -7.555555555555555, rel=1e-12)

    def test_measure_mode_trigger_part(self):
        # frozen-ceiling derivative of n*ceil(T/t_pr)*t_pr/T:
        # n*ceil(1.5)/1.5 = 2*2/1.5
        p = params()
        got = m.sensitivity_tpr(p, CeilingMode.MEASURE_ZERO)
        assert relclose(got, -8.0 + 2 * 2 / 1.5)

    def test_discontinuity_flagged(self):
        p = params(t_trig=2.0, t_pr=1.0)
        with pytest.warns(m.CeilingDiscontinuityWarning):
            m.sensitivity_tpr(p)


class TestSensitivityLambda:
    def test_vanishing_interval(self):
        p = params(t_pr=1e-300, lambda_rate=1.0, pn_avg=1, l_avg=3)
        assert m.sensitivity_lambda(p) == 0.0

    def test_stable_links_limit(self):
        p = params(mu_k=5e9, t_pr=1.0, l_avg=5, pn_avg=1)
        assert m.sensitivity_lambda(p) < 1e-7

    def test_unit_case(self):
        p = params(pn_avg=1, l_avg=1, t_pr=1.0, mu_k=1.0)
        assert relclose(m.sensitivity_lambda(p), ONE_MINUS_E_INV)


class TestSensitivityT:
    def test_unit_tpr_exactly_zero(self):
        assert m.sensitivity_t(params(t_pr=1.0, t_trig=1.5)) == 0.0

    def test_tpr_two(self):
        # (n+1) * (ceil(0.25) - 0.25) / (T^2/4) with n=2, T=3 -> 1.0
        p = params(n=2, t_pr=2.0, t_trig=3.0)
        assert relclose(m.sensitivity_t(p), 1.0)

    def test_sum_bound_is_node_count(self):
        # sum over r = 0..n has n+1 identical terms
        p1 = params(n=1, t_pr=2.0, t_trig=3.0)
        p4 = params(n=4, t_pr=2.0, t_trig=3.0)
        assert relclose(m.sensitivity_t(p4) / m.sensitivity_t(p1), 5.0 / 2.0)


class TestSensitivityMu:
    def test_zero_hops(self):
        p = params(l_avg=0, lambda_rate=3.0, pn_avg=2)
        assert m.sensitivity_mu(p) == 0.0

    def test_stable_links_limit(self):
        p = params(mu_k=1e9, lambda_rate=1.0, pn_avg=1, l_avg=5)
        assert abs(m.sensitivity_mu(p)) < 1e-10

    def test_unit_case(self):
        p = params(pn_avg=1, lambda_rate=1.0, t_pr=1.0, mu_k=1.0, l_avg=1)
        assert relclose(m.sensitivity_mu(p), -E_INV)


class TestSensitivityN:
    def test_direct(self):
        assert relclose(m.sensitivity_n(params(n=10)), 300.0)

    def test_unit(self):
        assert relclose(m.sensitivity_n(params(n=1, bandwidth_B=3.0)), 1.0)

    def test_finite_difference(self):
        p = params(n=10, bandwidth_B=7.0, t_pr=3.0, k=2.0)
        fd = m.central_difference(
            lambda x: p.k * x**3 / (p.bandwidth_B * p.t_pr), float(p.n), 1e-5 * p.n
        )
        assert relclose(m.sensitivity_n(p), fd, rel=1e-8)


class TestTotalDerivative:
    def test_zero_slope(self):
        p = params(t_pr=2.0)
        assert m.total_derivative_tpr(p, 0.0) == m.sensitivity_tpr(p)

    def test_vanishing_t_partial(self):
        p = params(t_pr=1.0)  # sensitivity_t == 0 exactly
        for slope in (-3.0, 0.5, 100.0):
            assert m.total_derivative_tpr(p, slope) == m.sensitivity_tpr(p)

    def test_unit_slope_linearity(self):
        p = params(t_pr=2.0)
        want = m.sensitivity_tpr(p) + m.sensitivity_t(p)
        assert relclose(m.total_derivative_tpr(p, 1.0), want)

    def test_non_finite_slope(self):
        with pytest.raises(ValueError):
            m.total_derivative_tpr(params(), math.inf)


class TestStationarity:
    def test_lhs_collapses(self):
        # summand (1-e^-x) + e^-x == 1, so LHS = C*(l_avg+1); with C=0 the
        # residual is exactly -RHS
        p = params(lambda_rate=0.0, n=2, t_pr=1.0, t_trig=1.5)
        frac = 1.5 - math.floor(1.5)
        rhs = 8.0 / 1.0 - frac * 1.0 / 1.5**2
        assert relclose(m.stationarity_residual(p), -rhs)
        assert relclose(m.stationarity_residual(p), -7.777777777777778)

    def test_sign_flip_brackets_root(self):
        p = params(n=5, lambda_rate=2.0, pn_avg=3, l_avg=2, t_trig=1000.0)
        lo, hi = 0.5, 500.0
        r_lo = m.stationarity_residual(m.ModelParams(**{**_asdict(p), "t_pr": lo}))
        r_hi = m.stationarity_residual(m.ModelParams(**{**_asdict(p), "t_pr": hi}))
        assert r_lo * r_hi < 0

    def test_update_coefficient_is_substitution(self):
        p = params(n=4, lambda_rate=1.0, pn_avg=2, l_avg=3, mu_k=7.0, t_pr=3.5)
        h = p.t_pr / p.mu_k
        assert m.update_coefficient_residual(p, h) == m.stationarity_residual(p)

    def test_update_coefficient_scaling(self):
        p1 = params(mu_k=2.0, lambda_rate=1.0, pn_avg=2, n=4, t_trig=100.0)
        p2 = params(mu_k=4.0, lambda_rate=1.0, pn_avg=2, n=4, t_trig=100.0)
        h = 0.7
        # doubling mu_k at fixed h doubles effective t_pr
        eff1 = m.ModelParams(**{**_asdict(p1), "t_pr": 2.0 * 0.7})
        eff2 = m.ModelParams(**{**_asdict(p2), "t_pr": 4.0 * 0.7})
        assert m.update_coefficient_residual(p1, h) == m.stationarity_residual(eff1)
        assert m.update_coefficient_residual(p2, h) == m.stationarity_residual(eff2)


class TestSolver:
    def test_root_against_grid_scan(self):
        p = params(n=5, lambda_rate=2.0, pn_avg=3, l_avg=2, t_trig=1000.0)
        root = m.solve_optimal_tpr(p, (0.5, 500.0))
        res = m.stationarity_residual(m.ModelParams(**{**_asdict(p), "t_pr": root}))
        assert abs(res) < 1e-9
        # coarse grid scan: the sign change lives in the same cell
        import numpy as np
        grid = np.linspace(0.5, 500.0, 20001)
        vals = [
            m.stationarity_residual(m.ModelParams(**{**_asdict(p), "t_pr": t}))
            for t in grid
        ]
        crossings = [
            (grid[i], grid[i + 1])
            for i in range(len(grid) - 1)
            if vals[i] * vals[i + 1] <= 0
        ]
        assert any(lo <= root <= hi for lo, hi in crossings)

    def test_same_sign_bracket_rejected(self):
        p = params(lambda_rate=0.0)
        with pytest.raises(NoRootInBracketError):
            m.solve_optimal_tpr(p, (0.1, 0.2))

    def test_degenerate_bracket_on_root(self):
        p = params(n=5, lambda_rate=2.0, pn_avg=3, l_avg=2, t_trig=1000.0)
        root = m.solve_optimal_tpr(p, (0.5, 500.0))
        assert m.solve_optimal_tpr(p, (root, root)) == root


class TestOlsrForm:
    def test_periodic_sum(self):
        # k n^3/(B H) + k n^3/(2 B H) = 8 + 4 with k=1, n=2, B=1, H=1
        bd = m.olsr_overhead(params(hello_H=1.0))
        assert relclose(bd.ro_pr, 12.0)

    def test_periodic_is_1p5x_base(self):
        p = params(n=9, bandwidth_B=5.0, k=2.0, hello_H=0.7)
        base = m.periodic_overhead(m.ModelParams(**{**_asdict(p), "t_pr": p.hello_H}))
        assert relclose(m.olsr_overhead(p).ro_pr, 1.5 * base)

    def test_paper_default_intervals(self):
        # HELLO 1 s, TC 2 s: the TC interval is twice H by construction
        p = params(hello_H=1.0, n=3, bandwidth_B=1.0, k=1.0)
        kn3 = 27.0
        assert relclose(m.olsr_overhead(p).ro_pr, kn3 / 1.0 + kn3 / 2.0)

    def test_pf_term_unchanged(self):
        p = params(pn_avg=3, lambda_rate=2.0, l_avg=2, mu_k=4.0)
        assert m.olsr_overhead(p).ro_pf == m.packet_failure_overhead(p)


class TestOlsrSensitivity:
    def test_smooth_part(self):
        got = m.olsr_sensitivity_h(params(n=2, hello_H=1.0, t_trig=1e12))
        # ceiling part is negligible with huge T: smooth = -12 dominates
        assert relclose(got, -12.0, rel=1e-6)

    def test_smooth_part_vs_finite_difference(self):
        p = params(n=6, bandwidth_B=3.0, k=1.4, hello_H=0.9)

        def pr(h):
            kn3 = p.k * p.n**3
            return kn3 / (p.bandwidth_B * h) + kn3 / (p.bandwidth_B * 2 * h)

        fd = m.central_difference(pr, p.hello_H, 1e-5 * p.hello_H)
        smooth = -1.5 * p.k * p.n**3 / (p.bandwidth_B * p.hello_H**2)
        assert relclose(smooth, fd, rel=1e-6)

    def test_modes_differ_only_in_ceiling_part(self):
        p = params(n=4, hello_H=0.8, t_trig=7.3)
        smooth = -1.5 * p.k * p.n**3 / (p.bandwidth_B * p.hello_H**2)
        paper = m.olsr_sensitivity_h(p, CeilingMode.PAPER_FAITHFUL)
        measure = m.olsr_sensitivity_h(p, CeilingMode.MEASURE_ZERO)
        eff = 3 * p.hello_H
        assert relclose(paper - smooth,
                        p.n * (math.ceil(-p.t_trig / eff**2) + p.t_trig / eff**2)
                        / (p.t_trig**2 / eff**2))
        assert relclose(measure - smooth, 3 * p.n * math.ceil(p.t_trig / eff) / p.t_trig)


class TestModelParamsValidation:
    @pytest.mark.parametrize("field,value", [
        ("n", 0), ("bandwidth_B", 0.0), ("k", -1.0), ("t_pr", 0.0),
        ("mu_k", 0.0), ("lambda_rate", -0.5), ("t_trig", 0.0),
        ("l_avg", -1), ("pn_avg", -2), ("hello_H", 0.0),
    ])
    def test_rejects(self, field, value):
        kw = _asdict(params())
        kw[field] = value
        with pytest.raises(ValueError):
            ModelParams(**kw)


def _asdict(p: ModelParams) -> dict:
    return {
        "n": p.n, "bandwidth_B": p.bandwidth_B, "k": p.k, "t_pr": p.t_pr,
        "mu_k": p.mu_k, "lambda_rate": p.lambda_rate, "t_trig": p.t_trig,
        "l_avg": p.l_avg, "pn_avg": p.pn_avg, "hello_H": p.hello_H,
    }
