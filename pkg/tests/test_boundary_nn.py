import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import assert_single_peak, rayleigh_draws
from miso_pareto.errors import InfeasibleTarget, SingularAtZero
from miso_pareto.services.boundary_nn import (
    NnScalarProblem,
    boundary_nn_closed_form,
    boundary_nn_numerical,
    cubic_coefficients_nn,
    endpoints_nn,
    f_value,
    full_boundary_nn,
    g_value,
    gamma1_max_nn,
    gamma1_min_nn,
    lambda_to_x,
    max_r2_given_r1_nn,
    mixed_beamformer,
    param_beamformer_nn,
    powers_nn,
    weak_segments_nn,
    x1_bounds,
    x2_given_x1,
)
from miso_pareto.services.channel import derive_constants, preset_constants, random_rayleigh
from miso_pareto.services.cubic import roots_in_unit_interval
from miso_pareto.services.rates import DecodingScenario, rate_pair, sinr_from_powers
from miso_pareto.services.scalar_search import AscentSettings, maximize_on_interval


def test_single_user_endpoint_is_exact():
    (_, _), (r1_max, _) = endpoints_nn(preset_constants("fig2"))
    assert abs(r1_max - 1.0) <= 1e-12


def test_endpoints_of_fig2():
    c = preset_constants("fig2")
    (r1_min, r2_max), (r1_max, r2_min) = endpoints_nn(c)
    # ZF at one transmitter, MR at the other
    assert_allclose(r1_min, math.log2(1 + (1 - 0.09) / (0.36 + 1)))
    assert_allclose(r2_max, 1.0)
    assert_allclose(r2_min, r1_min)


def test_closed_form_with_two_samples_gives_the_endpoints(fig3):
    b = boundary_nn_closed_form(fig3, M=2)
    (r1_min, r2_max), (r1_max, r2_min) = endpoints_nn(fig3)
    assert len(b) == 2
    assert_allclose(b.r1, [r1_min, r1_max], rtol=1e-12)
    assert_allclose(b.r2, [r2_max, r2_min], rtol=1e-12)


def test_lambda_mapping_matches_mixed_beamformer():
    ch = random_rayleigh(4, 21)
    c = derive_constants(ch)
    for lam in np.linspace(0.0, 1.0, 11):
        x = lambda_to_x(lam, c.kappa1)
        assert_allclose(param_beamformer_nn(x, 1, ch).w, mixed_beamformer(lam, 1, ch).w, atol=1e-12)
    assert lambda_to_x(0.0, c.kappa2) == 0.0
    assert_allclose(lambda_to_x(1.0, c.kappa2), c.kappa2)


def test_numerical_query_edges(fig2):
    with pytest.raises(InfeasibleTarget):
        max_r2_given_r1_nn(gamma1_max_nn(fig2) * 1.01, fig2)
    top = max_r2_given_r1_nn(gamma1_max_nn(fig2), fig2)
    assert top.x2_star == 0.0
    assert_allclose(top.gamma2_star, gamma1_min_nn(fig2.swapped()))
    low = max_r2_given_r1_nn(0.5 * gamma1_min_nn(fig2), fig2)
    assert low.gamma2_star == fig2.g22 ** 2 / fig2.sigma2_sq


def test_constraint_of_link1_is_tight(preset):
    for frac in (0.2, 0.5, 0.8):
        gamma = gamma1_min_nn(preset) + frac * (gamma1_max_nn(preset) - gamma1_min_nn(preset))
        sol = max_r2_given_r1_nn(gamma, preset)
        g1, g2 = sinr_from_powers(DecodingScenario.NN, *powers_nn(sol.x1_star, sol.x2_star, preset),
                                  preset.sigma1_sq, preset.sigma2_sq)
        assert abs(g1 - gamma) <= 1e-8 * gamma
        assert_allclose(g2, sol.gamma2_star, rtol=1e-9)


def test_boundaries_are_monotone(preset):
    for b in (boundary_nn_numerical(preset, 100), boundary_nn_closed_form(preset, 100)):
        b.check_invariants(tolerance=1e-12)
        assert b.scenario is DecodingScenario.NN


def test_closed_form_matches_numerical_on_presets_and_rayleigh():
    cases = [preset_constants(name) for name in ("fig2", "fig3", "fig4")]
    cases += [c for _, c in rayleigh_draws(20)]
    for c in cases:
        closed = boundary_nn_closed_form(c, 100)
        (r1_min, _), (r1_max, _) = endpoints_nn(c)
        interior = [p for p in closed.points if r1_min < p.r1 < r1_max]
        for p in interior[::8]:
            sol = max_r2_given_r1_nn(2.0 ** p.r1 - 1.0, c, epsilon=1e-12)
            assert abs(math.log2(1.0 + sol.gamma2_star) - p.r2) <= 1e-3


def test_stationarity_relation_holds_at_closed_form_points(preset):
    for p in boundary_nn_closed_form(preset, 60).points:
        x1, x2 = p.params.x1, p.params.x2
        if x1 <= 1e-9 or not 0.0 < p.params.lambda1 < 1.0 or not 0.0 < p.params.lambda2 < 1.0:
            continue
        f = f_value(x1, preset)
        assert abs(f - g_value(x2, preset)) <= 1e-6 * max(1.0, abs(f))


def test_cubic_roots_solve_the_stationarity_relation():
    c = preset_constants("fig4")
    for x1 in np.linspace(0.05, c.kappa1 * 0.95, 9):
        f = f_value(float(x1), c)
        cubic = cubic_coefficients_nn(f, c.rho2, c.zeta2)
        for lam2 in roots_in_unit_interval(cubic):
            if 0.0 < lam2 < 1.0:
                assert_allclose(g_value(lambda_to_x(lam2, c.kappa2), c), f, rtol=1e-6)


def test_f_is_singular_at_zero(fig2):
    with pytest.raises(SingularAtZero):
        f_value(0.0, fig2)


def test_objective_is_single_peaked_on_random_draws():
    for _, c in rayleigh_draws(200, first_seed=1000):
        span = gamma1_max_nn(c) - gamma1_min_nn(c)
        for frac in (0.25, 0.75):
            problem = NnScalarProblem.build(gamma1_min_nn(c) + frac * span, c)
            grid = np.linspace(problem.x_lower, problem.x_upper, 201)
            assert_single_peak(problem.s(grid), rtol=1e-9)


def test_boundary_points_are_realized_by_their_beamformers(fig2_channels, fig2):
    b = boundary_nn_closed_form(fig2, 40)
    for p in b.points:
        w1 = param_beamformer_nn(p.params.x1, 1, fig2_channels)
        w2 = param_beamformer_nn(p.params.x2, 2, fig2_channels)
        achieved = rate_pair(DecodingScenario.NN, w1, w2, fig2_channels)
        assert_allclose([achieved.r1, achieved.r2], [p.r1, p.r2], atol=1e-9)


def test_weak_segments(fig2):
    weak = weak_segments_nn(fig2, 50)
    (r1_min, r2_max), (r1_max, r2_min) = endpoints_nn(fig2)
    assert weak.horizontal.r1[0] == 0.0
    assert_allclose(weak.horizontal.r1[-1], r1_min)
    assert np.all(weak.horizontal.r2 == r2_max)
    assert all(p.r1 == r1_max for p in weak.vertical)
    assert_allclose([weak.vertical[0].r2, weak.vertical[-1].r2], [0.0, r2_min])


def test_full_boundary_starts_on_the_rate_axis(fig2):
    b = full_boundary_nn(fig2, 100)
    assert b.r1[0] == 0.0
    b.check_invariants(tolerance=1e-12)


def test_parallel_sweep_agrees_with_sequential(fig4):
    seq = boundary_nn_numerical(fig4, 60, epsilon=1e-12)
    par = boundary_nn_numerical(fig4, 60, epsilon=1e-12, parallel=True, threads=4)
    assert_allclose(seq.r1, par.r1)
    assert_allclose(seq.r2, par.r2, atol=1e-6)


def test_ascent_finds_interior_maximum():
    settings = AscentSettings(epsilon=1e-14)
    result = maximize_on_interval(lambda x: -(x - 0.3) ** 2, lambda x: -2 * (x - 0.3),
                                  0.0, 1.0, 0.9, settings)
    assert abs(result.x - 0.3) < 1e-6
    edge = maximize_on_interval(lambda x: x, lambda x: 1.0, 0.0, 1.0, 0.2, settings)
    assert edge.x == 1.0


def test_x2_given_x1_meets_the_target(preset):
    gamma1 = 0.5 * gamma1_max_nn(preset)
    x_lower, x_upper = x1_bounds(gamma1, preset)
    assert 0.0 <= x_lower <= x_upper <= preset.kappa1 + 1e-12
    for x1 in np.linspace(x_lower, x_upper, 7):
        x2 = x2_given_x1(x1, gamma1, preset)
        p1, _, _, q1 = powers_nn(x1, x2, preset)
        assert_allclose(p1 / (q1 + preset.sigma1_sq), gamma1, rtol=1e-9)
    assert x2_given_x1(x_upper, gamma1, preset) <= preset.kappa2 + 1e-9


def test_x1_bounds_reject_unreachable_targets(fig2):
    with pytest.raises(InfeasibleTarget):
        x1_bounds(1.01 * gamma1_max_nn(fig2), fig2)
