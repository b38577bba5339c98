import math

import numpy as np
import pytest

from rankdesign import (
    QuadratureError,
    RewardPolicy,
    applicant_welfare,
    private_utility,
    societal_utility,
    solve,
    two_level,
    two_level_sweep,
    welfare_report,
)
from rankdesign.quadrature import adaptive_simpson, integrate_piecewise


def analytic_applicant_welfare(c, rho=0.2):
    # rho - integral of (tilde_e0 * c^2 / theta^2)^2 over [c, 1]
    return rho * (1.0 - c * (1.0 + c + c * c) / 3.0)


def analytic_societal(c, rho=0.2):
    # (1 - c) * g(tilde_e0) * f(c) with f = 2x, g = sqrt, p = square
    return 2.0 * c * (1.0 - c) ** 0.75 * rho**0.25


def analytic_private(c, rho=0.2):
    return rho * (rho / (1.0 - c)) ** 0.25 * 2.0 * c


def test_simpson_basics():
    value, err = adaptive_simpson(lambda x: x * x, 0.0, 1.0)
    assert value == pytest.approx(1.0 / 3.0, abs=1e-12)
    value, _ = adaptive_simpson(math.sin, 0.0, math.pi)
    assert value == pytest.approx(2.0, rel=1e-9)
    value, err = adaptive_simpson(lambda x: 0.0, 0.0, 1.0)
    assert value == 0.0 and err == 0.0


def test_simpson_piecewise_split():
    f = lambda x: abs(x - 0.3)
    exact = 0.3**2 / 2 + 0.7**2 / 2
    value, _ = integrate_piecewise(f, [0.0, 0.3, 1.0])
    assert value == pytest.approx(exact, rel=1e-10)


def test_simpson_nonconvergence_reports_partial():
    def wild(x):
        return math.sin(1.0 / max(x, 1e-12)) / max(x, 1e-12)

    with pytest.raises(QuadratureError) as info:
        adaptive_simpson(wild, 1e-9, 1.0, rel_tol=1e-13)
    assert info.value.partial is not None and math.isfinite(info.value.partial)


def test_applicant_welfare_matches_analytic(benchmark_population):
    for c in (0.3, 0.5, 0.8):
        schedule = solve(benchmark_population, two_level(c, 0.2))
        got = applicant_welfare(schedule)
        assert got == pytest.approx(analytic_applicant_welfare(c), rel=1e-7)
    assert analytic_applicant_welfare(0.8) == pytest.approx(0.069867, abs=1e-6)


def test_societal_matches_analytic(benchmark_population):
    for c in (0.3, 4.0 / 7.0, 0.8):
        schedule = solve(benchmark_population, two_level(c, 0.2))
        assert societal_utility(schedule) == pytest.approx(analytic_societal(c), rel=1e-7)
    assert analytic_societal(4.0 / 7.0) == pytest.approx(0.40476, abs=1e-3)
    assert analytic_societal(0.8) == pytest.approx(0.32, abs=1e-12)


def test_private_matches_analytic(benchmark_population):
    for c in (0.3, 0.5, 0.8):
        schedule = solve(benchmark_population, two_level(c, 0.2))
        assert private_utility(schedule) == pytest.approx(analytic_private(c), rel=1e-7)
    sched = solve(benchmark_population, two_level(0.8, 0.2))
    assert private_utility(sched) == pytest.approx(0.32, abs=1e-9)
    low = private_utility(solve(benchmark_population, two_level(0.5, 0.2)))
    assert private_utility(sched) > low


def test_pure_randomization_extremes(benchmark_population):
    schedule = solve(benchmark_population, two_level(0.0, 0.2))
    assert applicant_welfare(schedule) == 0.2  # exact: zero effort cost integrand
    assert societal_utility(schedule) == 0.0
    assert private_utility(schedule) == 0.0


def test_welfare_continuity_near_zero_cutoff(benchmark_population):
    schedule = solve(benchmark_population, two_level(1e-3, 0.2))
    assert applicant_welfare(schedule) == pytest.approx(0.2, abs=1e-3)


def test_report_identity_and_fields(benchmark_population):
    schedule = solve(benchmark_population, two_level(0.8, 0.2))
    report = welfare_report(schedule)
    cost = sum(report.per_band_effort_cost)
    assert report.applicant_welfare + cost == pytest.approx(0.2, abs=1e-8)
    assert report.applicant_welfare <= 0.2
    assert len(report.per_band_effort_cost) == 2
    assert report.per_band_effort_cost[0] == 0.0
    assert math.isfinite(report.quadrature_error_estimate)
    payload = report.to_json()
    assert payload["private_utility"] == pytest.approx(0.32, abs=1e-9)
    assert report.mean_admitted_score(0.2) == pytest.approx(1.6, abs=1e-8)


def test_sweep_monotonicity(benchmark_population):
    cs = [0.05 * i for i in range(1, 17)]  # up to 0.8 = 1 - rho
    rows = two_level_sweep(benchmark_population, 0.2, cs)
    welfare = [r[2] for r in rows]
    private = [r[4] for r in rows]
    for a, b in zip(welfare, welfare[1:]):
        assert b <= a + 1e-9
    for a, b in zip(private, private[1:]):
        assert b >= a - 1e-9


def test_private_bounded_by_societal(benchmark_population):
    for policy in (two_level(0.5, 0.2), RewardPolicy((0.0, 0.2, 0.5, 1.0), (0.4, 0.7, 0.9), 0.26)):
        schedule = solve(benchmark_population, policy)
        assert private_utility(schedule) <= societal_utility(schedule) * max(policy.levels) + 1e-12


def test_multilevel_welfare_consistent_with_montecarlo(benchmark_population):
    """Sample-mean cross-check of the quadrature on a four-level policy."""
    policy = RewardPolicy((0.0, 0.2, 0.5, 1.0), (0.4, 0.7, 0.9), 0.26)
    schedule = solve(benchmark_population, policy)
    rng = np.random.default_rng(29)
    thetas = rng.uniform(0.0, 1.0, 200_000)
    from rankdesign import effort_at, reward_at, score_at

    scores = np.array([score_at(schedule, t) for t in thetas])
    costs = np.array([benchmark_population.p.evaluate(effort_at(schedule, t)) for t in thetas])
    rewards = np.array([reward_at(policy, t) for t in thetas])
    assert societal_utility(schedule) == pytest.approx(scores.mean(), abs=3e-3)
    assert applicant_welfare(schedule) == pytest.approx((rewards - costs).mean(), abs=3e-3)
    assert private_utility(schedule) == pytest.approx((scores * rewards).mean(), abs=3e-3)
