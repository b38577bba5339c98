"""Multi-skill extensions: combined pre-effort index and unmeasurable skill.

With a linear effort transfer and a cost on total effort, agents concentrate
all effort on the skill where their weighted quantile is largest, so the
combined pre-effort index max_i alpha_i f_i(theta_i) governs the realized
reward order.  That ordering claim is verified empirically through the
discrete oracle rather than a closed form.

The unmeasurable-skill model fixes an effort budget B split between a ranked,
measurable skill and an unranked one (e_u = B - e_m), and weights the
school's utility between the two conditional score means; for every interior
cutoff there is a weight that makes it the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AssumptionError, DomainError, ModelError
from .functions import FunctionSpec, PopulationSpec, Power, Role
from .oracle import DiscreteInstance, best_response_dynamics
from .policy import RewardPolicy
from .quadrature import adaptive_simpson, integrate_piecewise


@dataclass(frozen=True)
class MultiSkillSpec:
    """m skills ranked by a weighted linear score h * sum_i alpha_i e_i f_i."""

    quantiles: tuple[FunctionSpec, ...]
    weights: tuple[float, ...]
    transfer_slope: float
    cost: FunctionSpec

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.quantiles) != len(self.weights) or not self.quantiles:
            raise DomainError("need one weight per skill quantile")
        if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-12:
            raise DomainError("weights must be a probability vector")
        if self.transfer_slope <= 0:
            raise DomainError("transfer slope must be positive")

    @property
    def m(self) -> int:
        return len(self.quantiles)


def pre_index(spec: MultiSkillSpec, ranks) -> tuple[float, int]:
    """Combined pre-effort index max_i alpha_i f_i(rank_i), ties to lowest skill."""
    if len(ranks) != spec.m:
        raise DomainError(f"expected {spec.m} ranks, got {len(ranks)}")
    best_value = -math.inf
    best_skill = 0
    for i, (w, f, r) in enumerate(zip(spec.weights, spec.quantiles, ranks)):
        if not (0.0 <= r <= 1.0):
            raise DomainError(f"rank {r!r} outside [0, 1]")
        v = w * f.evaluate(r)
        if v > best_value:
            best_value = v
            best_skill = i
    return best_value, best_skill


@dataclass(frozen=True)
class MultidimReport:
    converged: bool
    rounds: int
    rows: tuple[tuple[int, float, int, bool], ...]  # (agent, v_pre, band, violation)

    @property
    def violations(self) -> tuple[tuple[int, float, int, bool], ...]:
        return tuple(r for r in self.rows if r[3])

    @property
    def ok(self) -> bool:
        return self.converged and not self.violations


def check_multidim_rank_preservation(
    spec: MultiSkillSpec,
    sample_size: int,
    policy: RewardPolicy,
    seed: int = 0,
    delta_e: float = 1e-3,
    max_rounds: int = 2000,
    index_rule: str = "max",
) -> MultidimReport:
    """Sample agents, run the discrete contest, compare rewards to the index.

    Behavior always follows the true best response (all effort on the argmax
    skill); ``index_rule`` only selects the comparison index, so "min" acts
    as a deliberately wrong index for negative controls.
    """
    if sample_size < 2:
        raise DomainError("sample_size must be at least 2")
    if index_rule not in ("max", "min"):
        raise DomainError("index_rule must be 'max' or 'min'")
    rng = np.random.default_rng(seed)
    ranks = rng.uniform(0.0, 1.0, size=(sample_size, spec.m))
    true_index = np.array([pre_index(spec, row)[0] for row in ranks])
    if index_rule == "max":
        comparison = true_index
    else:
        comparison = np.array(
            [min(w * f.evaluate(r) for w, f, r in zip(spec.weights, spec.quantiles, row)) for row in ranks]
        )
    # agents ordered by true index so the oracle's index tie-break is assortative
    order = np.argsort(true_index, kind="stable")
    population = PopulationSpec(
        f=Power(1.0, 1.0, role=Role.SKILL_QUANTILE),
        g=Power(spec.transfer_slope, 1.0, role=Role.EFFORT_TRANSFER),
        p=spec.cost,
        e0=0.0,
    )
    instance = DiscreteInstance.stratified(population, policy, sample_size, delta_e)
    instance.skill = true_index[order]
    result = best_response_dynamics(instance, max_rounds=max_rounds)
    bands = result.instance.assigned_bands()
    cmp_sorted = comparison[order]
    rows = []
    running_max_band = -1
    for pos in np.argsort(cmp_sorted, kind="stable"):
        band = int(bands[pos])
        violation = band < running_max_band
        running_max_band = max(running_max_band, band)
        rows.append((int(order[pos]), float(cmp_sorted[pos]), band, bool(violation)))
    return MultidimReport(result.converged, result.rounds, tuple(rows))


@dataclass(frozen=True)
class UnmeasurableSpec:
    """Two skills sharing a quantile; only one is ranked, efforts sum to a budget."""

    f: FunctionSpec
    g: FunctionSpec
    p: FunctionSpec
    budget: float
    capacity: float
    beta: float | None = None

    def __post_init__(self):
        if self.budget <= 0:
            raise DomainError("budget must be positive")
        if not (0.0 < self.capacity < 1.0):
            raise DomainError("capacity outside (0, 1)")
        if self.beta is not None and not (0.0 < self.beta < 1.0):
            raise DomainError("beta must lie in (0, 1)")
        if self.g.evaluate(0.0) != 0.0:
            raise ModelError("unmeasurable-skill formulas require g(0) = 0")

    def _population(self) -> PopulationSpec:
        return PopulationSpec(f=self.f, g=self.g, p=self.p, e0=0.0)


def measurable_conditional_mean(spec: UnmeasurableSpec, c: float) -> float:
    """E[score of the ranked skill | admitted] = g(threshold effort) * f(c)."""
    _check_cutoff(spec, c)
    pop = spec._population()
    tilde_e0 = pop.cost_inverse(spec.capacity / (1.0 - c))
    return spec.g.evaluate(tilde_e0) * spec.f.evaluate(c)


def unmeasurable_conditional_mean(spec: UnmeasurableSpec, c: float) -> float:
    """E[score of the unranked skill | admitted] under the budget split."""
    _check_cutoff(spec, c)
    pop = spec._population()
    tilde_e0 = pop.cost_inverse(spec.capacity / (1.0 - c))
    if spec.budget < tilde_e0:
        raise ModelError(
            f"budget {spec.budget!r} below the threshold effort {tilde_e0!r} at c={c!r}"
        )
    floor = spec.g.evaluate(tilde_e0) * spec.f.evaluate(c)

    def leftover_transfer(theta: float) -> float:
        e_m = spec.g.invert(floor / spec.f.evaluate(theta))
        return spec.g.evaluate(spec.budget - e_m)

    mean_f, _ = adaptive_simpson(lambda q: spec.f.evaluate(q), 0.0, 1.0)
    integral, _ = integrate_piecewise(leftover_transfer, [c, 1.0])
    return mean_f * integral / (1.0 - c)


def _check_cutoff(spec: UnmeasurableSpec, c: float) -> None:
    if not (0.0 < c < 1.0 - spec.capacity):
        raise DomainError(f"cutoff {c!r} outside (0, 1 - capacity)")


def beta_for_interior_optimum(spec: UnmeasurableSpec, c: float, h: float = 1e-5) -> float:
    """Weight on the ranked skill that makes cutoff c the interior optimum.

    beta = -dU / (dM - dU) with dM, dU the central-difference derivatives of
    the two conditional means in c; their signs (dM > 0, dU < 0) are checked
    and an AssumptionError reports the measured values when they fail.
    """
    _check_cutoff(spec, c - h)
    _check_cutoff(spec, c + h)
    d_m = (measurable_conditional_mean(spec, c + h) - measurable_conditional_mean(spec, c - h)) / (2 * h)
    d_u = (unmeasurable_conditional_mean(spec, c + h) - unmeasurable_conditional_mean(spec, c - h)) / (2 * h)
    if not (d_m > 0.0 and d_u < 0.0):
        raise AssumptionError(
            f"derivative signs violated: d(measurable)/dc = {d_m!r}, d(unmeasurable)/dc = {d_u!r}"
        )
    return -d_u / (d_m - d_u)


def weighted_private_utility(spec: UnmeasurableSpec, c: float, beta: float | None = None) -> float:
    """beta * E[v_measurable | admitted] + (1 - beta) * E[v_unmeasurable | admitted]."""
    b = spec.beta if beta is None else beta
    if b is None:
        raise DomainError("beta is required, either on the spec or as an argument")
    if not (0.0 <= b <= 1.0):
        raise DomainError("beta must lie in [0, 1]")
    return b * measurable_conditional_mean(spec, c) + (1.0 - b) * unmeasurable_conditional_mean(
        spec, c
    )
