"""Discrete-agent brute-force verification of the closed-form equilibrium.

N agents occupy stratified ranks; rewards are assigned by sorting scores
(descending, ties broken toward the lower agent index) and reading the
policy at the slot rank 1 - (j + 0.5)/N of each sorted position j.

Deviations are evaluated counterfactually against the *standing* score
distribution: when agent i contemplates a new score, every current score --
including agent i's own -- stays in place as a competitor.  This mirrors the
continuum equilibrium condition, where a single applicant is mass zero and
cannot vacate band capacity by moving: dropping below one's own standing
score cannot open a free slot in the band.  A naive re-sort that removes the
deviator's old score would leave every band one slot short and make "shade
to the band floor" spuriously profitable at any profile, including the exact
continuum equilibrium.

The position of a deviation score s for agent i is therefore

    pos(i, s) = #{j: score_j > s} + #{j != i: score_j == s and j < i}

which reduces to the agent's current position when s equals their current
score, counts the standing copy of their own score for downward moves, and
applies the index tie-break otherwise.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right, insort
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import EquilibriumSchedule, effort_at
from .errors import DomainError, RangeError
from .functions import PopulationSpec
from .policy import RewardPolicy
from .welfare import WelfareReport


@dataclass
class DiscreteInstance:
    """Finite instantiation of the ranking game on an effort grid."""

    population: PopulationSpec
    policy: RewardPolicy
    ranks: np.ndarray          # pre-effort ranks, ascending
    skill: np.ndarray          # f(rank) (or caller-supplied multipliers)
    efforts: np.ndarray
    delta_e: float
    e_max: float

    def __post_init__(self):
        self.ranks = np.asarray(self.ranks, dtype=float)
        self.skill = np.asarray(self.skill, dtype=float)
        self.efforts = np.asarray(self.efforts, dtype=float)
        if self.delta_e <= 0:
            raise DomainError("effort grid resolution must be positive")
        if self.n == 0:
            raise DomainError("instance needs at least one agent")

    @property
    def n(self) -> int:
        return len(self.ranks)

    # -- construction ------------------------------------------------------

    @staticmethod
    def stratified(
        population: PopulationSpec,
        policy: RewardPolicy,
        n: int,
        delta_e: float,
        e_max: float | None = None,
        seed: int | None = None,
    ) -> "DiscreteInstance":
        """Midpoint-stratified ranks (i + 0.5)/n; a seed switches to Monte Carlo ranks."""
        if n < 1:
            raise DomainError("need at least one agent")
        if seed is None:
            ranks = (np.arange(n) + 0.5) / n
        else:
            ranks = np.sort(np.random.default_rng(seed).uniform(0.0, 1.0, n))
        skill = np.array([population.f.evaluate(t) for t in ranks])
        if e_max is None:
            e_max = default_effort_cap(population, policy, delta_e)
        efforts = np.full(n, float(population.e0))
        return DiscreteInstance(population, policy, ranks, skill, efforts, delta_e, e_max)

    @staticmethod
    def from_schedule(
        schedule: EquilibriumSchedule,
        n: int,
        delta_e: float,
        e_max: float | None = None,
    ) -> "DiscreteInstance":
        """Instance seeded with the closed-form efforts at stratified ranks."""
        inst = DiscreteInstance.stratified(schedule.population, schedule.policy, n, delta_e, e_max)
        inst.efforts = np.array([effort_at(schedule, t) for t in inst.ranks])
        return inst

    # -- scoring and reward assignment --------------------------------------

    def scores(self) -> np.ndarray:
        g = self.population.g
        return np.array([g.evaluate(e) for e in self.efforts]) * self.skill

    def positions(self, scores: np.ndarray | None = None) -> np.ndarray:
        """Sorted position of each agent: descending score, lower index first."""
        s = self.scores() if scores is None else scores
        order = np.lexsort((np.arange(self.n), -s))
        pos = np.empty(self.n, dtype=int)
        pos[order] = np.arange(self.n)
        return pos

    def slot_ranks(self, positions: np.ndarray) -> np.ndarray:
        return 1.0 - (positions + 0.5) / self.n

    def assigned_levels(self, scores: np.ndarray | None = None) -> np.ndarray:
        ranks = self.slot_ranks(self.positions(scores))
        bands = np.searchsorted(self.policy.cutpoints, ranks, side="right")
        return np.asarray(self.policy.levels)[bands]

    def assigned_bands(self, scores: np.ndarray | None = None) -> np.ndarray:
        ranks = self.slot_ranks(self.positions(scores))
        return np.searchsorted(self.policy.cutpoints, ranks, side="right")

    def costs(self) -> np.ndarray:
        p = self.population.p
        return np.array([p.evaluate(e) for e in self.efforts])

    def welfares(self) -> np.ndarray:
        return self.assigned_levels() - self.costs()

    def effort_grid(self) -> np.ndarray:
        grid = np.arange(0.0, self.e_max + 0.5 * self.delta_e, self.delta_e)
        e0 = self.population.e0
        if e0 > 0 and not np.any(np.isclose(grid, e0)):
            grid = np.sort(np.append(grid, e0))
        return grid


def default_effort_cap(population: PopulationSpec, policy: RewardPolicy, delta_e: float) -> float:
    """Efforts costing more than the top reward are never best responses."""
    span = policy.levels[-1] - policy.levels[0]
    cap = population.cost_inverse(span) if span > 0 else population.e0
    return max(cap, population.e0) + 2.0 * delta_e


class _StandingScores:
    """Counterfactual position/level lookups against the standing profile.

    Maintains the full score multiset (every agent's standing score stays in
    place as a competitor) with incremental updates as the dynamics move one
    agent at a time.
    """

    def __init__(self, instance: DiscreteInstance, scores: np.ndarray):
        self.n = instance.n
        self.sorted_scores: list[float] = sorted(float(s) for s in scores)
        # agent indices holding each distinct score value, ascending
        self.by_value: dict[float, list[int]] = {}
        for idx, s in enumerate(scores):
            self.by_value.setdefault(float(s), []).append(idx)
        self.cutpoints = list(instance.policy.cutpoints)
        self.levels = list(instance.policy.levels)

    def update(self, agent: int, old: float, new: float) -> None:
        old, new = float(old), float(new)
        self.sorted_scores.pop(bisect_left(self.sorted_scores, old))
        insort(self.sorted_scores, new)
        holders = self.by_value[old]
        holders.pop(bisect_left(holders, agent))
        if not holders:
            del self.by_value[old]
        insort(self.by_value.setdefault(new, []), agent)

    def position(self, agent: int, s: float) -> int:
        above = self.n - bisect_right(self.sorted_scores, s)
        holders = self.by_value.get(s)
        if holders:
            # lower-index holders outrank the deviator; the deviator's own
            # standing copy never counts against them
            above += bisect_left(holders, agent)
        return above

    def level_at(self, agent: int, s: float) -> float:
        rank = 1.0 - (self.position(agent, s) + 0.5) / self.n
        return self.levels[bisect_right(self.cutpoints, rank)]

    def nth_highest(self, j: int) -> float:
        return self.sorted_scores[self.n - 1 - j]

    def levels_for_vector(self, agent: int, s: np.ndarray) -> np.ndarray:
        arr = np.asarray(self.sorted_scores)
        pos = self.n - np.searchsorted(arr, s, side="right")
        for idx in np.nonzero(np.isin(s, arr))[0]:
            holders = self.by_value.get(float(s[idx]))
            if holders:
                pos[idx] += bisect_left(holders, agent)
        ranks = 1.0 - (pos + 0.5) / self.n
        bands = np.searchsorted(np.asarray(self.cutpoints), ranks, side="right")
        return np.asarray(self.levels)[bands]


@dataclass
class DynamicsResult:
    converged: bool
    rounds: int
    instance: DiscreteInstance
    cycling_agents: tuple[int, ...] = field(default_factory=tuple)


def _band_entry_positions(instance: DiscreteInstance) -> list[int]:
    """Worst (largest) sorted position whose slot rank still lies in band >= k."""
    n = instance.n
    out = []
    for c in instance.policy.cutpoints:
        j = math.floor(n * (1.0 - c) - 0.5 + 1e-9)
        out.append(j)
    return out


def _grid_ceil(value: float, delta_e: float) -> float:
    k = math.ceil(value / delta_e - 1e-9)
    return max(k, 0) * delta_e


def _best_response(
    instance: DiscreteInstance,
    standing: _StandingScores,
    agent: int,
    entry_positions: list[int],
    improvement_eps: float,
) -> float:
    """Exact grid argmax of counterfactual welfare for one agent.

    Within a band the reward is flat and cost increases with effort, so only
    the cheapest grid effort reaching each band needs testing, plus idling at
    e0 and standing pat.  Tie efforts (exactly matching a standing score) are
    covered by also probing one grid step below each entry effort.
    """
    pop = instance.population
    g, p = pop.g, pop.p
    skill = float(instance.skill[agent])
    current = float(instance.efforts[agent])
    candidates = {current, float(pop.e0), 0.0}
    if skill > 0.0:
        idle = g.evaluate(pop.e0)
        for j in entry_positions:
            if not (0 <= j < instance.n):
                continue
            bar = standing.nth_highest(j)
            if bar < 0.0:
                continue
            target = bar / skill
            if target <= idle:
                entry = pop.e0
            else:
                try:
                    entry = g.invert(target)
                except RangeError:
                    continue
            e = _grid_ceil(entry, instance.delta_e)
            for cand in (e - instance.delta_e, e, e + instance.delta_e):
                if 0.0 <= cand <= instance.e_max:
                    candidates.add(round(cand / instance.delta_e) * instance.delta_e)
    best_effort = current
    best_gain = -math.inf
    current_gain = None
    for e in sorted(candidates):
        if not (0.0 <= e <= instance.e_max):
            continue
        gain = standing.level_at(agent, g.evaluate(e) * skill) - p.evaluate(e)
        if e == current:
            current_gain = gain
        if gain > best_gain:
            best_gain = gain
            best_effort = e
    if current_gain is not None and best_gain > current_gain + improvement_eps:
        return best_effort
    return current


def best_response_dynamics(
    instance: DiscreteInstance,
    max_rounds: int = 200,
    improvement_eps: float = 1e-12,
) -> DynamicsResult:
    """Round-robin sweeps of exact grid best responses.

    Converged on the first sweep that moves nobody.  One-grid-step sweeps are
    not treated as converged: during a slow bidding war every contested agent
    moves exactly one step per sweep for long stretches, so any nonzero
    tolerance would stop the dynamics mid-escalation.
    Non-convergence reports the agents still moving in the final sweep.
    """
    entry_positions = _band_entry_positions(instance)
    last_movers: tuple[int, ...] = ()
    scores = instance.scores()
    standing = _StandingScores(instance, scores)
    g = instance.population.g
    for round_no in range(1, max_rounds + 1):
        moved = False
        movers = []
        for agent in range(instance.n):
            new = _best_response(instance, standing, agent, entry_positions, improvement_eps)
            if new != instance.efforts[agent]:
                old_score = float(scores[agent])
                new_score = g.evaluate(new) * float(instance.skill[agent])
                instance.efforts[agent] = new
                scores[agent] = new_score
                standing.update(agent, old_score, new_score)
                movers.append(agent)
                moved = True
        if not moved:
            return DynamicsResult(True, round_no, instance)
        last_movers = tuple(movers)
    return DynamicsResult(False, max_rounds, instance, last_movers)


@dataclass(frozen=True)
class CertificationResult:
    is_eps_equilibrium: bool
    worst_gain: float
    worst_agent: int
    worst_effort: float
    per_band_max_gain: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "certified": self.is_eps_equilibrium,
            "worst_gain": self.worst_gain,
            "worst_agent": self.worst_agent,
            "worst_effort": self.worst_effort,
            "per_band_max_gain": list(self.per_band_max_gain),
        }


def certify_equilibrium(instance: DiscreteInstance, eps: float) -> CertificationResult:
    """Scan every agent and every grid effort for a counterfactual welfare gain.

    Certifies when no deviation gains more than eps over the agent's assigned
    welfare in the standing profile.
    """
    scores = instance.scores()
    standing = _StandingScores(instance, scores)
    grid = instance.effort_grid()
    g, p = instance.population.g, instance.population.p
    grid_g = np.array([g.evaluate(e) for e in grid])
    grid_cost = np.array([p.evaluate(e) for e in grid])
    current_welfare = instance.assigned_levels(scores) - instance.costs()
    bands = instance.assigned_bands(scores)
    worst = -math.inf
    worst_agent = -1
    worst_effort = float("nan")
    per_band = [-math.inf] * instance.policy.k
    for agent in range(instance.n):
        s_dev = grid_g * instance.skill[agent]
        gains = standing.levels_for_vector(agent, s_dev) - grid_cost - current_welfare[agent]
        i = int(np.argmax(gains))
        gain = float(gains[i])
        band = int(bands[agent])
        per_band[band] = max(per_band[band], gain)
        if gain > worst:
            worst, worst_agent, worst_effort = gain, agent, float(grid[i])
    per_band = [0.0 if v == -math.inf else v for v in per_band]
    return CertificationResult(worst <= eps, worst, worst_agent, worst_effort, tuple(per_band))


def empirical_welfare(instance: DiscreteInstance) -> WelfareReport:
    """Sample means of the three welfare functionals over the instance."""
    scores = instance.scores()
    levels = instance.assigned_levels(scores)
    bands = instance.assigned_bands(scores)
    costs = instance.costs()
    per_band = []
    for k in range(instance.policy.k):
        mask = bands == k
        per_band.append(float(costs[mask].sum()) / instance.n)
    return WelfareReport(
        applicant_welfare=float((levels - costs).mean()),
        societal_utility=float(scores.mean()),
        private_utility=float((scores * levels).mean()),
        per_band_effort_cost=tuple(per_band),
        quadrature_error_estimate=0.0,  # sampling, not quadrature
    )


def instance_rows(instance: DiscreteInstance) -> list[tuple[int, float, float, float, int, float]]:
    """Dump rows (agent, rank, effort, score, band, welfare) for CSV export."""
    scores = instance.scores()
    bands = instance.assigned_bands(scores)
    welfare = instance.assigned_levels(scores) - instance.costs()
    return [
        (
            i,
            float(instance.ranks[i]),
            float(instance.efforts[i]),
            float(scores[i]),
            int(bands[i]),
            float(welfare[i]),
        )
        for i in range(instance.n)
    ]
