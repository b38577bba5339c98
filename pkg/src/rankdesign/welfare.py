"""Aggregate welfare functionals of an equilibrium schedule.

Three stakeholders, three functionals over the unit mass of applicants:

* applicant welfare  = capacity - E[p(e)]   (reward mass is fixed)
* societal utility   = E[v]                  (everyone's score counts)
* private utility    = E[v * reward]         (the school sees only admits)

All are band-wise integrals of piecewise-smooth functions, so quadrature is
split at band cutpoints and switch points.
"""

from __future__ import annotations

from dataclasses import dataclass

from .equilibrium import EquilibriumSchedule, _band_effort, _band_score
from .quadrature import DEFAULT_REL_TOL, integrate_piecewise


@dataclass(frozen=True)
class WelfareReport:
    applicant_welfare: float
    societal_utility: float
    private_utility: float
    per_band_effort_cost: tuple[float, ...]
    quadrature_error_estimate: float

    def mean_admitted_score(self, capacity: float) -> float:
        """The conditional reading of private utility: score per admitted unit."""
        return self.private_utility / capacity

    def to_json(self) -> dict:
        return {
            "applicant_welfare": self.applicant_welfare,
            "societal_utility": self.societal_utility,
            "private_utility": self.private_utility,
            "per_band_effort_cost": list(self.per_band_effort_cost),
            "quadrature_error_estimate": self.quadrature_error_estimate,
        }


def _band_pieces(schedule: EquilibriumSchedule, k: int) -> list[float]:
    band = schedule.bands[k]
    pts = {band.lo, band.hi}
    if band.switch_point is not None:
        pts.add(band.switch_point)
    # the integrand varies on the scale of the band's lower edge (effort decays
    # like a power of lo/theta); a geometric ladder keeps each piece resolvable
    edge = band.lo
    while 0.0 < edge < 0.125 * band.hi:
        edge *= 2.0
        pts.add(edge)
    return sorted(pts)


def band_effort_cost(schedule: EquilibriumSchedule, k: int, rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    """Integral of p(e(theta)) over band k."""
    pop = schedule.population
    band = schedule.bands[k]

    def integrand(theta: float) -> float:
        return pop.p.evaluate(_band_effort(pop, band, theta))

    return integrate_piecewise(integrand, _band_pieces(schedule, k), rel_tol)


def total_effort_cost(schedule: EquilibriumSchedule, rel_tol: float = DEFAULT_REL_TOL) -> tuple[float, float]:
    costs = [band_effort_cost(schedule, k, rel_tol) for k in range(schedule.policy.k)]
    return sum(v for v, _ in costs), sum(e for _, e in costs)


def applicant_welfare(schedule: EquilibriumSchedule, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """capacity - E[p(e)]; equals capacity exactly under pure randomization."""
    cost, _ = total_effort_cost(schedule, rel_tol)
    return schedule.policy.capacity - cost


def societal_utility(schedule: EquilibriumSchedule, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E[v] over the whole population."""
    pop = schedule.population
    total = 0.0
    for k in range(schedule.policy.k):
        band = schedule.bands[k]

        def integrand(theta: float, band=band) -> float:
            return _band_score(pop, band, theta)

        v, _ = integrate_piecewise(integrand, _band_pieces(schedule, k), rel_tol)
        total += v
    return total


def private_utility(schedule: EquilibriumSchedule, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """E[v * reward]; rank preservation lets the reward be read at the pre-effort rank."""
    pop = schedule.population
    total = 0.0
    for k in range(schedule.policy.k):
        band = schedule.bands[k]
        level = schedule.policy.levels[k]
        if level == 0.0:
            continue

        def integrand(theta: float, band=band, level=level) -> float:
            return level * _band_score(pop, band, theta)

        v, _ = integrate_piecewise(integrand, _band_pieces(schedule, k), rel_tol)
        total += v
    return total


def welfare_report(schedule: EquilibriumSchedule, rel_tol: float = DEFAULT_REL_TOL) -> WelfareReport:
    per_band = []
    err_total = 0.0
    for k in range(schedule.policy.k):
        v, e = band_effort_cost(schedule, k, rel_tol)
        per_band.append(v)
        err_total += e
    return WelfareReport(
        applicant_welfare=schedule.policy.capacity - sum(per_band),
        societal_utility=societal_utility(schedule, rel_tol),
        private_utility=private_utility(schedule, rel_tol),
        per_band_effort_cost=tuple(per_band),
        quadrature_error_estimate=err_total,
    )


def two_level_sweep(population, capacity: float, cs, rel_tol: float = DEFAULT_REL_TOL):
    """Welfare profile over two-level cutoffs; rows (c, level1, W, U_soc, U_pri)."""
    from .equilibrium import solve
    from .policy import two_level

    rows = []
    for c in cs:
        pol = two_level(c, capacity)
        sched = solve(population, pol)
        rep = welfare_report(sched, rel_tol)
        rows.append(
            (
                c,
                pol.levels[-1],
                rep.applicant_welfare,
                rep.societal_utility,
                rep.private_utility,
            )
        )
    return rows
