"""When does a middle admission tier beat straight top-k admissions?

For the school's own objective, two-level policies are best at the
non-randomized extreme.  With three levels that logic can fail: on a
skill distribution with a thin elite tail, inserting a middle tier with
partial admission odds whips up competition at the very top and raises the
expected score of the admitted class.
"""

from rankdesign import (
    PopulationSpec,
    Power,
    Role,
    find_three_level_improvement,
    private_utility,
    solve,
    three_level_counterexample_check,
    two_level,
)

rho = 0.2

heavy_tail = PopulationSpec(
    f=Power(1.0, 8.0, role=Role.SKILL_QUANTILE),  # most mass low-skilled, thin elite
    g=Power(1.0, 0.5, role=Role.EFFORT_TRANSFER),
    p=Power(1.0, 2.0, role=Role.COST_FUNCTION),
)
uniform = PopulationSpec(
    f=Power(2.0, 1.0, role=Role.SKILL_QUANTILE),
    g=Power(1.0, 0.5, role=Role.EFFORT_TRANSFER),
    p=Power(1.0, 2.0, role=Role.COST_FUNCTION),
)

baseline = private_utility(solve(heavy_tail, two_level(1.0 - rho, rho)))
print(f"Heavy-tail skills, non-randomized two-level baseline: {baseline:.5f}")

result = find_three_level_improvement(heavy_tail, rho, search_budget=10_000, seed=0)
if result is None:
    print("No improving three-level policy found.")
else:
    print(
        f"Best three-level policy: middle tier odds x = {result.x:.3f}, "
        f"cutpoints ({result.c1:.3f}, {result.c2:.3f})"
    )
    print(f"  school utility {result.value:.5f} vs baseline {result.baseline:.5f} "
          f"(margin {result.margin:.5f})")
    check = three_level_counterexample_check(heavy_tail, result.x, result.c1, result.c2, rho)
    print(f"  skill-only inequality: lhs {check.lhs:.5f} vs rhs {check.rhs:.5f} "
          f"({'agrees' if (check.lhs > check.rhs) == check.holds else 'disagrees'} with quadrature)")

print("\nSame search on uniform skills:")
flat = find_three_level_improvement(uniform, rho, search_budget=10_000, seed=0)
print("  improvement found" if flat else "  none found; top-k admissions stay optimal here")
