"""Ranking one skill crowds out another the ranker cannot see.

Each applicant splits a fixed effort budget between a measurable skill (the
one being ranked) and an unmeasurable one the school also values.  Sharper
competition pulls effort into the measured dimension, so the admitted
class's unmeasured quality falls as the cutoff rises.  For any interior
cutoff there is a weight beta on the measured skill that makes that cutoff
exactly optimal for the school's blended objective.
"""

from rankdesign import (
    Power,
    Role,
    UnmeasurableSpec,
    beta_for_interior_optimum,
    measurable_conditional_mean,
    unmeasurable_conditional_mean,
    weighted_private_utility,
)

spec = UnmeasurableSpec(
    f=Power(1.0, 1.0),
    g=Power(1.0, 0.5, role=Role.EFFORT_TRANSFER),
    p=Power(1.0, 2.0, role=Role.COST_FUNCTION),
    budget=2.0,
    capacity=0.2,
)

print("Admitted-class score means as the cutoff rises:")
print("    c    measured   unmeasured")
for c in (0.1, 0.25, 0.4, 0.55, 0.7):
    vm = measurable_conditional_mean(spec, c)
    vu = unmeasurable_conditional_mean(spec, c)
    print(f"  {c:.2f}    {vm:.4f}     {vu:.4f}")

c0 = 0.4
beta = beta_for_interior_optimum(spec, c0)
print(f"\nWeight making c = {c0} the school's optimum: beta = {beta:.4f}")

h = 1e-4
util = lambda c: weighted_private_utility(spec, c, beta=beta)
derivative = (util(c0 + h) - util(c0 - h)) / (2 * h)
print(f"d(weighted utility)/dc at c0: {derivative:.2e}  (zero at the constructed optimum)")

print("\nWeighted utility around the optimum:")
for c in (0.3, 0.35, 0.4, 0.45, 0.5):
    print(f"  c = {c:.2f}: {util(c):.6f}")
