"""Reference constants used by the predictors and the verification tables.

Each tabulated entry carries a short provenance string so the origin of a
number survives refactoring.
"""

import math

# Intercepts a_n of the collapsing-star curvature form R = a_n - b_n * sum 1/(rho(1-rho)),
# keyed by parent count.  These are reference values, not fitted ones; the
# n = 5 entry disagrees with the fitted intercept (1320), which the test
# suite reports rather than hides.
COLLAPSING_STAR_INTERCEPTS = {
    1: (1.5, "reference intercept, single parent (collider reduces to a 2-node chain)"),
    2: (10.0, "reference intercept, two-parent collider"),
    3: (54.0, "reference intercept, three-parent collider"),
    4: (272.0, "reference intercept, four-parent collider"),
    5: (1008.0, "reference intercept, five-parent collider"),
}

# Volume of K_n stops growing once pi**(2**(n-1)) is beaten by the factorial;
# the continuous crossover sits at n = log2(pi**2).
VOLUME_TURNAROUND = math.log2(math.pi**2)
VOLUME_TURNAROUND_PROVENANCE = "continuous crossover of the complete-DAG volume sequence"

BURES_FISHER_RATIO = 0.25
BURES_PROVENANCE = "Bures metric equals one quarter of the Fisher metric on diagonal states"

# Reduced two-parameter average of the double collider under the weight
# [r1 (1 - r1) r2 (1 - r2)]**(5/2).
D4_REDUCED_AVERAGE = 36 / 5
D4_REDUCED_PROVENANCE = "reduced double-collider average, weight exponent 5/2"
