"""
States that saturate strong subadditivity
=========================================

Mix K components whose 12-reductions live on orthogonal blocks of both
subsystem 1 and subsystem 2, and attach a different state of subsystem 3 to
each. Subsystem 3 then carries no extra information about subsystem 1
although it is correlated with subsystem 2.
"""

import numpy as np

import ssalab as sl

###############################################################################
# Three blocks of size 2 on C^6 (x) C^6, and a qutrit as subsystem 3.
alloc = sl.BlockAllocation.uniform((2, 2, 2))
rho, mix = sl.theorem2_family((6, 6, 3), alloc, (0.5, 0.3, 0.2), rng=11)
print("components:", len(mix), " weights:", mix.weights)

###############################################################################
# The two sides of the inequality agree to rounding error.
i12 = sl.mutual_information(rho, 1, 2)
i1_23 = sl.mutual_information(rho, 1, (2, 3))
print(f"I(1;2) = {i12:.12f}\nI(1;23) = {i1_23:.12f}")

###############################################################################
# Subsystems 2 and 3 are still correlated, and all of that correlation is
# also visible from 12 as a whole.
print(f"I(2;3) = {sl.mutual_information(rho, 2, 3):.6f}   I(12;3) = {sl.mutual_information(rho, (1, 2), 3):.6f}")

###############################################################################
# The packaged check runs the same comparisons and reports residuals.
for r in sl.verify.verify_theorem2((6, 6, 3), alloc, (0.5, 0.3, 0.2), np.random.default_rng(11)):
    print(f"{r.check_name:<26} residual {r.residual:.1e}  {'ok' if r.passed else 'FAILED'}")

###############################################################################
# With a single shared state on subsystem 3 the correlation between 2 and 3
# disappears.
rho_same, _ = sl.theorem2_family((4, 4, 2), sl.BlockAllocation.uniform((2, 2)), (0.5, 0.5), 5, distinct_rho3=False)
print("shared factor: I(2;3) =", round(sl.mutual_information(rho_same, 2, 3), 12))
