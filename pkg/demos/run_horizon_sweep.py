"""Finite horizons converging to the infinite-horizon region.

For a stable spectrum the normalized volume sum V_N increases with the
horizon and converges to the full-spectrum distribution factor at rate
max|lambda|^N.  The tail is bounded by (sum of non-empty subset term
magnitudes) * max|lambda|^N, a constant this script also prints.
"""

from reachvol import (
    EigenStructure,
    analytic_volume_sum,
    analytic_volume_terms,
    full_volume,
    infinite_volume_sum,
)

lam = [0.5, 0.8]
eig = EigenStructure.from_spectrum(lam, [1.0, 1.0])
v_inf = infinite_volume_sum(lam)
C = sum(abs(t.dist_in * t.dist_out)
        for t in analytic_volume_terms(lam, 100) if t.subset)

print(f"spectrum {lam}: infinite-horizon normalized volume = {v_inf}")
print(f"tail constant C = sum of non-empty term magnitudes = {C}")
print()
print(f"{'N':>4} {'V_N':>16} {'V_inf - V_N':>14} {'C*0.8^N':>14}")
for N in range(2, 41, 2):
    v = analytic_volume_sum(lam, N)
    print(f"{N:>4} {v:>16.10f} {v_inf - v:>14.3e} {C * 0.8 ** N:>14.3e}")

print()
rep = full_volume(eig, None)
print(f"infinite-horizon region volume (2^n prefactor applied): {rep.volume}")
