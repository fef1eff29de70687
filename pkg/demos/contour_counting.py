# Counting nodes with a contour integral.
#
# Continue the regular radial solution into the complex r plane, wrap it once
# around an ellipse through the classical region and integrate the quantum
# momentum function. The result is hbar times the number of zeros enclosed,
# so sweeping E shows a staircase whose steps sit just above the oracle
# eigenvalues.

# %%
import numpy as np

from qhjspectra import Hartmann, UnitSystem
from qhjspectra.contour_numerics import contour_action, default_contour, radial_problem
from qhjspectra.schrodinger_oracle import radial_eigen

units = UnitSystem(1.0)
coulomb = Hartmann(-1.0, 0.0)
big_l = 1

levels = [radial_eigen(coulomb, big_l, n, units).eigenvalue for n in range(3)]
print("oracle levels:", ", ".join(f"{e:.10f}" for e in levels))

# %%
print("\n      E        Re J          Im J      samples")
for E in np.linspace(-0.06, -0.0125, 12):
    est = contour_action(radial_problem(coulomb, big_l, E, units))
    print(f"{E:+.5f}  {est.value.real:+.3e}  {est.value.imag:+.1e}  {est.n_samples:6d}")

# %% [markdown]
# At each eigenvalue the count equals n_r. The trapezoid sums converge
# geometrically because the integrand is periodic and analytic on the ellipse.

# %%
for n, E in enumerate(levels):
    problem = radial_problem(coulomb, big_l, E, units)
    est = contour_action(problem)
    path = default_contour(problem)
    print(f"n_r={n}: J = {est.value.real:.12f}  ellipse center {path.center.real:.3f}, "
          f"semi-axes {path.semi_axes[0]:.3f} x {path.semi_axes[1]:.3f}")
    for n_samples, value in est.refinement_history:
        print(f"    {n_samples:6d} samples: {value.real:+.15f}")
