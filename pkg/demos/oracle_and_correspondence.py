# Numerov cross-check and the classical limit.
#
# The shooting solver never sees the closed forms. Here it is compared with
# them on a few levels, its grid-halving error ratios are printed (16 for a
# fourth-order method), and the hbar -> 0 deficit between the quantum and
# classical radial actions is tabulated.

# %%
import math

from qhjspectra import (
    Hartmann,
    QuantumNumbers,
    RingOscillator,
    UnitSystem,
    classical_action_numeric,
    full_level_check,
    j_r_closed_form,
)
from qhjspectra.schrodinger_oracle import numerov_error_ratios

units = UnitSystem(1.0)
for pot in (Hartmann(-2.0, 0.75), RingOscillator(4.0, 0.5)):
    for qn in (QuantumNumbers(0, 0, 1), QuantumNumbers(2, 1, 2)):
        cmp = full_level_check(pot, qn, units)
        print(f"{pot.name:8s} {qn}: E = {cmp.e_analytic:+.12f}  Numerov {cmp.e_numeric:+.12f}  rel {cmp.rel_err:.1e}")

# %%
ratios, errors = numerov_error_ratios(Hartmann(-1.0, 0.0), 0, 0, units, -0.25)
print("\nCoulomb ground state, step halved three times")
print("  errors:", ", ".join(f"{e:.2e}" for e in errors))
print("  ratios:", ", ".join(f"{r:.2f}" for r in ratios))

# %% [markdown]
# Quantum minus classical radial action at fixed (E, a). The difference is
# hbar/2 + sqrt((hbar/2)**2 + a) - sqrt(a) for the Hartmann potential and
# vanishes linearly as hbar -> 0.

# %%
pot, E, a = Hartmann(-1.0, 0.0), -0.1, 0.3
classical = classical_action_numeric(pot, E, a)
print(f"\nclassical action = {classical:.12f}")
for hbar in (1.0, 0.1, 0.01, 0.001):
    deficit = classical - j_r_closed_form(pot, E, a, UnitSystem(hbar))
    exact = hbar / 2 + math.sqrt((hbar / 2) ** 2 + a) - math.sqrt(a)
    print(f"  hbar={hbar:<6} deficit={deficit:.12f}  exact={exact:.12f}  deficit/hbar={deficit / hbar:.6f}")
