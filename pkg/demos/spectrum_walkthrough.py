# Closed-form spectra, pole by pole.
#
# The angular and radial action variables are sums of residues of the quantum
# momentum function at the fixed singular points. Setting each one to hbar*n
# and solving for E gives the spectra; this script walks through one level of
# each potential and then prints the low-lying tables.

# %%
from qhjspectra import Hartmann, QuantumNumbers, RingOscillator, UnitSystem, solve_level
from qhjspectra.residue_engine import radial_contributions, theta_contributions

units = UnitSystem(hbar=1.0)
hartmann = Hartmann(alpha=-1.0, beta=0.5)
qn = QuantumNumbers(n_r=1, n_theta=1, m=1)
level = solve_level(hartmann, qn, units)
print(f"Hartmann {qn}: E = {level.energy:.12f}, a = {level.constants.a:.6f}, l^2 = {level.l_squared:.6f}")

# %% [markdown]
# J_theta collects the poles of the angular momentum function at y = +i, -i
# (y = -cot theta) and at infinity. The +i and -i pieces are equal.

# %%
for c in theta_contributions(level.constants.a, level.constants.b, hartmann.beta, units):
    k = c.coefficients
    print(f"  {c.location:<15} J = {c.value:+.12f}   a0 = {k.a0}, b1 = {k.b1}")
print(f"  sum = {level.j_theta:+.12f}  (hbar * n_theta = {qn.n_theta})")

# %%
for c in radial_contributions(hartmann, level.energy, level.constants.a, units):
    print(f"  {c.location:<15} J = {c.value:+.12f}")
print(f"  sum = {level.j_r:+.12f}  (hbar * n_r = {qn.n_r})")

# %% [markdown]
# For the ring oscillator the radial contour picks up the origin, infinity and
# the mirror nodes on the negative axis; by symmetry J_r is half of the
# origin-plus-infinity sum.

# %%
ring = RingOscillator(alpha=4.0, beta=3.0)
level = solve_level(ring, QuantumNumbers(2, 0, 1), units)
origin, infinity = radial_contributions(ring, level.energy, level.constants.a, units)
print(f"ring E = {level.energy}: J0 = {origin.value:+.6f}, Jinf = {infinity.value:+.6f}, "
      f"J_r = (J0 + Jinf)/2 = {level.j_r:+.6f}")

# %% [markdown]
# Degeneracies: Hartmann levels depend on n_r + n_theta, ring levels on 2 n_r + n_theta.

# %%
print("\nHartmann alpha=-1, beta=0")
print(" n_r n_th  m        E")
for n_r in range(3):
    for n_t in range(3 - n_r):
        for m in range(2):
            e = solve_level(Hartmann(-1.0, 0.0), QuantumNumbers(n_r, n_t, m), units).energy
            print(f"{n_r:4d}{n_t:5d}{m:3d}  {e:+.10f}")

print("\nring alpha=1, beta=0")
for n_r in range(2):
    for n_t in range(3):
        e = solve_level(RingOscillator(1.0, 0.0), QuantumNumbers(n_r, n_t, 0), units).energy
        print(f"{n_r:4d}{n_t:5d}  0  {e:8.3f}")
