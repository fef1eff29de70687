"""Spectra of the Hartmann and ring-oscillator potentials from exact quantization.

Energies follow from the quantum action variables J_theta = hbar n_theta and
J_r = hbar n_r, evaluated by residues of the quantum momentum function. Two
independent numerical checks are included: contour integration of the
continued wavefunction and a Numerov shooting solver.
"""

__version__ = "0.1.0"

from .analytic_spectra import (
    LevelRecord,
    TurningPoints,
    angular_turning_points,
    classical_action_closed_form,
    energy,
    energy_hartmann,
    energy_ring,
    j_r_closed_form,
    j_theta_closed_form,
    radial_turning_points,
    solve_level,
)
from .contour_numerics import classical_action_numeric, contour_action, level_contour_actions
from .potentials import (
    Hartmann,
    QuantumNumbers,
    RingOscillator,
    SeparationConstants,
    UnitSystem,
    potential_from_name,
)
from .residue_engine import assemble_j_r, assemble_j_theta
from .schrodinger_oracle import angular_eigen, full_level_check, radial_eigen
