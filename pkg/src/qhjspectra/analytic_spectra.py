"""Closed-form action variables, energy levels and classical turning points.

The quantum action variables J_theta and J_r are evaluated as explicit
functions of the separation constants and the energy; imposing
J = hbar*n on both gives the spectra. Their hbar -> 0 limits (the
classical radial actions) are provided for correspondence checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvariantError, NoClassicalRegionError
from .potentials import (
    Hartmann,
    PotentialSpec,
    QuantumNumbers,
    RingOscillator,
    SeparationConstants,
    UnitSystem,
    a_from_angular_quantization,
    b_from_m,
    l_squared,
)

__all__ = [
    "LevelRecord",
    "TurningPoints",
    "j_theta_closed_form",
    "j_r_hartmann_closed_form",
    "j_r_ring_closed_form",
    "j_r_closed_form",
    "energy_hartmann",
    "energy_ring",
    "energy",
    "solve_level",
    "radial_turning_points",
    "angular_turning_points",
    "classical_action_closed_form",
    "SELF_CONSISTENCY_RTOL",
]

SELF_CONSISTENCY_RTOL = 1e-12
# discriminants this small relative to their terms are rounding noise around zero
_COINCIDENT_RTOL = 1e-13


def _centrifugal_root(a: float, hbar: float) -> float:
    radicand = (hbar / 2) ** 2 + a
    if radicand < 0:
        raise DomainError(f"a + (hbar/2)**2 must be >= 0, got a={a!r}")
    return math.sqrt(radicand)


def j_theta_closed_form(a: float, b: float, beta: float, units: UnitSystem) -> float:
    """Angular action sqrt((hbar/2)**2 + a) - sqrt(b + beta) - hbar/2."""
    if b + beta < 0:
        raise DomainError(f"b + beta must be >= 0, got {b + beta!r}")
    hbar = units.hbar
    return _centrifugal_root(a, hbar) - math.sqrt(b + beta) - hbar / 2


def j_r_hartmann_closed_form(E: float, a: float, alpha: float, units: UnitSystem) -> float:
    """Radial action of the Hartmann potential; ``alpha`` enters as ``abs(alpha)``."""
    if not E < 0:
        raise DomainError(f"Hartmann radial action needs E < 0, got {E!r}")
    hbar = units.hbar
    return abs(alpha) / (2 * math.sqrt(-E)) - hbar / 2 - _centrifugal_root(a, hbar)


def j_r_ring_closed_form(E: float, a: float, alpha: float, units: UnitSystem) -> float:
    """Radial action of the ring oscillator, half the sum of the origin and infinity poles."""
    if not E > 0:
        raise DomainError(f"ring radial action needs E > 0, got {E!r}")
    if not alpha > 0:
        raise DomainError(f"ring radial action needs alpha > 0, got {alpha!r}")
    hbar = units.hbar
    return 0.5 * (E / (2 * math.sqrt(alpha)) - hbar - _centrifugal_root(a, hbar))


def j_r_closed_form(potential: PotentialSpec, E: float, a: float, units: UnitSystem) -> float:
    if isinstance(potential, Hartmann):
        return j_r_hartmann_closed_form(E, a, potential.alpha, units)
    return j_r_ring_closed_form(E, a, potential.alpha, units)


def energy_hartmann(qn: QuantumNumbers, alpha: float, beta: float, units: UnitSystem) -> float:
    Hartmann(alpha, beta)
    hbar = units.hbar
    # integer sum first: degenerate (n_r, n_theta) pairs give bit-identical energies
    principal = (qn.n_r + qn.n_theta) + math.sqrt(beta / hbar**2 + qn.m * qn.m) + 1
    return -(alpha**2) / (4 * hbar**2 * principal**2)


def energy_ring(qn: QuantumNumbers, alpha: float, beta: float, units: UnitSystem) -> float:
    RingOscillator(alpha, beta)
    hbar = units.hbar
    return 2 * hbar * math.sqrt(alpha) * (
        (2 * qn.n_r + qn.n_theta) + 1.5 + math.sqrt(beta / hbar**2 + qn.m * qn.m)
    )


def energy(potential: PotentialSpec, qn: QuantumNumbers, units: UnitSystem) -> float:
    if isinstance(potential, Hartmann):
        return energy_hartmann(qn, potential.alpha, potential.beta, units)
    return energy_ring(qn, potential.alpha, potential.beta, units)


@dataclass(frozen=True)
class LevelRecord:
    """One bound state together with the action values that quantize it."""

    potential: PotentialSpec
    qn: QuantumNumbers
    energy: float
    constants: SeparationConstants
    l_squared: float
    j_theta: float
    j_r: float
    units: UnitSystem

    def __post_init__(self):
        if isinstance(self.potential, Hartmann) and not self.energy < 0:
            raise InvariantError("Hartmann level must have negative energy")
        if isinstance(self.potential, RingOscillator) and not self.energy > 0:
            raise InvariantError("ring oscillator level must have positive energy")
        hbar = self.units.hbar
        root = math.sqrt((hbar / 2) ** 2 + self.constants.a)
        if isinstance(self.potential, Hartmann):
            radial_scale = abs(self.potential.alpha) / (2 * math.sqrt(-self.energy))
        else:
            radial_scale = self.energy / (2 * math.sqrt(self.potential.alpha))
        for name, value, n, scale in (
            ("j_theta", self.j_theta, self.qn.n_theta, root),
            ("j_r", self.j_r, self.qn.n_r, max(root, radial_scale)),
        ):
            if abs(value - hbar * n) > SELF_CONSISTENCY_RTOL * max(hbar, scale):
                raise InvariantError(f"{name}={value!r} is not hbar*{n}")


def solve_level(potential: PotentialSpec, qn: QuantumNumbers, units: UnitSystem) -> LevelRecord:
    """Assemble every closed-form quantity for one level and check it self-consistently."""
    a = a_from_angular_quantization(qn.n_theta, qn.m, potential.beta, units)
    b = b_from_m(qn.m, units)
    E = energy(potential, qn, units)
    return LevelRecord(
        potential=potential,
        qn=qn,
        energy=E,
        constants=SeparationConstants(a=a, b=b),
        l_squared=l_squared(qn.n_theta, qn.m, potential.beta, units),
        j_theta=j_theta_closed_form(a, b, potential.beta, units),
        j_r=j_r_closed_form(potential, E, a, units),
        units=units,
    )


@dataclass(frozen=True)
class TurningPoints:
    inner: float
    outer: float

    def __post_init__(self):
        if not (0 <= self.inner < self.outer):
            raise NoClassicalRegionError(
                f"turning points must satisfy 0 <= inner < outer, got {self.inner}, {self.outer}"
            )

    @property
    def width(self) -> float:
        return self.outer - self.inner

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.inner + self.outer)


def radial_turning_points(potential: PotentialSpec, E: float, a: float) -> TurningPoints:
    """Nonnegative roots of E - V1(r) - a/r**2, in ascending order.

    For the ring oscillator the two negative roots of the quartic are the
    unphysical mirror images and are discarded. Roots that coincide to
    within rounding are reported as having no classical region.
    """
    if a < 0:
        raise DomainError(f"a must be >= 0 for radial turning points, got {a!r}")
    if isinstance(potential, Hartmann):
        if not E < 0:
            raise DomainError(f"Hartmann bound states need E < 0, got {E!r}")
        alpha = abs(potential.alpha)
        disc = alpha * alpha - 4 * (-E) * a
        if disc <= _COINCIDENT_RTOL * alpha * alpha:
            raise NoClassicalRegionError(f"no classical region: discriminant {disc!r}")
        root = math.sqrt(disc)
        outer = (alpha + root) / (2 * -E)
        # product of roots is a/(-E); avoids cancellation in (alpha - root)
        inner = a / (-E) / outer
        return TurningPoints(inner, outer)
    alpha = potential.alpha
    if not E > 0:
        raise DomainError(f"ring oscillator bound states need E > 0, got {E!r}")
    disc = E * E - 4 * a * alpha
    if disc <= _COINCIDENT_RTOL * E * E:
        raise NoClassicalRegionError(f"no classical region: discriminant {disc!r}")
    outer_sq = (E + math.sqrt(disc)) / (2 * alpha)
    inner_sq = a / alpha / outer_sq
    return TurningPoints(math.sqrt(inner_sq), math.sqrt(outer_sq))


def angular_turning_points(a: float, b: float, beta: float) -> TurningPoints:
    """Zeros of a - (b + beta)/sin(theta)**2 inside (0, pi)."""
    strength = b + beta
    if strength <= 0:
        raise NoClassicalRegionError("b + beta = 0: the angular momentum function has no turning points")
    if a <= strength:
        raise NoClassicalRegionError(f"a={a!r} must exceed b + beta={strength!r}")
    theta = math.asin(math.sqrt(strength / a))
    return TurningPoints(theta, math.pi - theta)


def _radial_discriminant(potential: PotentialSpec, E: float, a: float) -> float:
    if isinstance(potential, Hartmann):
        if not E < 0:
            raise DomainError(f"Hartmann bound states need E < 0, got {E!r}")
        return potential.alpha**2 - 4 * (-E) * a
    if not E > 0:
        raise DomainError(f"ring oscillator bound states need E > 0, got {E!r}")
    return E * E - 4 * a * potential.alpha


def classical_action_closed_form(potential: PotentialSpec, E: float, a: float) -> float:
    """(1/pi) * integral of sqrt(E - V_eff) between the radial turning points.

    A degenerate classical orbit (coincident turning points) has zero action
    and is accepted here; complex turning points are rejected.
    """
    if a < 0:
        raise DomainError(f"a must be >= 0, got {a!r}")
    disc = _radial_discriminant(potential, E, a)
    if disc < 0:
        raise NoClassicalRegionError(f"complex turning points: discriminant {disc!r}")
    if isinstance(potential, Hartmann):
        return abs(potential.alpha) / (2 * math.sqrt(-E)) - math.sqrt(a)
    return E / (4 * math.sqrt(potential.alpha)) - math.sqrt(a) / 2
