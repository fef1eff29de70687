"""Unit conventions, the two potential families and the quantum-number maps.

Everything is expressed in units with ``2*mu = 1``; only hbar is a free
parameter. The potentials share the separable form

    V(r, theta) = V1(r) + beta / (r**2 * sin(theta)**2)

with ``V1 = alpha/r`` (Hartmann) or ``V1 = alpha*r**2`` (ring-shaped
oscillator), and no phi dependence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Optional, Union

import numpy as np

from .errors import InvariantError

__all__ = [
    "UnitSystem",
    "Hartmann",
    "RingOscillator",
    "PotentialSpec",
    "QuantumNumbers",
    "SeparationConstants",
    "EffectiveRadialProblem",
    "EffectiveAngularProblem",
    "b_from_m",
    "a_from_angular_quantization",
    "l_squared",
    "mu_squared",
    "effective_radial_problem",
    "effective_angular_problem",
    "potential_from_name",
]


@dataclass(frozen=True)
class UnitSystem:
    """Action unit hbar; the mass convention 2*mu = 1 is fixed."""

    hbar: float = 1.0
    mass_convention: ClassVar[str] = "2mu=1"

    def __post_init__(self):
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise InvariantError(f"hbar must be positive and finite, got {self.hbar!r}")


def _check_beta(beta: float) -> None:
    if not (math.isfinite(beta) and beta >= 0):
        raise InvariantError(f"beta must be >= 0, got {beta!r}")


@dataclass(frozen=True)
class Hartmann:
    """Coulomb term plus ring-shaped inverse square term.

    ``alpha`` is signed and must be negative (attractive Coulomb well).
    Closed forms that the original derivation writes with ``alpha`` use
    ``abs(alpha)``; the spectrum only depends on ``alpha**2``.
    """

    alpha: float
    beta: float = 0.0
    name: ClassVar[str] = "hartmann"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha < 0):
            raise InvariantError(
                f"Hartmann alpha must be negative (attractive), got {self.alpha!r}"
            )
        _check_beta(self.beta)

    def radial_potential(self, r):
        return self.alpha / r

    def angular_potential(self, theta):
        return self.beta / np.sin(theta) ** 2

    def __call__(self, r, theta):
        return self.radial_potential(r) + self.angular_potential(theta) / r**2


@dataclass(frozen=True)
class RingOscillator:
    """Harmonic radial confinement plus the ring-shaped inverse square term."""

    alpha: float
    beta: float = 0.0
    name: ClassVar[str] = "ring"

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvariantError(
                f"RingOscillator alpha must be positive, got {self.alpha!r}"
            )
        _check_beta(self.beta)

    def radial_potential(self, r):
        return self.alpha * r**2

    def angular_potential(self, theta):
        return self.beta / np.sin(theta) ** 2

    def __call__(self, r, theta):
        return self.radial_potential(r) + self.angular_potential(theta) / r**2


PotentialSpec = Union[Hartmann, RingOscillator]


def potential_from_name(name: str, alpha: float, beta: float = 0.0) -> PotentialSpec:
    kinds = {"hartmann": Hartmann, "ring": RingOscillator}
    try:
        cls = kinds[name.lower()]
    except KeyError:
        raise InvariantError(f"unknown potential {name!r}; expected one of {sorted(kinds)}")
    return cls(alpha, beta)


@dataclass(frozen=True)
class QuantumNumbers:
    n_r: int
    n_theta: int
    m: int

    def __post_init__(self):
        for field in ("n_r", "n_theta", "m"):
            value = getattr(self, field)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvariantError(f"{field} must be an integer, got {value!r}")
        if self.n_r < 0 or self.n_theta < 0:
            raise InvariantError(f"n_r and n_theta must be >= 0, got {self}")


@dataclass(frozen=True)
class SeparationConstants:
    """``a`` links the r and theta equations, ``b`` the theta and phi ones."""

    a: float
    b: float


@dataclass(frozen=True)
class EffectiveRadialProblem:
    """Radial equation with centrifugal coefficient ``big_l*(big_l+1)*hbar**2``."""

    potential: PotentialSpec
    big_l: float
    units: UnitSystem
    energy_hint: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.big_l) and self.big_l >= 0):
            raise InvariantError(f"big_l must be >= 0, got {self.big_l!r}")

    @property
    def centrifugal(self) -> float:
        """Separation constant a = hbar**2 * L(L+1)."""
        return self.units.hbar**2 * self.big_l * (self.big_l + 1.0)


@dataclass(frozen=True)
class EffectiveAngularProblem:
    """Angular equation H'' = ((mu**2 - 1/4)/sin**2 - l**2) H."""

    mu_squared: float
    l_squared_hint: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.mu_squared) and self.mu_squared >= 0):
            raise InvariantError(f"mu_squared must be >= 0, got {self.mu_squared!r}")

    @property
    def mu(self) -> float:
        return math.sqrt(self.mu_squared)


def b_from_m(m: int, units: UnitSystem) -> float:
    """Azimuthal separation constant from the periodicity of exp(i*m*phi)."""
    return units.hbar**2 * m * m


def mu_squared(m: int, beta: float, units: UnitSystem) -> float:
    """Strength of the 1/sin**2 term in the angular equation, m**2 + beta/hbar**2."""
    _check_beta(beta)
    return m * m + beta / units.hbar**2


def a_from_angular_quantization(n_theta: int, m: int, beta: float, units: UnitSystem) -> float:
    """Invert J_theta = hbar*n_theta for the separation constant ``a``."""
    _check_beta(beta)
    hbar = units.hbar
    root = hbar * n_theta + math.sqrt(b_from_m(m, units) + beta) + hbar / 2
    return root * root - (hbar / 2) ** 2


def l_squared(n_theta: int, m: int, beta: float, units: UnitSystem) -> float:
    """Angular eigenvalue (n_theta + sqrt(m**2 + beta/hbar**2) + 1/2)**2."""
    ell = n_theta + math.sqrt(mu_squared(m, beta, units)) + 0.5
    return ell * ell


def effective_radial_problem(
    potential: PotentialSpec, qn: QuantumNumbers, units: UnitSystem
) -> EffectiveRadialProblem:
    # L = l - 1/2 written without the square root of l**2 so integer cases stay exact
    big_l = qn.n_theta + math.sqrt(mu_squared(qn.m, potential.beta, units))
    return EffectiveRadialProblem(potential=potential, big_l=big_l, units=units)


def effective_angular_problem(
    qn: QuantumNumbers, beta: float, units: UnitSystem
) -> EffectiveAngularProblem:
    return EffectiveAngularProblem(
        mu_squared=mu_squared(qn.m, beta, units),
        l_squared_hint=l_squared(qn.n_theta, qn.m, beta, units),
    )
