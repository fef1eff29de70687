"""Pole-by-pole evaluation of the quantum action variables.

Near each fixed singular point the quantum momentum function is expanded as
``p = b1/s + a0 + a1*s + ...`` in a local variable ``s``. Substituting into
the Riccati form of the separated equations and matching powers of ``s``
gives quadratics for the residue-bearing coefficient; the root is chosen so
that ``p`` tends to the classical momentum on the physical sheet. The
residue theorem then turns each coefficient into a contribution to J.

Local equations (2*mu = 1):

* theta, y = -cot(theta), pole at y = +i (s = y - i)::

      (hbar/i)((s**2 + 2is) p' - (s + i) p) + p**2 = a - (b+beta)(s**2 + 2is)

* theta, pole at y = -i (s = y + i): same with i -> -i
* theta, pole at y = infinity (s = 1/y)::

      -(hbar/i)((1 + s**2) p' + p/s) + p**2 = a - beta - b - (beta+b)/s**2

* r, pole at r = 0::

      (hbar/i)(p' + 2p/r) + p**2 = E - V1(r) - a/r**2

* r, pole at r = infinity (s = 1/r)::

      (hbar/i)(-s**2 p' + 2 s p) + p**2 = E - V1(1/s) - a s**2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError
from .potentials import Hartmann, PotentialSpec, UnitSystem

__all__ = [
    "LaurentCoefficients",
    "PoleContribution",
    "BRANCH_RULES",
    "pole_value",
    "matching_residuals",
    "theta_infinity_contribution",
    "theta_pole_contribution",
    "assemble_j_theta",
    "radial_origin_contribution",
    "radial_infinity_coulomb",
    "radial_infinity_oscillator",
    "radial_infinity_contribution",
    "assemble_j_r",
    "theta_contributions",
    "radial_contributions",
]

LOCATIONS = (
    "theta_plus_i",
    "theta_minus_i",
    "theta_infinity",
    "radial_origin",
    "radial_infinity",
)


@dataclass(frozen=True)
class LaurentCoefficients:
    """Leading Laurent coefficients; ``None`` where the matching leaves one undetermined.

    ``rejected`` holds the full coefficient set on the other root of the
    matching quadratic, kept so the wrong branch can be exercised.
    """

    b1: Optional[complex] = None
    a0: Optional[complex] = None
    a1: Optional[complex] = None
    rejected: Optional["LaurentCoefficients"] = field(default=None, compare=False)


@dataclass(frozen=True)
class PoleContribution:
    location: str
    value: float
    coefficients: LaurentCoefficients
    imag_residue: float = 0.0


# Which root each pole keeps, and why. The rule in every case is that p must
# reduce to the classical momentum branch that is positive just below the cut
# joining the turning points (equivalently, the branch of the decaying,
# regular wavefunction).
BRANCH_RULES = {
    "theta_infinity": ("b1", +1, "p_c ~ +i sqrt(beta+b)/s near y = infinity"),
    "theta_plus_i": ("a0", -1, "a0 = hbar/2 - sqrt(a + hbar**2/4) -> -sqrt(a) as hbar -> 0"),
    "theta_minus_i": ("a0", +1, "a0 = -hbar/2 + sqrt(a + hbar**2/4) -> +sqrt(a) as hbar -> 0"),
    "radial_origin": ("b1", -1, "p_c ~ -i sqrt(a)/r near r = 0 (regular solution)"),
    "radial_infinity": ("a0|b1", +1, "p_c -> +i sqrt(-E) (Coulomb) or +i sqrt(alpha) r (oscillator)"),
}


# Residue-theorem factor turning the coefficient into J, with the orientation
# of the distorted contour folded in.
def pole_value(location: str, coeffs: LaurentCoefficients) -> complex:
    """Contribution (1/2pi) * (+-2pi i) * residue for one pole."""
    if location == "theta_infinity":
        # counterclockwise, residue of p/(1 + s**2) at s = 0 is b1
        return 1j * coeffs.b1
    if location == "theta_plus_i":
        # clockwise, residue of p/(s (s + 2i)) is a0/(2i)
        return -1j * coeffs.a0 / 2j
    if location == "theta_minus_i":
        # clockwise, residue of p/(s (s - 2i)) is -a0/(2i)
        return -1j * coeffs.a0 / -2j
    if location == "radial_origin":
        # clockwise around r = 0
        return -1j * coeffs.b1
    if location == "radial_infinity":
        # counterclockwise, residue of p/s**2 is a1
        return 1j * coeffs.a1
    raise ValueError(f"unknown pole location {location!r}")


def _real_contribution(location: str, coeffs: LaurentCoefficients) -> PoleContribution:
    value = pole_value(location, coeffs)
    return PoleContribution(
        location=location,
        value=float(value.real),
        coefficients=coeffs,
        imag_residue=float(abs(value.imag)),
    )


def _sqrt_nonneg(x: float, what: str) -> float:
    if x < 0:
        raise DomainError(f"{what} must be >= 0, got {x!r}")
    return math.sqrt(x)


def theta_infinity_contribution(beta: float, b: float, units: UnitSystem) -> PoleContribution:
    # s**-2 terms: the hbar pieces cancel, leaving b1**2 = -(beta + b)
    root = _sqrt_nonneg(beta + b, "beta + b")
    keep = LaurentCoefficients(b1=1j * root)
    drop = LaurentCoefficients(b1=-1j * root)
    return _real_contribution(
        "theta_infinity", LaurentCoefficients(b1=keep.b1, rejected=drop)
    )


def theta_pole_contribution(a: float, units: UnitSystem, which: str = "+i") -> PoleContribution:
    """Contribution of the pole of the angular integrand at y = +i or y = -i.

    At both poles b1 = 0. The constant term solves a0**2 -+ hbar*a0 - a = 0,
    whose roots at y = -i are the negatives of those at y = +i, so the two
    contributions coincide.
    """
    hbar = units.hbar
    root = _sqrt_nonneg(a + (hbar / 2) ** 2, "a + (hbar/2)**2")
    if which == "+i":
        location, keep, drop = "theta_plus_i", hbar / 2 - root, hbar / 2 + root
    elif which == "-i":
        location, keep, drop = "theta_minus_i", -hbar / 2 + root, -hbar / 2 - root
    else:
        raise ValueError(f"which must be '+i' or '-i', got {which!r}")
    coeffs = LaurentCoefficients(
        b1=0j, a0=complex(keep), rejected=LaurentCoefficients(b1=0j, a0=complex(drop))
    )
    return _real_contribution(location, coeffs)


def theta_contributions(a: float, b: float, beta: float, units: UnitSystem):
    return (
        theta_pole_contribution(a, units, "+i"),
        theta_pole_contribution(a, units, "-i"),
        theta_infinity_contribution(beta, b, units),
    )


def assemble_j_theta(a: float, b: float, beta: float, units: UnitSystem) -> float:
    return math.fsum(c.value for c in theta_contributions(a, b, beta, units))


def radial_origin_contribution(a: float, units: UnitSystem) -> PoleContribution:
    # r**-2 terms: b1**2 - i*hbar*b1 + a = 0, identical for both potentials
    hbar = units.hbar
    root = _sqrt_nonneg(a + (hbar / 2) ** 2, "a + (hbar/2)**2")
    keep = 1j * hbar / 2 - 1j * root
    drop = 1j * hbar / 2 + 1j * root
    coeffs = LaurentCoefficients(b1=keep, rejected=LaurentCoefficients(b1=drop))
    return _real_contribution("radial_origin", coeffs)


def _coulomb_a1(a0: complex, alpha: float, hbar: float) -> complex:
    # s**1 terms: 2*(hbar/i)*a0 + 2*a0*a1 = -alpha
    return (-alpha - 2 * (hbar / 1j) * a0) / (2 * a0)


def radial_infinity_coulomb(E: float, alpha: float, units: UnitSystem) -> PoleContribution:
    """Pole at r = infinity for V1 = alpha/r.

    Matching gives b1 = 0, a0**2 = E, and a1 from the s**1 terms. The
    decaying branch is a0 = +i*sqrt(-E); with alpha < 0 this yields
    J = |alpha|/(2 sqrt(-E)) - hbar.
    """
    if not E < 0:
        raise DomainError(f"Coulomb pole at infinity needs E < 0, got {E!r}")
    hbar = units.hbar
    kappa = math.sqrt(-E)
    keep_a0, drop_a0 = 1j * kappa, -1j * kappa
    coeffs = LaurentCoefficients(
        b1=0j,
        a0=keep_a0,
        a1=_coulomb_a1(keep_a0, alpha, hbar),
        rejected=LaurentCoefficients(b1=0j, a0=drop_a0, a1=_coulomb_a1(drop_a0, alpha, hbar)),
    )
    return _real_contribution("radial_infinity", coeffs)


def _oscillator_a1(b1: complex, E: float, hbar: float) -> complex:
    # s**0 terms: 3*(hbar/i)*b1 + 2*b1*a1 = E
    return (E - 3 * (hbar / 1j) * b1) / (2 * b1)


def radial_infinity_oscillator(E: float, alpha: float, units: UnitSystem) -> PoleContribution:
    """Pole at r = infinity for V1 = alpha*r**2.

    Here p grows like r: b1**2 = -alpha, a0 = 0, and a1 follows from the
    s**0 terms. The Gaussian-decaying branch is b1 = +i*sqrt(alpha).
    """
    if not E > 0:
        raise DomainError(f"oscillator pole at infinity needs E > 0, got {E!r}")
    if not alpha > 0:
        raise DomainError(f"oscillator pole at infinity needs alpha > 0, got {alpha!r}")
    hbar = units.hbar
    keep_b1, drop_b1 = 1j * math.sqrt(alpha), -1j * math.sqrt(alpha)
    coeffs = LaurentCoefficients(
        b1=keep_b1,
        a0=0j,
        a1=_oscillator_a1(keep_b1, E, hbar),
        rejected=LaurentCoefficients(b1=drop_b1, a0=0j, a1=_oscillator_a1(drop_b1, E, hbar)),
    )
    return _real_contribution("radial_infinity", coeffs)


def radial_infinity_contribution(potential: PotentialSpec, E: float, units: UnitSystem):
    if isinstance(potential, Hartmann):
        return radial_infinity_coulomb(E, potential.alpha, units)
    return radial_infinity_oscillator(E, potential.alpha, units)


def radial_contributions(potential: PotentialSpec, E: float, a: float, units: UnitSystem):
    return radial_origin_contribution(a, units), radial_infinity_contribution(potential, E, units)


def assemble_j_r(potential: PotentialSpec, E: float, a: float, units: UnitSystem) -> float:
    """J_r from the fixed poles.

    For the ring oscillator the mirror-image moving poles on the negative
    axis contribute -J_r, so J_r is half the fixed-pole sum.
    """
    origin, infinity = radial_contributions(potential, E, a, units)
    total = origin.value + infinity.value
    if isinstance(potential, Hartmann):
        return total
    return 0.5 * total


def matching_residuals(location: str, coeffs: LaurentCoefficients, *, a=0.0, b=0.0,
                       beta=0.0, E=0.0, alpha=0.0, kind="coulomb", units: UnitSystem):
    """Left minus right side of each matched power, for the given coefficients.

    Returns a dict keyed by the power of ``s`` that was matched.
    """
    h = units.hbar / 1j
    if location == "theta_infinity":
        return {-2: coeffs.b1**2 + (beta + b)}
    if location == "theta_plus_i":
        return {-2: coeffs.b1**2, 0: coeffs.a0**2 - units.hbar * coeffs.a0 - a}
    if location == "theta_minus_i":
        return {-2: coeffs.b1**2, 0: coeffs.a0**2 + units.hbar * coeffs.a0 - a}
    if location == "radial_origin":
        return {-2: h * coeffs.b1 + coeffs.b1**2 + a}
    if location == "radial_infinity" and kind == "coulomb":
        return {
            -2: coeffs.b1**2,
            0: coeffs.a0**2 - E,
            1: 2 * h * coeffs.a0 + 2 * coeffs.a0 * coeffs.a1 + alpha,
        }
    if location == "radial_infinity":
        return {
            -2: coeffs.b1**2 + alpha,
            -1: 2 * coeffs.a0 * coeffs.b1,
            0: 3 * h * coeffs.b1 + 2 * coeffs.b1 * coeffs.a1 + coeffs.a0**2 - E,
        }
    raise ValueError(f"unknown pole location {location!r}")
